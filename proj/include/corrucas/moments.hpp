#pragma once

// Cross-moments <f1^k f2^l>(x0) = (1/L) * integral over one period of
// f1(x)^k f2(x - x0)^l dx, for k + l <= 4.

#include <span>
#include <vector>

#include "corrucas/polynomial.hpp"
#include "corrucas/profile.hpp"

namespace corrucas {

inline constexpr int kMaxMomentOrder = 4;

class MomentDerivative;

/// Exact cross-moment as a piecewise polynomial in the phase t = x0 / L.
/// Pieces tile [0, 1); the curve is continuous and 1-periodic in t.
class MomentCurve {
public:
    /// `breaks` has pieces.size() + 1 ascending phases from 0 to 1.
    MomentCurve(double period, int k, int l, std::vector<double> breaks, std::vector<Polynomial> pieces);

    double period() const noexcept { return period_; }
    int k() const noexcept { return k_; }
    int l() const noexcept { return l_; }
    std::span<const double> breaks() const noexcept { return breaks_; }
    std::span<const Polynomial> pieces() const noexcept { return pieces_; }

    /// Value at shift x0 (meters, any real).
    double operator()(double x0) const { return at_phase(x0 / period_); }
    double at_phase(double t) const;

    MomentDerivative derivative() const;

private:
    double period_;
    int k_;
    int l_;
    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_;
};

/// d/dx0 of a MomentCurve, in 1/m. May jump at piece boundaries, so
/// evaluation returns both one-sided values.
class MomentDerivative {
public:
    MomentDerivative(double period, std::vector<double> breaks, std::vector<Polynomial> phase_pieces);

    OneSided operator()(double x0) const { return at_phase(x0 / period_); }
    OneSided at_phase(double t) const;

    std::span<const double> breaks() const noexcept { return breaks_; }

private:
    double period_;
    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_; // d/dt, divided by the period at evaluation
};

inline MomentDerivative moment_derivative(const MomentCurve& curve) { return curve.derivative(); }

/// Exact correlation of piecewise polynomials: the x0 axis is cut at every
/// difference of breakpoints of f1^k and f2^l; on each cell the moment is a
/// single polynomial obtained by closed-form integration over the panels.
/// Throws IncompatibleProfiles on a period mismatch, UnsupportedOrder for k + l > 4.
MomentCurve cross_moment_exact(const PiecewisePolyProfile& p1, const PiecewisePolyProfile& p2, int k, int l);

struct QuadratureSpec {
    int subdivisions = 1; ///< initial Gauss panels per smooth piece
    int order = 12;       ///< Gauss-Legendre nodes per panel
    double tolerance = 1e-12;
    int max_subdivisions = 4096;

    void validate() const;
};

/// Same integral by composite Gauss-Legendre quadrature, with panels split at
/// all breakpoints of f1 and of the shifted f2. Subdivisions double until two
/// successive estimates agree to `tolerance`; otherwise ConvergenceFailure.
double cross_moment_numeric(const Profile& p1, const Profile& p2, int k, int l, double x0,
                            const QuadratureSpec& spec = {});

/// d/dx0 of the cross-moment by quadrature. Jumps of f1^k contribute
/// point terms, which makes the result one-sided where a jump of f1 meets a
/// jump of the shifted f2.
OneSided cross_moment_derivative_numeric(const Profile& p1, const Profile& p2, int k, int l, double x0,
                                         const QuadratureSpec& spec = {});

/// Phases t in [0, 1) at which some breakpoint of p1 meets a shifted
/// breakpoint of p2. Always contains 0.
std::vector<double> critical_shifts(std::span<const double> breaks1, std::span<const double> breaks2);
std::vector<double> breakpoints_phase(const Profile& p);

/// Reference moments for the lower/upper saw-tooth pair.
struct SawtoothMoments {
    double f1_f2;       ///< <f1 f2>
    double f1sq_f2;     ///< <f1^2 f2> = <f1 f2^2>
    double f1cu_f2;     ///< <f1^3 f2> = <f1 f2^3>
    double f1sq_f2sq;   ///< <f1^2 f2^2>
};

/// Literal polynomials for the saw-tooth pair; the argument is reduced modulo 1.
SawtoothMoments sawtooth_moments_closed_form(double x0_over_period);

} // namespace corrucas
