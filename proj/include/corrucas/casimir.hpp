#pragma once

// Casimir pressure, energy and lateral force between two corrugated plates in
// the large-period perturbative expansion up to fourth order in A/a.
//
// Sign convention: F0 and E0 are negative (attractive). Closed-form saw-tooth
// results are written in terms of |F0|.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "corrucas/moments.hpp"
#include "corrucas/profile.hpp"

namespace corrucas {

/// hbar * c in J*m (CODATA 2018).
inline constexpr double kHbarC = 1.054571817e-34 * 299792458.0;

struct Geometry {
    double separation = 0.0;       ///< a, mean gap in meters
    double amplitude_lower = 0.0;  ///< A1
    double amplitude_upper = 0.0;  ///< A2
    double period = 0.0;           ///< L
};

class PairMoments;

/// Two corrugated plates: z1 = A1 f1(x), z2 = a + A2 f2(x - x0).
/// Immutable; cross-moments are prepared once at construction.
class PlatePair {
public:
    /// Throws InvalidArgument unless a > 0, L > 0, A1, A2 >= 0, A1 + A2 < a,
    /// both profiles normalized and sharing the period L.
    PlatePair(Geometry geometry, Profile lower, Profile upper, double hbar_c = kHbarC,
              QuadratureSpec quadrature = {});

    const Geometry& geometry() const noexcept { return geometry_; }
    double separation() const noexcept { return geometry_.separation; }
    double amplitude_lower() const noexcept { return geometry_.amplitude_lower; }
    double amplitude_upper() const noexcept { return geometry_.amplitude_upper; }
    double period() const noexcept { return geometry_.period; }
    double hbar_c() const noexcept { return hbar_c_; }
    const Profile& lower() const noexcept { return lower_; }
    const Profile& upper() const noexcept { return upper_; }

    /// True when both profiles are piecewise polynomial (exact moments).
    bool exact() const noexcept;

    /// <f1^k f2^l> at shift x0.
    double moment(int k, int l, double x0) const;
    /// d/dx0 <f1^k f2^l> at x0, one-sided.
    OneSided moment_slope(int k, int l, double x0) const;

    /// Phases in [0, 1) where the lateral force or its slope may jump.
    std::vector<double> force_breakpoints() const;

    /// Same plates at another separation.
    PlatePair with_separation(double a) const;

private:
    Geometry geometry_;
    Profile lower_;
    Profile upper_;
    double hbar_c_;
    QuadratureSpec quadrature_;
    std::shared_ptr<const PairMoments> moments_;
};

struct ValidityReport {
    double amplitude_ratio_lower = 0.0; ///< A1 / a
    double amplitude_ratio_upper = 0.0; ///< A2 / a
    double period_ratio = 0.0;          ///< a / L
    bool warn_amplitude = false;        ///< max(A1, A2) / a > 0.3
    bool warn_period = false;           ///< L / a < 3
    std::vector<std::string> messages;

    bool ok() const noexcept { return !warn_amplitude && !warn_period; }
};

inline constexpr double kAmplitudeWarnRatio = 0.3;
inline constexpr double kPeriodWarnRatio = 3.0;

/// Flat-plate pressure F0(a) = -pi^2 hbar c / (240 a^4).
double flat_force(double a, double hbar_c = kHbarC);
/// Flat-plate energy per area E0(a) = -pi^2 hbar c / (720 a^3).
double flat_energy(double a, double hbar_c = kHbarC);

double normal_force(const PlatePair& pair, double x0);
double casimir_energy(const PlatePair& pair, double x0);
/// F_lat = -dE/dx0. Both one-sided values; mid() is the point value at a jump.
OneSided lateral_force(const PlatePair& pair, double x0);

/// Closed-form lateral force for equal saw teeth, x0 reduced to [0, L).
double lateral_force_sawtooth_closed(double a, double amplitude, double period, double x0, double hbar_c = kHbarC);
/// Closed-form lateral force for the flat-segment saw tooth against a saw
/// tooth; x0 <= delta*L uses the short-shift branch, otherwise the long-shift one.
double lateral_force_asymmetric_closed(double a, double amplitude, double period, double delta, double x0,
                                       double hbar_c = kHbarC);

/// The two branches of the asymmetric closed form, exposed for continuity checks.
double lateral_force_asymmetric_short_branch(double a, double amplitude, double period, double delta, double x0,
                                             double hbar_c = kHbarC);
double lateral_force_asymmetric_long_branch(double a, double amplitude, double period, double delta, double x0,
                                            double hbar_c = kHbarC);

/// Zero of the leading-order asymmetric force: L (1 + delta^2) / 2.
double unstable_equilibrium_closed(double period, double delta);

ValidityReport validity_report(const PlatePair& pair);

} // namespace corrucas
