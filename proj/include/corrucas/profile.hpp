#pragma once

// Periodic corrugation shapes f(x): zero mean over a period and max |f| = 1.
// The physical height A*f(x) keeps the amplitude outside the profile.

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "corrucas/polynomial.hpp"

namespace corrucas {

/// Left and right limits of a piecewise-smooth quantity at a point.
struct OneSided {
    double left = 0.0;
    double right = 0.0;

    /// Point value at a discontinuity: half the sum of the limits.
    double mid() const noexcept { return 0.5 * (left + right); }
    bool continuous() const noexcept { return left == right; }
};

/// Phases closer than this are treated as the same point.
inline constexpr double kPhaseTolerance = 1e-12;

/// Reduce a phase x/L to [0, 1).
double reduce_phase(double s) noexcept;

/// Exact-path tolerances for the zero-mean / unit-max invariants.
inline constexpr double kExactNormTolerance = 1e-12;
/// Same invariants checked numerically on analytic profiles.
inline constexpr double kAnalyticNormTolerance = 1e-9;

/// One polynomial piece. `start`/`end` are positions in meters; `shape` is a
/// polynomial in the dimensionless local coordinate (x - start) / period.
struct Segment {
    double start = 0.0;
    double end = 0.0;
    Polynomial shape;
};

class PiecewisePolyProfile {
public:
    static constexpr int kMaxSegmentDegree = 8;

    /// Segments must tile [0, period) in order. Throws InvalidArgument otherwise.
    PiecewisePolyProfile(double period, std::vector<Segment> segments);

    double period() const noexcept { return period_; }
    std::span<const Segment> segments() const noexcept { return segments_; }

    OneSided eval(double x) const;
    /// Evaluation at phase s = x / period, reduced modulo 1.
    OneSided eval_phase(double s) const;
    /// df/ds at phase s.
    OneSided slope_phase(double s) const;

    /// Segment starts as phases in [0, 1).
    std::vector<double> breakpoints_phase() const;

    double mean() const;
    double max_abs() const;

private:
    std::size_t locate(double s) const;
    double local(std::size_t i, double s) const;

    double period_;
    std::vector<Segment> segments_;
    std::vector<double> starts_; // phases
};

enum class Smoothness { smooth, has_jumps };

/// A profile given by an arbitrary evaluator, e.g. a sinusoid.
class AnalyticProfile {
public:
    /// Maps position in meters (any real) to the dimensionless height.
    using Function = std::function<double(double)>;

    /// `breakpoints` are phases in [0, 1) of jumps or kinks; required when
    /// `smoothness` is has_jumps. `derivative` is df/dx in 1/m; if empty a
    /// five-point stencil is used.
    AnalyticProfile(double period, Function f, Smoothness smoothness, std::vector<double> breakpoints = {},
                    Function derivative = {});

    double period() const noexcept { return period_; }
    Smoothness smoothness() const noexcept { return smoothness_; }
    std::span<const double> breakpoints_phase() const noexcept { return breakpoints_; }

    OneSided eval(double x) const;
    OneSided eval_phase(double s) const;
    /// df/ds away from breakpoints.
    double slope_phase(double s) const;

    double mean() const;
    double max_abs() const;

    const Function& function() const noexcept { return f_; }
    const Function& derivative() const noexcept { return df_; }

private:
    double period_;
    Function f_;
    Smoothness smoothness_;
    std::vector<double> breakpoints_;
    Function df_;
};

using Profile = std::variant<PiecewisePolyProfile, AnalyticProfile>;

double period_of(const Profile& p);
OneSided eval(const Profile& p, double x);
double mean_of(const Profile& p);
double max_abs_of(const Profile& p);

/// True when |mean| and |max|f| - 1| are within the path's tolerance.
bool is_normalized(const Profile& p);

template <class P>
struct Normalized {
    P profile;
    /// max |f - mean| of the input; fold into the amplitude A.
    double scale;
};

/// Subtract the period mean, then divide by max |f|.
/// Throws DegenerateProfile for an identically-zero (after centering) input.
Normalized<PiecewisePolyProfile> normalize(const PiecewisePolyProfile& p);
Normalized<AnalyticProfile> normalize(const AnalyticProfile& p);
Normalized<Profile> normalize(const Profile& p);

/// f1(x) = 2x/L - 1 on [0, L).
PiecewisePolyProfile make_sawtooth_lower(double period);
/// f2(x) = 1 - 2x/L on [0, L); the phase shift is applied by the moment engine.
PiecewisePolyProfile make_sawtooth_upper(double period);
/// Saw tooth with a flat segment of length delta*L at height -(1-delta)/(1+delta).
PiecewisePolyProfile make_flat_sawtooth(double period, double delta);
/// cos(2 pi x / L).
AnalyticProfile make_sinusoid(double period);

} // namespace corrucas
