#pragma once

#include <functional>
#include <span>
#include <vector>

#include "corrucas/casimir.hpp"
#include "corrucas/profile.hpp"

namespace corrucas {

inline constexpr int kDefaultSweepSamples = 512;
inline constexpr int kMinSweepSamples = 16;

struct ForceSample {
    double x0 = 0.0;    ///< meters, in [0, L)
    double left = 0.0;  ///< force per area (or F/|F0| when dimensionless)
    double right = 0.0;
    bool breakpoint = false;

    double mid() const noexcept { return 0.5 * (left + right); }
};

struct ForceCurveMetadata {
    Geometry geometry;
    bool dimensionless = false;
    double force_scale = 1.0; ///< |F0(a)| in N/m^2
};

/// Lateral force sampled over one period.
class ForceCurve {
public:
    /// Evaluates the force (in the curve's units) at a position in meters.
    using Evaluator = std::function<OneSided(double)>;

    using Metadata = ForceCurveMetadata;

    /// Samples must be strictly increasing in [0, period).
    ForceCurve(double period, std::vector<ForceSample> samples, Metadata metadata = {}, Evaluator evaluator = {});

    double period() const noexcept { return period_; }
    std::span<const ForceSample> samples() const noexcept { return samples_; }
    const Metadata& metadata() const noexcept { return metadata_; }
    const Evaluator& evaluator() const noexcept { return evaluator_; }

private:
    double period_;
    std::vector<ForceSample> samples_;
    Metadata metadata_;
    Evaluator evaluator_;
};

/// Uniform grid of n_samples phases plus every force breakpoint. With
/// `dimensionless` the values are F_lat / |F0(a)|. `threads` = 0 picks the
/// hardware concurrency; results do not depend on it.
ForceCurve sweep(const PlatePair& pair, int n_samples = kDefaultSweepSamples, bool dimensionless = true,
                 unsigned threads = 1);

enum class EquilibriumKind { stable, unstable };
enum class EquilibriumMechanism { continuous_zero, sign_jump };

const char* to_string(EquilibriumKind kind) noexcept;
const char* to_string(EquilibriumMechanism mechanism) noexcept;

struct EquilibriumPoint {
    double x0 = 0.0;
    EquilibriumKind kind = EquilibriumKind::stable;
    EquilibriumMechanism mechanism = EquilibriumMechanism::continuous_zero;
    OneSided force;
    /// -dF/dx0 at a continuous zero (positive when stable). At a sign jump
    /// the slope is unbounded and the restoring forces are `force` itself.
    OneSided stiffness;
};

/// Bisection tolerance on positions, relative to the period.
inline constexpr double kRootTolerance = 1e-10;

/// Zeros of the force over one period, sorted by position. Throws
/// DegenerateCurve for an all-zero curve.
std::vector<EquilibriumPoint> find_equilibria(const ForceCurve& curve);

/// Largest positive force divided by the largest negative force magnitude,
/// over both one-sided values. +inf when the force never goes negative.
double force_asymmetry(const ForceCurve& curve);

struct WorkResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Integral of the force over one period. Each smooth stretch between
/// breakpoints is integrated with the trapezoid rule plus one Richardson
/// step; the estimate is the size of that correction.
WorkResult work_over_period(const ForceCurve& curve);

/// Power left after a least-squares fit of c0 + c1 cos + s1 sin (first
/// harmonic), as a fraction of the total power of the samples.
double first_harmonic_residual(const ForceCurve& curve);

struct ScanBase {
    double separation = 0.0;
    double amplitude = 0.0; ///< A1 = A2
    double period = 0.0;
    double hbar_c = kHbarC;
    int samples = kDefaultSweepSamples;
    unsigned threads = 1;
};

struct ScanRow {
    double delta = 0.0;
    double unstable_x0 = 0.0; ///< meters
    double asymmetry = 0.0;
};

/// For each delta: flat-segment saw tooth (lower) against a saw tooth
/// (upper), sweep, and record the unstable equilibrium and asymmetry ratio.
std::vector<ScanRow> delta_scan(const ScanBase& base, std::span<const double> deltas);

} // namespace corrucas
