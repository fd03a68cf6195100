#include "corrucas/casimir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "corrucas/errors.hpp"

namespace corrucas {

namespace {

constexpr int kOrders = kMaxMomentOrder + 1;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}

void require_delta(double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in [0, 1)");
}

void require_closed_geometry(double a, double amplitude, double period) {
    require_positive(a, "separation");
    require_positive(amplitude, "amplitude");
    require_positive(period, "period");
    if (!(amplitude < 0.5 * a)) throw InvalidArgument("closed forms need amplitude < separation / 2");
}

} // namespace

/// Moment table for a plate pair: exact piecewise-polynomial curves when both
/// profiles allow it, otherwise quadrature on demand.
class PairMoments {
public:
    PairMoments(const Profile& lower, const Profile& upper, QuadratureSpec spec)
        : lower_(lower), upper_(upper), spec_(spec) {
        const auto* p1 = std::get_if<PiecewisePolyProfile>(&lower_);
        const auto* p2 = std::get_if<PiecewisePolyProfile>(&upper_);
        if (p1 == nullptr || p2 == nullptr) return;
        exact_ = true;
        for (int k = 0; k < kOrders; ++k)
            for (int l = 0; k + l < kOrders; ++l) {
                curves_[k][l] = std::make_unique<MomentCurve>(cross_moment_exact(*p1, *p2, k, l));
                slopes_[k][l] = std::make_unique<MomentDerivative>(curves_[k][l]->derivative());
            }
    }

    bool exact() const noexcept { return exact_; }

    double value(int k, int l, double x0) const {
        if (exact_) return (*curves_[k][l])(x0);
        return cross_moment_numeric(lower_, upper_, k, l, x0, spec_);
    }

    OneSided slope(int k, int l, double x0) const {
        if (exact_) return (*slopes_[k][l])(x0);
        return cross_moment_derivative_numeric(lower_, upper_, k, l, x0, spec_);
    }

    std::vector<double> breakpoints() const {
        std::vector<double> out;
        if (exact_) {
            for (int k = 0; k < kOrders; ++k)
                for (int l = 0; k + l < kOrders; ++l) {
                    const auto b = curves_[k][l]->breaks();
                    out.insert(out.end(), b.begin(), b.end() - 1);
                }
        } else {
            out = critical_shifts(breakpoints_phase(lower_), breakpoints_phase(upper_));
        }
        std::sort(out.begin(), out.end());
        std::vector<double> unique;
        for (double b : out)
            if (unique.empty() || b - unique.back() > kPhaseTolerance) unique.push_back(b);
        return unique;
    }

private:
    Profile lower_;
    Profile upper_;
    QuadratureSpec spec_;
    bool exact_ = false;
    std::unique_ptr<MomentCurve> curves_[kOrders][kOrders];
    std::unique_ptr<MomentDerivative> slopes_[kOrders][kOrders];
};

// PlatePair

PlatePair::PlatePair(Geometry geometry, Profile lower, Profile upper, double hbar_c, QuadratureSpec quadrature)
    : geometry_(geometry), lower_(std::move(lower)), upper_(std::move(upper)), hbar_c_(hbar_c),
      quadrature_(quadrature) {
    require_positive(geometry_.separation, "separation");
    require_positive(geometry_.period, "period");
    require_positive(hbar_c_, "hbar_c");
    if (!(geometry_.amplitude_lower >= 0.0) || !(geometry_.amplitude_upper >= 0.0))
        throw InvalidArgument("amplitudes must be non-negative");
    if (!(geometry_.amplitude_lower + geometry_.amplitude_upper < geometry_.separation))
        throw InvalidArgument("A1 + A2 must be smaller than the separation (surfaces would touch)");
    const double tol = 1e-12 * geometry_.period;
    if (std::abs(period_of(lower_) - geometry_.period) > tol || std::abs(period_of(upper_) - geometry_.period) > tol)
        throw IncompatibleProfiles("profile periods must equal the pair period");
    if (!is_normalized(lower_)) throw InvalidArgument("lower profile is not normalized (zero mean, max |f| = 1)");
    if (!is_normalized(upper_)) throw InvalidArgument("upper profile is not normalized (zero mean, max |f| = 1)");
    quadrature_.validate();
    moments_ = std::make_shared<const PairMoments>(lower_, upper_, quadrature_);
}

bool PlatePair::exact() const noexcept { return moments_->exact(); }

double PlatePair::moment(int k, int l, double x0) const { return moments_->value(k, l, x0); }

OneSided PlatePair::moment_slope(int k, int l, double x0) const { return moments_->slope(k, l, x0); }

std::vector<double> PlatePair::force_breakpoints() const { return moments_->breakpoints(); }

PlatePair PlatePair::with_separation(double a) const {
    require_positive(a, "separation");
    if (!(geometry_.amplitude_lower + geometry_.amplitude_upper < a))
        throw InvalidArgument("A1 + A2 must be smaller than the separation (surfaces would touch)");
    PlatePair copy = *this;
    copy.geometry_.separation = a;
    return copy;
}

// Flat plates

double flat_force(double a, double hbar_c) {
    require_positive(a, "separation");
    const double a2 = a * a;
    return -std::numbers::pi * std::numbers::pi * hbar_c / (240.0 * a2 * a2);
}

double flat_energy(double a, double hbar_c) {
    require_positive(a, "separation");
    return -std::numbers::pi * std::numbers::pi * hbar_c / (720.0 * a * a * a);
}

// Perturbative expansion

namespace {

// Order-n bracket sum_j (-1)^j C(n, j) <f1^(n-j) f2^j> A1^(n-j) A2^j, n = 2..4.
std::array<double, 3> expansion_terms(const PlatePair& pair, double x0) {
    static constexpr int kBinom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    const double a1 = pair.amplitude_lower();
    const double a2 = pair.amplitude_upper();
    std::array<double, 3> out{};
    for (int n = 2; n <= 4; ++n) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double amp = std::pow(a1, n - j) * std::pow(a2, j);
            if (amp == 0.0) continue;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            sum += sign * kBinom[n][j] * pair.moment(n - j, j, x0) * amp;
        }
        out[static_cast<std::size_t>(n - 2)] = sum;
    }
    return out;
}

} // namespace

double normal_force(const PlatePair& pair, double x0) {
    const double a = pair.separation();
    const auto s = expansion_terms(pair, x0);
    return flat_force(a, pair.hbar_c()) *
           (1.0 + 10.0 * s[0] / (a * a) + 20.0 * s[1] / (a * a * a) + 35.0 * s[2] / (a * a * a * a));
}

double casimir_energy(const PlatePair& pair, double x0) {
    const double a = pair.separation();
    const auto s = expansion_terms(pair, x0);
    return flat_energy(a, pair.hbar_c()) *
           (1.0 + 6.0 * s[0] / (a * a) + 10.0 * s[1] / (a * a * a) + 15.0 * s[2] / (a * a * a * a));
}

OneSided lateral_force(const PlatePair& pair, double x0) {
    const double a = pair.separation();
    const double a1 = pair.amplitude_lower();
    const double a2 = pair.amplitude_upper();
    if (a1 == 0.0 || a2 == 0.0) return {0.0, 0.0};
    const double r1 = a1 / a;
    const double r2 = a2 / a;

    const OneSided d11 = pair.moment_slope(1, 1, x0);
    const OneSided d21 = pair.moment_slope(2, 1, x0);
    const OneSided d12 = pair.moment_slope(1, 2, x0);
    const OneSided d31 = pair.moment_slope(3, 1, x0);
    const OneSided d22 = pair.moment_slope(2, 2, x0);
    const OneSided d13 = pair.moment_slope(1, 3, x0);

    // -dE/dx0 of the energy expansion; the prefactor is 2 A1 A2 / a.
    const double prefactor = flat_force(a, pair.hbar_c()) * 2.0 * a1 * a2 / a;
    auto bracket = [&](double m11, double m21, double m12, double m31, double m22, double m13) {
        return 2.0 * m11 + 5.0 * (r1 * m21 - r2 * m12) + 10.0 * (r1 * r1 * m31 - 1.5 * r1 * r2 * m22 + r2 * r2 * m13);
    };
    return {prefactor * bracket(d11.left, d21.left, d12.left, d31.left, d22.left, d13.left),
            prefactor * bracket(d11.right, d21.right, d12.right, d31.right, d22.right, d13.right)};
}

// Closed forms

double lateral_force_sawtooth_closed(double a, double amplitude, double period, double x0, double hbar_c) {
    require_closed_geometry(a, amplitude, period);
    const double t = reduce_phase(x0 / period);
    const double r = amplitude / a;
    const double scale = 8.0 * std::abs(flat_force(a, hbar_c)) * amplitude * amplitude / (a * period);
    return scale * (2.0 * t - 1.0) * (1.0 + 10.0 * r * r * (1.0 - 2.0 * t + 2.0 * t * t));
}

double lateral_force_asymmetric_short_branch(double a, double amplitude, double period, double delta, double x0,
                                             double hbar_c) {
    require_closed_geometry(a, amplitude, period);
    require_delta(delta);
    const double t = x0 / period;
    const double r = amplitude / a;
    const double d = delta;
    const double d2 = d * d;
    const double scale = 8.0 * std::abs(flat_force(a, hbar_c)) * amplitude * amplitude / (a * period);
    const double third = 10.0 / 3.0 * r / (1.0 + d) * (d * (3.0 + d) - 3.0 * t * (1.0 + d));
    const double fourth = 10.0 * r * r *
                          ((1.0 + 5.0 * d2 + 4.0 * d2 * d + d2 * d2) / ((1.0 + d) * (1.0 + d)) -
                           4.0 * t * d * (3.0 + d) / (1.0 + d) + 6.0 * t * t);
    return -scale * (1.0 - d) / (1.0 + d) * (1.0 + third + fourth);
}

double lateral_force_asymmetric_long_branch(double a, double amplitude, double period, double delta, double x0,
                                            double hbar_c) {
    require_closed_geometry(a, amplitude, period);
    require_delta(delta);
    const double t = x0 / period;
    const double r = amplitude / a;
    const double d = delta;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d2 * d2;
    const double one_m = 1.0 - d2;
    const double scale = 8.0 * std::abs(flat_force(a, hbar_c)) * amplitude * amplitude / (a * period);

    // X1 and X2 share the denominator (1 + d^2 - 2t), which cancels against
    // the leading factor (2t - 1 - d^2); the products below are pole-free.
    const double p1 = 2.0 - 3.0 * d + 3.0 * d2 + d3 - 3.0 * (1.0 + d2) * t + 3.0 * t * t;
    const double p2 = 1.0 - d2 + 10.0 * d4 - 12.0 * d4 * d + d4 * d2 + 4.0 * d4 * d3 + d4 * d4 -
                      4.0 * t * (1.0 - d2 + 3.0 * d3 - 4.0 * d4 * d + 3.0 * d4 * d2 + d4 * d3) +
                      6.0 * t * t * (1.0 + d4 * d2) - 4.0 * t * t * t * (1.0 - d2 + d4);
    const double lead = 2.0 * t - 1.0 - d2;
    const double lead_x1 = d2 * p1 / one_m;          // lead * X1
    const double lead_x2 = -p2 / (one_m * one_m);    // lead * X2
    return scale / one_m * (lead + 10.0 / 3.0 * r * lead_x1 + 10.0 * r * r * lead_x2);
}

double lateral_force_asymmetric_closed(double a, double amplitude, double period, double delta, double x0,
                                       double hbar_c) {
    if (std::isnan(delta) || delta < 0.0) throw InvalidArgument("delta must lie in [0, 1)");
    if (delta >= 1.0) throw DegenerateProfile("delta >= 1 leaves no ramp segment");
    require_closed_geometry(a, amplitude, period);
    const double t = reduce_phase(x0 / period);
    if (t <= delta) return lateral_force_asymmetric_short_branch(a, amplitude, period, delta, t * period, hbar_c);
    return lateral_force_asymmetric_long_branch(a, amplitude, period, delta, t * period, hbar_c);
}

double unstable_equilibrium_closed(double period, double delta) {
    require_positive(period, "period");
    require_delta(delta);
    return period * (1.0 + delta * delta) / 2.0;
}

ValidityReport validity_report(const PlatePair& pair) {
    ValidityReport report;
    const double a = pair.separation();
    report.amplitude_ratio_lower = pair.amplitude_lower() / a;
    report.amplitude_ratio_upper = pair.amplitude_upper() / a;
    report.period_ratio = a / pair.period();
    const double amp = std::max(report.amplitude_ratio_lower, report.amplitude_ratio_upper);
    const double period_over_a = pair.period() / a;
    // Relative slack so the boundary values themselves do not flag on rounding.
    report.warn_amplitude = amp > kAmplitudeWarnRatio * (1.0 + 1e-12);
    report.warn_period = period_over_a < kPeriodWarnRatio * (1.0 - 1e-12);
    if (report.warn_amplitude) {
        std::ostringstream msg;
        msg << "WARN_AMPLITUDE: max(A1, A2)/a = " << amp << " exceeds " << kAmplitudeWarnRatio
            << "; the expansion in A/a may be inaccurate";
        report.messages.push_back(msg.str());
    }
    if (report.warn_period) {
        std::ostringstream msg;
        msg << "WARN_PERIOD: period/a = " << period_over_a << " is below " << kPeriodWarnRatio
            << "; the large-period approximation may not hold";
        report.messages.push_back(msg.str());
    }
    return report;
}

} // namespace corrucas
