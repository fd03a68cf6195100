#include "corrucas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "corrucas/errors.hpp"

namespace corrucas {

ForceCurve::ForceCurve(double period, std::vector<ForceSample> samples, Metadata metadata, Evaluator evaluator)
    : period_(period), samples_(std::move(samples)), metadata_(metadata), evaluator_(std::move(evaluator)) {
    if (!(period_ > 0.0)) throw InvalidArgument("ForceCurve: period must be positive");
    if (samples_.empty()) throw InvalidArgument("ForceCurve: no samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].x0 < 0.0 || samples_[i].x0 >= period_)
            throw InvalidArgument("ForceCurve: sample positions must lie in [0, period)");
        if (i > 0 && !(samples_[i].x0 > samples_[i - 1].x0))
            throw InvalidArgument("ForceCurve: sample positions must be strictly increasing");
    }
}

const char* to_string(EquilibriumKind kind) noexcept {
    return kind == EquilibriumKind::stable ? "stable" : "unstable";
}

const char* to_string(EquilibriumMechanism mechanism) noexcept {
    return mechanism == EquilibriumMechanism::sign_jump ? "sign-jump" : "continuous-zero";
}

// Sweep

ForceCurve sweep(const PlatePair& pair, int n_samples, bool dimensionless, unsigned threads) {
    if (n_samples < kMinSweepSamples)
        throw InvalidArgument("sweep: need at least " + std::to_string(kMinSweepSamples) + " samples");

    struct Phase {
        double t;
        bool breakpoint;
    };
    std::vector<Phase> phases;
    phases.reserve(static_cast<std::size_t>(n_samples) + 8);
    for (int i = 0; i < n_samples; ++i) phases.push_back({static_cast<double>(i) / n_samples, false});
    for (double b : pair.force_breakpoints()) phases.push_back({b, true});
    std::stable_sort(phases.begin(), phases.end(), [](const Phase& a, const Phase& b) { return a.t < b.t; });
    std::vector<Phase> merged;
    for (const Phase& p : phases) {
        if (!merged.empty() && p.t - merged.back().t <= kPhaseTolerance) {
            // Keep the breakpoint's own coordinate when a grid point coincides.
            if (p.breakpoint) merged.back() = p;
            continue;
        }
        merged.push_back(p);
    }

    const double period = pair.period();
    const double f0 = std::abs(flat_force(pair.separation(), pair.hbar_c()));
    const double unit = dimensionless ? 1.0 / f0 : 1.0;

    std::vector<ForceSample> samples(merged.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double x0 = merged[i].t * period;
            const OneSided f = lateral_force(pair, x0);
            samples[i] = {x0, f.left * unit, f.right * unit, merged[i].breakpoint};
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(samples.size()));
    if (threads <= 1) {
        work(0, samples.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (samples.size() + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(samples.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ForceCurve::Metadata meta{pair.geometry(), dimensionless, f0};
    ForceCurve::Evaluator evaluator = [pair, unit](double x0) {
        const OneSided f = lateral_force(pair, x0);
        return OneSided{f.left * unit, f.right * unit};
    };
    return ForceCurve(period, std::move(samples), meta, std::move(evaluator));
}

// Equilibria

namespace {

double max_magnitude(std::span<const ForceSample> samples) {
    double m = 0.0;
    for (const ForceSample& s : samples) m = std::max({m, std::abs(s.left), std::abs(s.right)});
    return m;
}

int sign_of(double v, double zero_tol) {
    if (v > zero_tol) return 1;
    if (v < -zero_tol) return -1;
    return 0;
}

} // namespace

std::vector<EquilibriumPoint> find_equilibria(const ForceCurve& curve) {
    const auto samples = curve.samples();
    const std::size_t n = samples.size();
    if (n < static_cast<std::size_t>(kMinSweepSamples))
        throw InvalidArgument("find_equilibria: need at least " + std::to_string(kMinSweepSamples) + " samples");
    const double scale = max_magnitude(samples);
    if (scale == 0.0) throw DegenerateCurve("find_equilibria: force curve is identically zero");
    const double zero_tol = 1e-12 * scale;
    const double period = curve.period();
    const auto& eval = curve.evaluator();

    auto value_at = [&](double x) -> double {
        if (eval) return eval(std::fmod(x, period)).mid();
        // Linear interpolation between samples, used only without an evaluator.
        x = std::fmod(x, period);
        const auto it = std::upper_bound(samples.begin(), samples.end(), x,
                                         [](double v, const ForceSample& s) { return v < s.x0; });
        const std::size_t hi = static_cast<std::size_t>(it - samples.begin()) % n;
        const std::size_t lo = (hi + n - 1) % n;
        double xa = samples[lo].x0;
        double xb = samples[hi].x0;
        if (xb <= xa) xb += period;
        if (x < xa) x += period;
        const double w = (x - xa) / (xb - xa);
        return (1.0 - w) * samples[lo].right + w * samples[hi].left;
    };
    auto stiffness_at = [&](double x) -> double {
        const double h = period * 1e-6;
        return -(value_at(x + period + h) - value_at(x + period - h)) / (2.0 * h);
    };

    std::vector<EquilibriumPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        const ForceSample& s = samples[i];
        const ForceSample& prev = samples[(i + n - 1) % n];
        const ForceSample& next = samples[(i + 1) % n];

        if (std::abs(s.left - s.right) > zero_tol) {
            const int sl = sign_of(s.left, zero_tol);
            const int sr = sign_of(s.right, zero_tol);
            if (sl > sr && sl >= 0 && sr <= 0) {
                out.push_back({s.x0, EquilibriumKind::stable, EquilibriumMechanism::sign_jump, {s.left, s.right},
                               {s.left, s.right}});
            } else if (sl < sr && sl <= 0 && sr >= 0) {
                out.push_back({s.x0, EquilibriumKind::unstable, EquilibriumMechanism::sign_jump, {s.left, s.right},
                               {s.left, s.right}});
            }
        } else if (sign_of(s.mid(), zero_tol) == 0) {
            const int before = sign_of(prev.right, zero_tol);
            const int after = sign_of(next.left, zero_tol);
            if (before != 0 && after != 0 && before != after) {
                const double k = stiffness_at(s.x0);
                out.push_back({s.x0, before > 0 ? EquilibriumKind::stable : EquilibriumKind::unstable,
                               EquilibriumMechanism::continuous_zero, {s.mid(), s.mid()}, {k, k}});
            }
        }

        // Strict sign change inside (x_i, x_{i+1}).
        const double va = s.right;
        const double vb = next.left;
        const int sa = sign_of(va, zero_tol);
        const int sb = sign_of(vb, zero_tol);
        if (sa == 0 || sb == 0 || sa == sb) continue;
        const double xa = s.x0;
        const double xb = (i + 1 == n) ? next.x0 + period : next.x0;
        auto f = [&](double x) {
            if (x == xa) return va;
            if (x == xb) return vb;
            return value_at(x);
        };
        const double tol = kRootTolerance * period;
        const auto bracket =
            boost::math::tools::bisect(f, xa, xb, [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; });
        double root = 0.5 * (bracket.first + bracket.second);
        if (root >= period) root -= period;
        const double fr = value_at(root);
        const double k = stiffness_at(root);
        out.push_back({root, sa > 0 ? EquilibriumKind::stable : EquilibriumKind::unstable,
                       EquilibriumMechanism::continuous_zero, {fr, fr}, {k, k}});
    }
    std::sort(out.begin(), out.end(), [](const EquilibriumPoint& a, const EquilibriumPoint& b) { return a.x0 < b.x0; });
    return out;
}

double force_asymmetry(const ForceCurve& curve) {
    double max_pos = 0.0;
    double max_neg = 0.0;
    for (const ForceSample& s : curve.samples()) {
        for (double v : {s.left, s.right}) {
            max_pos = std::max(max_pos, v);
            max_neg = std::max(max_neg, -v);
        }
    }
    if (max_pos == 0.0 && max_neg == 0.0) throw DegenerateCurve("force_asymmetry: force curve is identically zero");
    if (max_neg == 0.0) return std::numeric_limits<double>::infinity();
    return max_pos / max_neg;
}

// Work

namespace {

struct Node {
    double x;
    double v;
};

// Trapezoid and Simpson-corrected integrals over one smooth stretch.
std::pair<double, double> integrate_stretch(const std::vector<Node>& pts) {
    const std::size_t m = pts.size() - 1;
    double trap = 0.0;
    for (std::size_t i = 0; i < m; ++i) trap += 0.5 * (pts[i + 1].x - pts[i].x) * (pts[i].v + pts[i + 1].v);
    if (m < 2) return {trap, trap};

    double simpson = 0.0;
    const std::size_t paired = (m % 2 == 0) ? m : m - 1;
    for (std::size_t i = 0; i + 2 <= paired; i += 2) {
        const double h1 = pts[i + 1].x - pts[i].x;
        const double h2 = pts[i + 2].x - pts[i + 1].x;
        const double hs = h1 + h2;
        simpson += hs / 6.0 *
                   ((2.0 - h2 / h1) * pts[i].v + hs * hs / (h1 * h2) * pts[i + 1].v + (2.0 - h1 / h2) * pts[i + 2].v);
    }
    if (paired != m) {
        // Quadratic through the last three nodes, integrated over the last interval.
        const double h1 = pts[m - 1].x - pts[m - 2].x;
        const double h2 = pts[m].x - pts[m - 1].x;
        const double w0 = -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
        const double w1 = h2 * h2 / (6.0 * h1) + 0.5 * h2;
        const double w2 = (h2 * h2 / 3.0 + 0.5 * h1 * h2) / (h1 + h2);
        simpson += w0 * pts[m - 2].v + w1 * pts[m - 1].v + w2 * pts[m].v;
    }
    return {trap, simpson};
}

} // namespace

WorkResult work_over_period(const ForceCurve& curve) {
    const auto samples = curve.samples();
    const std::size_t n = samples.size();
    const double period = curve.period();

    // Start at a breakpoint when there is one so stretches do not straddle it.
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (samples[i].breakpoint) {
            start = i;
            break;
        }

    double trap = 0.0;
    double best = 0.0;
    std::vector<Node> stretch;
    for (std::size_t step = 0; step <= n; ++step) {
        const std::size_t i = (start + step) % n;
        const double x = samples[i].x0 + ((start + step) >= n ? period : 0.0);
        const ForceSample& s = samples[i];
        const bool closes = step == n || s.breakpoint;
        if (step == 0) {
            stretch.push_back({x, s.right});
            continue;
        }
        if (closes) {
            stretch.push_back({x, s.left});
            const auto [t, b] = integrate_stretch(stretch);
            trap += t;
            best += b;
            stretch.clear();
            stretch.push_back({x, s.right});
        } else {
            stretch.push_back({x, s.mid()});
        }
    }
    return {best, std::abs(best - trap)};
}

double first_harmonic_residual(const ForceCurve& curve) {
    const auto samples = curve.samples();
    const double k = 2.0 * 3.14159265358979323846 / curve.period();
    Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), 3);
    Eigen::VectorXd values(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        design(r, 0) = 1.0;
        design(r, 1) = std::cos(k * samples[i].x0);
        design(r, 2) = std::sin(k * samples[i].x0);
        values(r) = samples[i].mid();
    }
    const double total = values.squaredNorm();
    if (total == 0.0) throw DegenerateCurve("first_harmonic_residual: force curve is identically zero");
    const Eigen::Vector3d coeffs = design.colPivHouseholderQr().solve(values);
    return (values - design * coeffs).squaredNorm() / total;
}

std::vector<ScanRow> delta_scan(const ScanBase& base, std::span<const double> deltas) {
    for (double d : deltas)
        if (!(d >= 0.0 && d < 1.0)) throw InvalidArgument("delta_scan: every delta must lie in [0, 1)");
    std::vector<ScanRow> rows;
    rows.reserve(deltas.size());
    const Geometry geometry{base.separation, base.amplitude, base.amplitude, base.period};
    for (double d : deltas) {
        const PlatePair pair(geometry, make_flat_sawtooth(base.period, d), make_sawtooth_upper(base.period),
                             base.hbar_c);
        const ForceCurve curve = sweep(pair, base.samples, true, base.threads);
        const auto eq = find_equilibria(curve);
        const auto it = std::find_if(eq.begin(), eq.end(),
                                     [](const EquilibriumPoint& p) { return p.kind == EquilibriumKind::unstable; });
        if (it == eq.end()) throw Error("delta_scan: no unstable equilibrium found");
        rows.push_back({d, it->x0, force_asymmetry(curve)});
    }
    return rows;
}

} // namespace corrucas
