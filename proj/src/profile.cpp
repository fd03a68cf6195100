#include "corrucas/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/tools/minima.hpp>

#include "corrucas/errors.hpp"
#include "corrucas/quadrature.hpp"

namespace corrucas {

namespace {

constexpr int kAnalyticGrid = 4096;

void require_period(double period, const char* who) {
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument(std::string(who) + ": period must be positive");
}

// Local extrema of a polynomial on [0, width] by sign changes of p'.
double poly_max_abs(const Polynomial& p, double width) {
    double best = std::max(std::abs(p(0.0)), std::abs(p(width)));
    if (p.degree() < 2) return best;
    const Polynomial dp = p.derivative();
    constexpr int kCells = 256;
    const double h = width / kCells;
    double a = 0.0;
    double fa = dp(a);
    for (int i = 1; i <= kCells; ++i) {
        const double b = (i == kCells) ? width : i * h;
        const double fb = dp(b);
        if (fa == 0.0) {
            best = std::max(best, std::abs(p(a)));
        } else if (fa * fb < 0.0) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double m = 0.5 * (lo + hi);
                if (m <= lo || m >= hi) break;
                const double fm = dp(m);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            best = std::max(best, std::abs(p(0.5 * (lo + hi))));
        }
        a = b;
        fa = fb;
    }
    return best;
}

} // namespace

double reduce_phase(double s) noexcept {
    double r = s - std::floor(s);
    if (r >= 1.0) r = 0.0;
    return r;
}

// PiecewisePolyProfile

PiecewisePolyProfile::PiecewisePolyProfile(double period, std::vector<Segment> segments)
    : period_(period), segments_(std::move(segments)) {
    require_period(period_, "PiecewisePolyProfile");
    if (segments_.empty()) throw InvalidArgument("PiecewisePolyProfile: no segments");
    const double tol = kPhaseTolerance * period_;
    if (std::abs(segments_.front().start) > tol) throw InvalidArgument("PiecewisePolyProfile: first segment must start at 0");
    if (std::abs(segments_.back().end - period_) > tol)
        throw InvalidArgument("PiecewisePolyProfile: last segment must end at the period");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (!(seg.end > seg.start)) throw InvalidArgument("PiecewisePolyProfile: empty or reversed segment");
        if (i + 1 < segments_.size() && std::abs(segments_[i + 1].start - seg.end) > tol)
            throw InvalidArgument("PiecewisePolyProfile: segments must tile the period without gaps or overlaps");
        if (seg.shape.degree() > kMaxSegmentDegree)
            throw InvalidArgument("PiecewisePolyProfile: segment degree exceeds " + std::to_string(kMaxSegmentDegree));
    }
    segments_.front().start = 0.0;
    segments_.back().end = period_;
    starts_.reserve(segments_.size());
    for (const Segment& seg : segments_) starts_.push_back(seg.start / period_);
}

std::size_t PiecewisePolyProfile::locate(double s) const {
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), s + kPhaseTolerance);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - starts_.begin()) - 1));
}

double PiecewisePolyProfile::local(std::size_t i, double s) const { return segments_[i].shape(s - starts_[i]); }

OneSided PiecewisePolyProfile::eval(double x) const { return eval_phase(x / period_); }

OneSided PiecewisePolyProfile::eval_phase(double s) const {
    s = reduce_phase(s);
    const std::size_t i = locate(s);
    if (std::abs(s - starts_[i]) <= kPhaseTolerance) {
        const std::size_t prev = (i == 0) ? segments_.size() - 1 : i - 1;
        const double prev_width = (segments_[prev].end - segments_[prev].start) / period_;
        return {segments_[prev].shape(prev_width), segments_[i].shape(0.0)};
    }
    const double v = local(i, s);
    return {v, v};
}

OneSided PiecewisePolyProfile::slope_phase(double s) const {
    s = reduce_phase(s);
    const std::size_t i = locate(s);
    if (std::abs(s - starts_[i]) <= kPhaseTolerance) {
        const std::size_t prev = (i == 0) ? segments_.size() - 1 : i - 1;
        const double prev_width = (segments_[prev].end - segments_[prev].start) / period_;
        return {segments_[prev].shape.derivative()(prev_width), segments_[i].shape.derivative()(0.0)};
    }
    const double v = segments_[i].shape.derivative()(s - starts_[i]);
    return {v, v};
}

std::vector<double> PiecewisePolyProfile::breakpoints_phase() const { return starts_; }

double PiecewisePolyProfile::mean() const {
    double total = 0.0;
    for (const Segment& seg : segments_) total += seg.shape.integrate(0.0, (seg.end - seg.start) / period_);
    return total;
}

double PiecewisePolyProfile::max_abs() const {
    double best = 0.0;
    for (const Segment& seg : segments_) best = std::max(best, poly_max_abs(seg.shape, (seg.end - seg.start) / period_));
    return best;
}

// AnalyticProfile

AnalyticProfile::AnalyticProfile(double period, Function f, Smoothness smoothness, std::vector<double> breakpoints,
                                 Function derivative)
    : period_(period), f_(std::move(f)), smoothness_(smoothness), breakpoints_(std::move(breakpoints)),
      df_(std::move(derivative)) {
    require_period(period_, "AnalyticProfile");
    if (!f_) throw InvalidArgument("AnalyticProfile: empty evaluator");
    for (double& b : breakpoints_) {
        if (!(b >= 0.0 && b < 1.0)) throw InvalidArgument("AnalyticProfile: breakpoints must be phases in [0, 1)");
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
    if (smoothness_ == Smoothness::has_jumps && breakpoints_.empty())
        throw InvalidArgument("AnalyticProfile: a profile with jumps must declare its breakpoints");
}

OneSided AnalyticProfile::eval(double x) const { return eval_phase(x / period_); }

OneSided AnalyticProfile::eval_phase(double s) const {
    s = reduce_phase(s);
    if (smoothness_ == Smoothness::has_jumps) {
        for (double b : breakpoints_) {
            const double d = std::abs(s - b);
            if (d <= kPhaseTolerance || 1.0 - d <= kPhaseTolerance) {
                const double nudge = 1e-12;
                return {f_((b - nudge) * period_), f_((b + nudge) * period_)};
            }
        }
    }
    const double v = f_(s * period_);
    return {v, v};
}

double AnalyticProfile::slope_phase(double s) const {
    if (df_) return df_(s * period_) * period_;
    // Fourth-order central difference in phase units.
    const double h = 1e-3;
    auto g = [&](double u) { return f_(u * period_); };
    return (-g(s + 2 * h) + 8 * g(s + h) - 8 * g(s - h) + g(s - 2 * h)) / (12 * h);
}

double AnalyticProfile::mean() const {
    const GaussLegendre rule(16);
    std::vector<double> edges(breakpoints_.begin(), breakpoints_.end());
    edges.push_back(0.0);
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const int panels = std::max(1, static_cast<int>(std::ceil(256 * (edges[i + 1] - edges[i]))));
        total += rule.integrate([&](double s) { return f_(s * period_); }, edges[i], edges[i + 1], panels);
    }
    return total;
}

double AnalyticProfile::max_abs() const {
    std::vector<double> grid(kAnalyticGrid);
    for (int i = 0; i < kAnalyticGrid; ++i) grid[i] = std::abs(f_(static_cast<double>(i) / kAnalyticGrid * period_));
    double best = *std::max_element(grid.begin(), grid.end());
    for (double b : breakpoints_) {
        const OneSided v = eval_phase(b);
        best = std::max({best, std::abs(v.left), std::abs(v.right)});
    }
    const int bits = std::numeric_limits<double>::digits / 2;
    auto neg_abs = [&](double s) { return -std::abs(f_(s * period_)); };
    for (int i = 0; i < kAnalyticGrid; ++i) {
        const double prev = grid[(i + kAnalyticGrid - 1) % kAnalyticGrid];
        const double next = grid[(i + 1) % kAnalyticGrid];
        if (grid[i] < prev || grid[i] < next || grid[i] == 0.0) continue;
        const double lo = static_cast<double>(i - 1) / kAnalyticGrid;
        const double hi = static_cast<double>(i + 1) / kAnalyticGrid;
        const auto found = boost::math::tools::brent_find_minima(neg_abs, lo, hi, bits);
        best = std::max(best, -found.second);
    }
    return best;
}

// Variant helpers

double period_of(const Profile& p) {
    return std::visit([](const auto& q) { return q.period(); }, p);
}

OneSided eval(const Profile& p, double x) {
    return std::visit([x](const auto& q) { return q.eval(x); }, p);
}

double mean_of(const Profile& p) {
    return std::visit([](const auto& q) { return q.mean(); }, p);
}

double max_abs_of(const Profile& p) {
    return std::visit([](const auto& q) { return q.max_abs(); }, p);
}

bool is_normalized(const Profile& p) {
    const double tol = std::holds_alternative<PiecewisePolyProfile>(p) ? kExactNormTolerance : kAnalyticNormTolerance;
    return std::abs(mean_of(p)) <= tol && std::abs(max_abs_of(p) - 1.0) <= tol;
}

Normalized<PiecewisePolyProfile> normalize(const PiecewisePolyProfile& p) {
    const double mean = p.mean();
    std::vector<Segment> centred(p.segments().begin(), p.segments().end());
    for (Segment& seg : centred) seg.shape -= Polynomial{mean};
    const double scale = PiecewisePolyProfile(p.period(), centred).max_abs();
    if (!(scale > 0.0)) throw DegenerateProfile("normalize: profile is identically zero after removing its mean");
    for (Segment& seg : centred) seg.shape *= 1.0 / scale;
    return {PiecewisePolyProfile(p.period(), std::move(centred)), scale};
}

Normalized<AnalyticProfile> normalize(const AnalyticProfile& p) {
    const double mean = p.mean();
    const AnalyticProfile::Function f = p.function();
    const AnalyticProfile centred(p.period(), [f, mean](double x) { return f(x) - mean; }, p.smoothness(),
                                  {p.breakpoints_phase().begin(), p.breakpoints_phase().end()}, p.derivative());
    const double scale = centred.max_abs();
    if (!(scale > 0.0)) throw DegenerateProfile("normalize: profile is identically zero after removing its mean");
    AnalyticProfile::Function df;
    if (p.derivative()) df = [d = p.derivative(), scale](double x) { return d(x) / scale; };
    return {AnalyticProfile(p.period(), [f, mean, scale](double x) { return (f(x) - mean) / scale; }, p.smoothness(),
                            {p.breakpoints_phase().begin(), p.breakpoints_phase().end()}, std::move(df)),
            scale};
}

Normalized<Profile> normalize(const Profile& p) {
    return std::visit(
        [](const auto& q) -> Normalized<Profile> {
            auto n = normalize(q);
            return {Profile(std::move(n.profile)), n.scale};
        },
        p);
}

// Builders

PiecewisePolyProfile make_sawtooth_lower(double period) {
    require_period(period, "make_sawtooth_lower");
    return PiecewisePolyProfile(period, {Segment{0.0, period, Polynomial{-1.0, 2.0}}});
}

PiecewisePolyProfile make_sawtooth_upper(double period) {
    require_period(period, "make_sawtooth_upper");
    return PiecewisePolyProfile(period, {Segment{0.0, period, Polynomial{1.0, -2.0}}});
}

PiecewisePolyProfile make_flat_sawtooth(double period, double delta) {
    require_period(period, "make_flat_sawtooth");
    if (std::isnan(delta) || delta < 0.0) throw InvalidArgument("make_flat_sawtooth: delta must lie in [0, 1)");
    if (delta >= 1.0) throw DegenerateProfile("make_flat_sawtooth: delta >= 1 leaves no ramp segment");
    const double flat = -(1.0 - delta) / (1.0 + delta);
    const double slope = 2.0 / (1.0 - delta * delta);
    const double lx = delta * period;
    // Ramp 2x/(L(1-d^2)) - (1+d^2)/(1-d^2) written in the local coordinate from l_x;
    // its value at l_x equals the flat level.
    Segment ramp{lx, period, Polynomial{flat, slope}};
    if (delta == 0.0) return PiecewisePolyProfile(period, {std::move(ramp)});
    return PiecewisePolyProfile(period, {Segment{0.0, lx, Polynomial{flat}}, std::move(ramp)});
}

AnalyticProfile make_sinusoid(double period) {
    require_period(period, "make_sinusoid");
    const double k = 2.0 * std::numbers::pi / period;
    return AnalyticProfile(
        period, [k](double x) { return std::cos(k * x); }, Smoothness::smooth, {},
        [k](double x) { return -k * std::sin(k * x); });
}

} // namespace corrucas
