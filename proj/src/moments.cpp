#include "corrucas/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "corrucas/errors.hpp"
#include "corrucas/quadrature.hpp"

namespace corrucas {

namespace {

// Dense polynomial in (s, t): c[i][j] multiplies s^i t^j.
class Poly2 {
public:
    Poly2() : c_(1, std::vector<double>(1, 0.0)) {}

    static Poly2 from_s(const Polynomial& p) {
        Poly2 out;
        out.c_.assign(static_cast<std::size_t>(p.degree()) + 1, std::vector<double>(1, 0.0));
        for (int i = 0; i <= p.degree(); ++i) out.c_[static_cast<std::size_t>(i)][0] = p.coefficient(i);
        return out;
    }

    /// q(s - t - shift) for a univariate q.
    static Poly2 composed_with_difference(const Polynomial& q, double shift) {
        Poly2 lin;
        lin.c_ = {{-shift, -1.0}, {1.0, 0.0}};
        Poly2 acc;
        const auto coeffs = q.coefficients();
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * lin;
            acc.c_[0][0] += *it;
        }
        return acc;
    }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 out;
        const std::size_t ni = a.c_.size() + b.c_.size() - 1;
        const std::size_t nj = a.c_[0].size() + b.c_[0].size() - 1;
        out.c_.assign(ni, std::vector<double>(nj, 0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
                if (a.c_[i][j] == 0.0) continue;
                for (std::size_t p = 0; p < b.c_.size(); ++p)
                    for (std::size_t q = 0; q < b.c_[p].size(); ++q) out.c_[i + p][j + q] += a.c_[i][j] * b.c_[p][q];
            }
        return out;
    }

    Poly2 antiderivative_s() const {
        Poly2 out;
        out.c_.assign(c_.size() + 1, std::vector<double>(c_[0].size(), 0.0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < c_[i].size(); ++j) out.c_[i + 1][j] = c_[i][j] / static_cast<double>(i + 1);
        return out;
    }

    /// Univariate in t after substituting s = alpha + beta t.
    Polynomial substitute(double alpha, double beta) const {
        const Polynomial s_of_t{alpha, beta};
        Polynomial acc{0.0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * s_of_t;
            acc += Polynomial(*it);
        }
        return acc;
    }

private:
    std::vector<std::vector<double>> c_;
};

// A profile piece raised to a power, as a polynomial in the global phase.
struct PhasePiece {
    double lo;
    double hi;
    Polynomial poly;
};

std::vector<PhasePiece> powered_pieces(const PiecewisePolyProfile& p, int power) {
    std::vector<PhasePiece> out;
    if (power == 0) {
        out.push_back({0.0, 1.0, Polynomial{1.0}});
        return out;
    }
    const double period = p.period();
    for (const Segment& seg : p.segments()) {
        const double lo = seg.start / period;
        out.push_back({lo, seg.end / period, seg.shape.shifted(-lo).pow(power)});
    }
    out.front().lo = 0.0;
    out.back().hi = 1.0;
    return out;
}

std::size_t piece_at(const std::vector<PhasePiece>& pieces, double s) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (s < pieces[i].hi) return i;
    return pieces.size() - 1;
}

std::vector<double> piece_starts(const std::vector<PhasePiece>& pieces) {
    std::vector<double> out;
    for (const PhasePiece& p : pieces) out.push_back(p.lo);
    return out;
}

void check_orders(int k, int l) {
    if (k < 0 || l < 0) throw InvalidArgument("moment orders must be non-negative");
    if (k + l > kMaxMomentOrder)
        throw UnsupportedOrder("moment order k + l = " + std::to_string(k + l) + " exceeds " +
                               std::to_string(kMaxMomentOrder));
}

void check_periods(double p1, double p2) {
    if (std::abs(p1 - p2) > 1e-12 * std::max(p1, p2))
        throw IncompatibleProfiles("profiles have different periods");
}

void sort_unique(std::vector<double>& v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    v = std::move(out);
}

struct Edge {
    double at_mid;
    double alpha;
    double beta;
};

// Polynomial in t of the correlation on one cell of constant panel structure.
Polynomial correlate_cell(const std::vector<PhasePiece>& g, const std::vector<PhasePiece>& h, double t_mid) {
    std::vector<Edge> edges;
    for (const PhasePiece& p : g) edges.push_back({p.lo, p.lo, 0.0});
    edges.push_back({1.0, 1.0, 0.0});
    for (const PhasePiece& p : h) {
        double pos = p.lo + t_mid;
        double wrap = 0.0;
        if (pos >= 1.0) {
            pos -= 1.0;
            wrap = 1.0;
        }
        edges.push_back({pos, p.lo - wrap, 1.0});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.at_mid < b.at_mid; });

    Polynomial cell{0.0};
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const Edge& lo = edges[e];
        const Edge& hi = edges[e + 1];
        if (hi.at_mid - lo.at_mid <= 1e-15) continue;
        const double s_mid = 0.5 * (lo.at_mid + hi.at_mid);
        const PhasePiece& gp = g[piece_at(g, s_mid)];
        const double u = s_mid - t_mid;
        const double wrap = std::floor(u);
        const PhasePiece& hp = h[piece_at(h, u - wrap)];

        const Poly2 integrand = Poly2::from_s(gp.poly) * Poly2::composed_with_difference(hp.poly, wrap);
        const Poly2 anti = integrand.antiderivative_s();
        cell += anti.substitute(hi.alpha, hi.beta);
        cell -= anti.substitute(lo.alpha, lo.beta);
    }
    return cell;
}

double power_of(double v, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= v;
    return r;
}

// Ascending panel edges in [0, 1] from a set of phases.
std::vector<double> panel_edges(std::vector<double> cuts) {
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    for (double& c : cuts) c = (c >= 1.0) ? c : reduce_phase(c);
    sort_unique(cuts, 1e-15);
    if (cuts.back() < 1.0) cuts.push_back(1.0);
    return cuts;
}

struct PhaseEval {
    const Profile& p;
    OneSided value(double s) const {
        return std::visit([s](const auto& q) { return q.eval_phase(s); }, p);
    }
    double interior(double s) const { return value(s).left; }
    double slope(double s) const {
        return std::visit(
            [s](const auto& q) {
                if constexpr (std::is_same_v<std::decay_t<decltype(q)>, PiecewisePolyProfile>)
                    return q.slope_phase(s).left;
                else
                    return q.slope_phase(s);
            },
            p);
    }
};

// Doubles subdivisions until the estimate settles.
template <class PanelIntegral>
double converge(const QuadratureSpec& spec, PanelIntegral&& integral, const char* what) {
    const GaussLegendre rule(spec.order);
    int n = spec.subdivisions;
    double prev = integral(rule, n);
    double err = 0.0;
    while (n <= spec.max_subdivisions / 2) {
        n *= 2;
        const double next = integral(rule, n);
        err = std::abs(next - prev);
        if (err <= spec.tolerance) return next;
        prev = next;
    }
    throw ConvergenceFailure(std::string(what) + ": tolerance not reached (achieved " + std::to_string(err) + ")", err);
}

} // namespace

// MomentCurve

MomentCurve::MomentCurve(double period, int k, int l, std::vector<double> breaks, std::vector<Polynomial> pieces)
    : period_(period), k_(k), l_(l), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (!(period_ > 0.0)) throw InvalidArgument("MomentCurve: period must be positive");
    if (pieces_.empty() || breaks_.size() != pieces_.size() + 1)
        throw InvalidArgument("MomentCurve: need one more break than pieces");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0) throw InvalidArgument("MomentCurve: breaks must span [0, 1]");
    if (!std::is_sorted(breaks_.begin(), breaks_.end())) throw InvalidArgument("MomentCurve: breaks must ascend");
}

double MomentCurve::at_phase(double t) const {
    t = reduce_phase(t);
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end() - 1, t);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breaks_.begin()) - 1));
    return pieces_[std::min(i, pieces_.size() - 1)](t);
}

MomentDerivative MomentCurve::derivative() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const Polynomial& p : pieces_) d.push_back(p.derivative());
    return MomentDerivative(period_, breaks_, std::move(d));
}

MomentDerivative::MomentDerivative(double period, std::vector<double> breaks, std::vector<Polynomial> phase_pieces)
    : period_(period), breaks_(std::move(breaks)), pieces_(std::move(phase_pieces)) {
    if (pieces_.empty() || breaks_.size() != pieces_.size() + 1)
        throw InvalidArgument("MomentDerivative: need one more break than pieces");
}

OneSided MomentDerivative::at_phase(double t) const {
    t = reduce_phase(t);
    const std::size_t n = pieces_.size();
    // A phase just below 1 sits on the wrap-around break.
    if (1.0 - t <= kPhaseTolerance) t = 0.0;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end() - 1, t + kPhaseTolerance);
    const auto i = std::min(n - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breaks_.begin()) - 1)));
    const double b = breaks_[i];
    if (std::abs(t - b) <= kPhaseTolerance) {
        const std::size_t prev = (i == 0) ? n - 1 : i - 1;
        const double at_prev = (i == 0) ? 1.0 : b;
        return {pieces_[prev](at_prev) / period_, pieces_[i](b) / period_};
    }
    const double v = pieces_[i](t) / period_;
    return {v, v};
}

// Exact correlation

MomentCurve cross_moment_exact(const PiecewisePolyProfile& p1, const PiecewisePolyProfile& p2, int k, int l) {
    check_periods(p1.period(), p2.period());
    check_orders(k, l);
    const std::vector<PhasePiece> g = powered_pieces(p1, k);
    const std::vector<PhasePiece> h = powered_pieces(p2, l);

    std::vector<double> cuts = critical_shifts(piece_starts(g), piece_starts(h));
    cuts.push_back(1.0);

    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    breaks.push_back(0.0);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = cuts[c + 1];
        pieces.push_back(correlate_cell(g, h, 0.5 * (lo + hi)));
        breaks.push_back(hi);
    }
    return MomentCurve(p1.period(), k, l, std::move(breaks), std::move(pieces));
}

std::vector<double> critical_shifts(std::span<const double> breaks1, std::span<const double> breaks2) {
    std::vector<double> shifts{0.0};
    for (double b1 : breaks1)
        for (double b2 : breaks2) shifts.push_back(reduce_phase(b1 - b2));
    sort_unique(shifts, kPhaseTolerance);
    // Drop a shift numerically equal to 1 (it is the wrap of 0).
    while (shifts.size() > 1 && 1.0 - shifts.back() <= kPhaseTolerance) shifts.pop_back();
    return shifts;
}

std::vector<double> breakpoints_phase(const Profile& p) {
    return std::visit(
        [](const auto& q) -> std::vector<double> {
            const auto b = q.breakpoints_phase();
            std::vector<double> out(b.begin(), b.end());
            if (out.empty() || out.front() != 0.0) out.insert(out.begin(), 0.0);
            return out;
        },
        p);
}

// Quadrature

void QuadratureSpec::validate() const {
    if (subdivisions < 1) throw InvalidArgument("QuadratureSpec: subdivisions must be >= 1");
    if (order < 1) throw InvalidArgument("QuadratureSpec: order must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidArgument("QuadratureSpec: tolerance must be positive");
    if (max_subdivisions < subdivisions) throw InvalidArgument("QuadratureSpec: max_subdivisions < subdivisions");
}

double cross_moment_numeric(const Profile& p1, const Profile& p2, int k, int l, double x0, const QuadratureSpec& spec) {
    const double period = period_of(p1);
    check_periods(period, period_of(p2));
    check_orders(k, l);
    spec.validate();
    if (k == 0 && l == 0) return 1.0;

    const double t = reduce_phase(x0 / period);
    const PhaseEval f1{p1};
    const PhaseEval f2{p2};
    std::vector<double> cuts = breakpoints_phase(p1);
    for (double b : breakpoints_phase(p2)) cuts.push_back(b + t);
    const std::vector<double> edges = panel_edges(std::move(cuts));

    auto integrand = [&](double s) { return power_of(f1.interior(s), k) * power_of(f2.interior(s - t), l); };
    auto total = [&](const GaussLegendre& rule, int n) {
        double sum = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e)
            if (edges[e + 1] - edges[e] > 1e-15) sum += rule.integrate(integrand, edges[e], edges[e + 1], n);
        return sum;
    };
    return converge(spec, total, "cross_moment_numeric");
}

OneSided cross_moment_derivative_numeric(const Profile& p1, const Profile& p2, int k, int l, double x0,
                                         const QuadratureSpec& spec) {
    const double period = period_of(p1);
    check_periods(period, period_of(p2));
    check_orders(k, l);
    spec.validate();
    if (k == 0 || l == 0) return {0.0, 0.0};

    // With y = x - x0: M(t) = int g(y + t) h(y) dy, g = f1^k, h = f2^l.
    const double t = reduce_phase(x0 / period);
    const PhaseEval f1{p1};
    const PhaseEval f2{p2};
    const std::vector<double> b1 = breakpoints_phase(p1);
    std::vector<double> cuts = breakpoints_phase(p2);
    for (double c : b1) cuts.push_back(c - t);
    const std::vector<double> edges = panel_edges(std::move(cuts));

    auto integrand = [&](double y) {
        const double s = y + t;
        const double v1 = f1.interior(s);
        return k * power_of(v1, k - 1) * f1.slope(s) * power_of(f2.interior(y), l);
    };
    auto total = [&](const GaussLegendre& rule, int n) {
        double sum = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e)
            if (edges[e + 1] - edges[e] > 1e-15) sum += rule.integrate(integrand, edges[e], edges[e + 1], n);
        return sum;
    };
    const double smooth = converge(spec, total, "cross_moment_derivative_numeric");

    // Jumps of g at c contribute [g](c) * h(c - t). As t increases, c - t
    // decreases, so the right derivative sees h from the left and vice versa.
    OneSided result{smooth, smooth};
    for (double c : b1) {
        const OneSided gv = f1.value(c);
        const double jump = power_of(gv.right, k) - power_of(gv.left, k);
        if (jump == 0.0) continue;
        const OneSided hv = f2.value(c - t);
        result.left += jump * power_of(hv.right, l);
        result.right += jump * power_of(hv.left, l);
    }
    result.left /= period;
    result.right /= period;
    return result;
}

SawtoothMoments sawtooth_moments_closed_form(double x0_over_period) {
    const double t = reduce_phase(x0_over_period);
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    return {
        -1.0 / 3.0 + 2.0 * t - 2.0 * t2,
        -4.0 / 3.0 * t + 4.0 * t2 - 8.0 / 3.0 * t3,
        -1.0 / 5.0 + 2.0 * t - 6.0 * t2 + 8.0 * t3 - 4.0 * t4,
        1.0 / 5.0 - 8.0 / 3.0 * t2 + 16.0 / 3.0 * t3 - 8.0 / 3.0 * t4,
    };
}

} // namespace corrucas
