#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corrucas/casimir.hpp"
#include "corrucas/errors.hpp"
#include "oracles.hpp"

using namespace corrucas;

namespace {

constexpr double a0 = 100e-9;
constexpr double L = 500e-9; // a / L = 0.2
constexpr double A = 30e-9;  // A / a = 0.3

PlatePair saw_pair(double amplitude = A, double a = a0, double period = L) {
    return PlatePair({a, amplitude, amplitude, period}, make_sawtooth_lower(period), make_sawtooth_upper(period));
}

PlatePair flat_pair(double delta, double amplitude = A, double a = a0) {
    return PlatePair({a, amplitude, amplitude, L}, make_flat_sawtooth(L, delta), make_sawtooth_upper(L));
}

// Energy built from brute-force moments, then differentiated numerically.
double oracle_energy(const oracle::Shape& f1, const std::vector<double>& b1, double a, double amp1, double amp2,
                     double t) {
    static constexpr int binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    const double coeff[5] = {0, 0, 6, 10, 15};
    double bracket = 1.0;
    for (int n = 2; n <= 4; ++n) {
        double s = 0.0;
        for (int j = 0; j <= n; ++j)
            s += (j % 2 ? -1.0 : 1.0) * binom[n][j] * std::pow(amp1, n - j) * std::pow(amp2, j) *
                 oracle::moment(f1, oracle::saw_upper, n - j, j, t, b1, {0.0});
        bracket += coeff[n] * s / std::pow(a, n);
    }
    return -std::pow(std::numbers::pi, 2) * kHbarC / (720 * a * a * a) * bracket;
}

double oracle_lateral(const oracle::Shape& f1, const std::vector<double>& b1, double a, double amp, double t) {
    const double h = 1e-5;
    return -(oracle_energy(f1, b1, a, amp, amp, t + h) - oracle_energy(f1, b1, a, amp, amp, t - h)) / (2 * h * L);
}

} // namespace

TEST_CASE("flat-plate laws") {
    CHECK(flat_force(a0) == doctest::Approx(-13.001257724477536).epsilon(1e-12));
    CHECK(flat_force(2 * a0) == doctest::Approx(flat_force(a0) / 16).epsilon(1e-14));
    CHECK(flat_energy(2 * a0) == doctest::Approx(flat_energy(a0) / 8).epsilon(1e-14));
    for (double a : {1e-9, 3e-7, 1e-5}) {
        CHECK(flat_force(a) < 0.0);
        CHECK(flat_energy(a) / flat_force(a) == doctest::Approx(a / 3).epsilon(1e-14));
    }
    const double a = 200e-9;
    const double h = a * 1e-5;
    CHECK(-(flat_energy(a + h) - flat_energy(a - h)) / (2 * h) == doctest::Approx(flat_force(a)).epsilon(1e-6));
}

TEST_CASE("normal force and energy") {
    const auto flat = saw_pair(0.0);
    CHECK(normal_force(flat, 0.3 * L) == flat_force(a0));
    CHECK(casimir_energy(flat, 0.3 * L) == flat_energy(a0));

    const auto pair = saw_pair();
    CHECK(normal_force(pair, 0.0) / flat_force(a0) == doctest::Approx(3.1072).epsilon(1e-12));
    CHECK(normal_force(pair, 0.37 * L) == doctest::Approx(normal_force(pair, 2.37 * L)).epsilon(1e-12));
    CHECK(casimir_energy(pair, 0.0) - casimir_energy(pair, L / 2) < 0.0);

    // -dE/da with the moments held fixed.
    for (double a : {80e-9, 100e-9, 150e-9}) {
        const auto p = saw_pair(A, a);
        const double h = a * 1e-5;
        const double x0 = 0.3 * L;
        const double de = -(casimir_energy(p.with_separation(a + h), x0) - casimir_energy(p.with_separation(a - h), x0)) /
                          (2 * h);
        CHECK(de == doctest::Approx(normal_force(p, x0)).epsilon(1e-6));
    }
}

TEST_CASE("saw-tooth lateral force") {
    const auto pair = saw_pair();
    const double f0 = std::abs(flat_force(a0));
    CHECK(lateral_force(pair, L / 4).mid() / f0 == doctest::Approx(-0.1125).epsilon(1e-12));
    CHECK(lateral_force_sawtooth_closed(a0, A, L, L / 4) / f0 == doctest::Approx(-0.1125).epsilon(1e-12));
    CHECK(std::abs(lateral_force_sawtooth_closed(a0, A, L, L / 2)) < 1e-15 * f0);
    CHECK(lateral_force_sawtooth_closed(a0, A, L, 0.0) / f0 == doctest::Approx(-0.2736).epsilon(1e-12));
    const auto at0 = lateral_force(pair, 0.0);
    CHECK(at0.right / f0 == doctest::Approx(-0.2736).epsilon(1e-12));
    CHECK(at0.left / f0 == doctest::Approx(0.2736).epsilon(1e-12));
    for (double t : {0.1, 0.2, 0.45})
        CHECK(lateral_force_sawtooth_closed(a0, A, L, t * L) ==
              doctest::Approx(-lateral_force_sawtooth_closed(a0, A, L, (1 - t) * L)).epsilon(1e-12));

    const auto none = PlatePair({a0, A, 0.0, L}, make_sawtooth_lower(L), make_sawtooth_upper(L));
    for (double t : {0.0, 0.3, 0.8}) {
        CHECK(lateral_force(none, t * L).left == 0.0);
        CHECK(lateral_force(none, t * L).right == 0.0);
    }
}

TEST_CASE("generic pipeline against closed forms and oracle") {
    std::mt19937_64 rng(20061016);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    const auto pair = saw_pair();
    for (int i = 0; i < 200; ++i) {
        const double x0 = u(rng) * L;
        CHECK(lateral_force(pair, x0).mid() == doctest::Approx(lateral_force_sawtooth_closed(a0, A, L, x0)).epsilon(1e-10));
    }
    const auto flat = flat_pair(0.5);
    for (int i = 0; i < 200; ++i) {
        const double x0 = u(rng) * L;
        CHECK(lateral_force(flat, x0).mid() ==
              doctest::Approx(lateral_force_asymmetric_closed(a0, A, L, 0.5, x0)).epsilon(1e-10));
    }
    for (double t : {0.2, 0.55, 0.8}) {
        CHECK(lateral_force(pair, t * L).mid() ==
              doctest::Approx(oracle_lateral(oracle::saw_lower, {}, a0, A, t)).epsilon(1e-6));
        CHECK(lateral_force(flat, t * L).mid() ==
              doctest::Approx(oracle_lateral(oracle::flat_saw(0.5), {0.5}, a0, A, t)).epsilon(1e-6));
    }
}

TEST_CASE("lateral force is minus the energy gradient") {
    for (const auto& pair : {saw_pair(), flat_pair(0.5), flat_pair(0.25, 20e-9)}) {
        const double h = L * 1e-6;
        for (int i = 0; i < 50; ++i) {
            const double x0 = (i + 0.37) / 50.0 * L;
            const double fd = -(casimir_energy(pair, x0 + h) - casimir_energy(pair, x0 - h)) / (2 * h);
            CHECK(fd == doctest::Approx(lateral_force(pair, x0).mid()).epsilon(1e-5));
        }
    }
}

TEST_CASE("asymmetric closed form") {
    for (double x : {0.0, 0.1, 0.3, 0.5, 0.77, 0.99}) {
        const double saw = lateral_force_sawtooth_closed(a0, A, L, x * L);
        CHECK(lateral_force_asymmetric_closed(a0, A, L, 0.0, x * L) == doctest::Approx(saw).epsilon(1e-12));
    }
    for (double delta : {0.1, 0.25, 0.5, 0.75}) {
        const double lx = delta * L;
        CHECK(lateral_force_asymmetric_short_branch(a0, A, L, delta, lx) ==
              doctest::Approx(lateral_force_asymmetric_long_branch(a0, A, L, delta, lx)).epsilon(1e-12));
    }
    const double f0 = std::abs(flat_force(a0));
    CHECK(lateral_force_asymmetric_closed(a0, A, L, 0.5, L / 2) / f0 == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("unstable equilibrium of the asymmetric force") {
    CHECK(unstable_equilibrium_closed(L, 0.0) == doctest::Approx(L / 2));
    CHECK(unstable_equilibrium_closed(L, 0.5) == doctest::Approx(5 * L / 8));
    CHECK(unstable_equilibrium_closed(L, 0.75) == doctest::Approx(0.78125 * L));

    // Roots of the full fourth-order closed form.
    const std::pair<double, double> roots[] = {
        {0.1, 0.503260080761224}, {0.25, 0.520039752927821}, {0.5, 0.599891689417910}, {0.75, 0.768239662816827}};
    for (auto [delta, expected] : roots) {
        const double root = oracle::bisect(
            [delta](double t) { return lateral_force_asymmetric_closed(a0, A, L, delta, t * L); }, delta + 1e-9,
            1.0 - 1e-9);
        CHECK(root == doctest::Approx(expected).epsilon(1e-10));
    }

    // The leading-order position is approached as A/a goes to zero.
    double previous = 1.0;
    for (double amp : {10e-9, 1e-9, 0.1e-9, 0.01e-9}) {
        const double root = oracle::bisect(
            [amp](double t) { return lateral_force_asymmetric_closed(a0, amp, L, 0.5, t * L); }, 0.5 + 1e-9,
            1.0 - 1e-9);
        const double gap = std::abs(root - 0.625);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 2e-5);
}

TEST_CASE("validity report") {
    CHECK(validity_report(saw_pair()).ok());
    const auto big = validity_report(PlatePair({100e-9, 50e-9, 10e-9, L}, make_sawtooth_lower(L), make_sawtooth_upper(L)));
    CHECK(big.warn_amplitude);
    CHECK_FALSE(big.warn_period);
    const auto wide = validity_report(saw_pair(30e-9, 100e-9, 200e-9));
    CHECK(wide.warn_period);
    REQUIRE(wide.messages.size() == 1);
    CHECK(wide.messages[0].rfind("WARN_PERIOD:", 0) == 0);
}

TEST_CASE("pair construction errors") {
    CHECK_THROWS_AS(saw_pair(60e-9), InvalidArgument);
    CHECK_THROWS_AS(saw_pair(A, -1.0), InvalidArgument);
    const PiecewisePolyProfile unnormalized(L, {Segment{0.0, L, Polynomial{0.0, 1.0}}});
    CHECK_THROWS_AS(PlatePair({a0, A, A, L}, unnormalized, make_sawtooth_upper(L)), InvalidArgument);
    CHECK_THROWS_AS(PlatePair({a0, A, A, L}, make_sawtooth_lower(L), make_sawtooth_upper(2 * L)), IncompatibleProfiles);
}

TEST_CASE("sinusoid pair uses quadrature moments") {
    const PlatePair pair({a0, 1e-9, 1e-9, L}, make_sinusoid(L), make_sinusoid(L));
    CHECK_FALSE(pair.exact());
    CHECK(pair.moment(1, 1, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pair.moment(1, 1, L / 4) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // Leading order: F = F0 * (4 A^2 / a) * d<f1 f2>/dx0 with <f1 f2> = cos(2 pi t) / 2.
    const double x0 = 0.2 * L;
    const double lead = flat_force(a0) * 4e-18 / a0 * (-std::numbers::pi / L * std::sin(2 * std::numbers::pi * 0.2));
    CHECK(lateral_force(pair, x0).mid() == doctest::Approx(lead).epsilon(2e-3));

    // Equal cosines at zero shift: constant gap, weakest attraction.
    CHECK(casimir_energy(pair, 0.0) > casimir_energy(pair, L / 2));
    CHECK(lateral_force(pair, 0.1 * L).mid() > 0.0);
}
