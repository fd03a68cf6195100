// One line per acceptance criterion; exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corrucas/analysis.hpp"
#include "corrucas/casimir.hpp"
#include "corrucas/cli.hpp"
#include "corrucas/moments.hpp"

using namespace corrucas;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PlatePair saw_pair(double a, double amp, double period) {
    return PlatePair({a, amp, amp, period}, make_sawtooth_lower(period), make_sawtooth_upper(period));
}

PlatePair flat_pair(double a, double amp, double period, double delta) {
    return PlatePair({a, amp, amp, period}, make_flat_sawtooth(period, delta), make_sawtooth_upper(period));
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

constexpr double a0 = 100e-9;
constexpr double A0 = 30e-9;
constexpr double L0 = 500e-9;

Outcome moments_closed_form() {
    const auto p1 = make_sawtooth_lower(L0);
    const auto p2 = make_sawtooth_upper(L0);
    const auto m11 = cross_moment_exact(p1, p2, 1, 1);
    const auto m21 = cross_moment_exact(p1, p2, 2, 1);
    const auto m12 = cross_moment_exact(p1, p2, 1, 2);
    const auto m31 = cross_moment_exact(p1, p2, 3, 1);
    const auto m13 = cross_moment_exact(p1, p2, 1, 3);
    const auto m22 = cross_moment_exact(p1, p2, 2, 2);
    const Profile q1 = p1;
    const Profile q2 = p2;
    double exact_dev = 0.0;
    double quad_dev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x0 = i * L0 / 100.0;
        const auto c = sawtooth_moments_closed_form(x0 / L0);
        const std::pair<const MomentCurve*, double> cases[] = {{&m11, c.f1_f2},   {&m21, c.f1sq_f2}, {&m12, c.f1sq_f2},
                                                               {&m31, c.f1cu_f2}, {&m13, c.f1cu_f2}, {&m22, c.f1sq_f2sq}};
        for (auto [curve, expected] : cases) {
            const double e = (*curve)(x0);
            exact_dev = std::max(exact_dev, std::abs(e - expected));
            quad_dev = std::max(quad_dev, std::abs(cross_moment_numeric(q1, q2, curve->k(), curve->l(), x0) - e));
        }
    }
    return {exact_dev <= 1e-12 && quad_dev <= 1e-10,
            fmt("exact vs closed form %.2e (tol 1e-12), quadrature vs exact %.2e (tol 1e-10)", exact_dev, quad_dev)};
}

Outcome sawtooth_force() {
    std::mt19937_64 rng(20061016);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (auto [ratio_amp, ratio_period] : {std::pair{0.1, 0.1}, std::pair{0.3, 0.2}}) {
        const double period = a0 / ratio_period;
        const auto pair = saw_pair(a0, ratio_amp * a0, period);
        for (int i = 0; i < 200; ++i) {
            double t = u(rng);
            if (t < 1e-9) t = 0.5; // stay off the jump at 0
            const double x0 = t * period;
            const auto f = lateral_force(pair, x0);
            worst = std::max(worst, rel(f.mid(), lateral_force_sawtooth_closed(a0, ratio_amp * a0, period, x0)));
        }
    }
    return {worst <= 1e-10, fmt("max relative deviation %.2e (tol 1e-10)", worst)};
}

Outcome delta_zero_reduction() {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x0 = (i + 0.5) * L0 / 100.0;
        worst = std::max(worst, rel(lateral_force_asymmetric_closed(a0, A0, L0, 0.0, x0),
                                    lateral_force_sawtooth_closed(a0, A0, L0, x0)));
    }
    return {worst <= 1e-12, fmt("max relative deviation %.2e (tol 1e-12)", worst)};
}

Outcome branch_continuity() {
    double worst = 0.0;
    for (double delta : {0.1, 0.25, 0.5, 0.75}) {
        const double lx = delta * L0;
        worst = std::max(worst, rel(lateral_force_asymmetric_long_branch(a0, A0, L0, delta, lx),
                                    lateral_force_asymmetric_short_branch(a0, A0, L0, delta, lx)));
    }
    return {worst <= 1e-12, fmt("max relative deviation %.2e (tol 1e-12)", worst)};
}

Outcome fig2b_landmarks() {
    const auto curve = sweep(flat_pair(a0, A0, L0, 0.5));
    double unstable = std::nan("");
    for (const auto& p : find_equilibria(curve))
        if (p.kind == EquilibriumKind::unstable) unstable = p.x0 / L0;
    const double ratio = force_asymmetry(curve);
    const bool pos_ok = std::abs(unstable - 0.625) <= 1e-9;
    const bool ratio_ok = std::abs(ratio - 1.9) <= 0.05;
    return {pos_ok && ratio_ok, fmt("unstable x0/L = %.10f (want 0.625 +- 1e-9: %s), max/min ratio = %.6f "
                                    "(want 1.9 +- 0.05: %s)",
                                    unstable, pos_ok ? "ok" : "no", ratio, ratio_ok ? "ok" : "no")};
}

Outcome zero_work() {
    const double f0 = std::abs(flat_force(a0));
    double worst = 0.0;
    for (const auto& pair : {saw_pair(a0, A0, L0), flat_pair(a0, A0, L0, 0.5)}) {
        const auto w = work_over_period(sweep(pair, kDefaultSweepSamples, false));
        worst = std::max(worst, std::abs(w.value) / (L0 * f0));
    }
    return {worst <= 1e-10, fmt("max |work| / (L |F0|) = %.2e (tol 1e-10)", worst)};
}

Outcome gradient_consistency() {
    double lateral = 0.0;
    double normal = 0.0;
    for (const auto& pair : {saw_pair(a0, A0, L0), flat_pair(a0, A0, L0, 0.5)}) {
        const double h = L0 * 1e-6;
        for (int i = 0; i < 50; ++i) {
            const double x0 = (i + 0.3) / 50.0 * L0; // 0, 1/2 and the flat end are avoided
            const double fd = -(casimir_energy(pair, x0 + h) - casimir_energy(pair, x0 - h)) / (2 * h);
            lateral = std::max(lateral, rel(fd, lateral_force(pair, x0).mid()));
        }
        for (int i = 0; i < 20; ++i) {
            const double a = 80e-9 + i * 5e-9;
            const auto p = pair.with_separation(a);
            const double h = a * 1e-5;
            const double x0 = 0.37 * L0;
            const double fd =
                -(casimir_energy(p.with_separation(a + h), x0) - casimir_energy(p.with_separation(a - h), x0)) / (2 * h);
            normal = std::max(normal, rel(fd, normal_force(p, x0)));
        }
    }
    return {lateral <= 1e-5 && normal <= 1e-6,
            fmt("lateral %.2e (tol 1e-5), normal %.2e (tol 1e-6)", lateral, normal)};
}

Outcome symmetry() {
    const PlatePair sine({a0, A0, A0, L0}, make_sinusoid(L0), make_sinusoid(L0));
    const double r_sine = force_asymmetry(sweep(sine));
    const double r_saw = force_asymmetry(sweep(saw_pair(a0, A0, L0)));
    const PlatePair small({a0, 0.01 * a0, 0.01 * a0, L0}, make_sinusoid(L0), make_sinusoid(L0));
    const double residual = first_harmonic_residual(sweep(small));
    const bool ok = std::abs(r_sine - 1) <= 1e-10 && std::abs(r_saw - 1) <= 1e-10 && residual < 1e-4;
    return {ok, fmt("ratio sinusoid %.12f, saw tooth %.12f (1 +- 1e-10); harmonic residual %.2e (< 1e-4)", r_sine,
                    r_saw, residual)};
}

Outcome monotone_scan() {
    const std::vector<double> deltas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    const auto rows = delta_scan(ScanBase{a0, A0, L0, kHbarC, kDefaultSweepSamples, 0}, deltas);
    bool monotone = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !(rows[i].unstable_x0 > rows[i - 1].unstable_x0 && rows[i].asymmetry > rows[i - 1].asymmetry))
            monotone = false;
        worst = std::max(worst, std::abs(rows[i].unstable_x0 - unstable_equilibrium_closed(L0, deltas[i])) / L0);
    }
    return {monotone && worst <= 1e-9,
            fmt("strictly increasing: %s; max |x0 - L(1+delta^2)/2| / L = %.3e (tol 1e-9)", monotone ? "yes" : "no",
                worst)};
}

Outcome deterministic_sweep() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "corrucas_acceptance";
    fs::create_directories(dir);
    const std::string config = std::string(CORRUCAS_CONFIG_DIR) + "/fig2b.conf";
    auto run_with = [&](const char* threads, const fs::path& out) {
        ::setenv("CORRUCAS_THREADS", threads, 1);
        std::string args[] = {"corrucas", "sweep", "--config", config, "--out", out.string()};
        std::vector<char*> argv;
        for (auto& s : args) argv.push_back(s.data());
        return cli::run(static_cast<int>(argv.size()), argv.data());
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    // Same config each time, including the output path recorded in the header.
    const fs::path out = dir / "sweep.csv";
    const int rc1 = run_with("1", out);
    const std::string ref = slurp(out);
    const int rc2 = run_with("1", out);
    const std::string again = slurp(out);
    const int rc3 = run_with("7", out);
    const std::string seven = slurp(out);
    const int rc4 = run_with("0", out);
    const std::string automatic = slurp(out);
    ::unsetenv("CORRUCAS_THREADS");
    const bool same = !ref.empty() && ref == again && ref == seven && ref == automatic;
    const bool ok = rc1 == 0 && rc2 == 0 && rc3 == 0 && rc4 == 0 && same;
    return {ok, fmt("exit codes %d/%d/%d/%d, byte-identical across 1, 1, 7 and auto workers: %s (%zu bytes)", rc1, rc2,
                    rc3, rc4, same ? "yes" : "no", ref.size())};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "saw-tooth moment polynomials", moments_closed_form},
        {2, "generic lateral force vs saw-tooth closed form", sawtooth_force},
        {3, "flat-segment form at delta = 0", delta_zero_reduction},
        {4, "short/long branch continuity", branch_continuity},
        {5, "delta = 1/2 landmarks", fig2b_landmarks},
        {6, "zero work over a period", zero_work},
        {7, "gradient consistency", gradient_consistency},
        {8, "symmetric pairs", symmetry},
        {9, "delta scan", monotone_scan},
        {10, "deterministic sweep output", deterministic_sweep},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %2d: %s | %s | %.1f ms\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    ms);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
