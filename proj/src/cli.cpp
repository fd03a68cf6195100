#include "corrucas/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "corrucas/analysis.hpp"
#include "corrucas/moments.hpp"
#include "corrucas/profile.hpp"

namespace corrucas::cli {

namespace {

constexpr double kNanometer = 1e-9;

namespace keys {
constexpr const char* separation = "geometry.separation_nm";
constexpr const char* amplitude_lower = "geometry.amplitude_lower_nm";
constexpr const char* amplitude_upper = "geometry.amplitude_upper_nm";
constexpr const char* period = "geometry.period_nm";
constexpr const char* lower_kind = "profile.lower.kind";
constexpr const char* lower_delta = "profile.lower.delta";
constexpr const char* upper_kind = "profile.upper.kind";
constexpr const char* upper_delta = "profile.upper.delta";
constexpr const char* samples = "sweep.samples";
constexpr const char* mode = "output.mode";
constexpr const char* path = "output.path";
constexpr const char* deltas = "scan.deltas";
constexpr const char* hbar_c = "physics.hbar_c";
} // namespace keys

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    return v;
}

int parse_int(const std::string& key, std::string_view text) {
    int v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

ProfileKind parse_kind(const std::string& key, std::string_view text) {
    if (text == "sawtooth") return ProfileKind::sawtooth;
    if (text == "flat_sawtooth") return ProfileKind::flat_sawtooth;
    if (text == "sinusoid") return ProfileKind::sinusoid;
    throw ConfigError(key, "unknown profile kind '" + std::string(text) + "' (sawtooth | flat_sawtooth | sinusoid)");
}

std::string exact_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Profile build_profile(const ProfileSpec& spec, double period, bool upper) {
    switch (spec.kind) {
    case ProfileKind::sawtooth:
        return upper ? make_sawtooth_upper(period) : make_sawtooth_lower(period);
    case ProfileKind::flat_sawtooth:
        return make_flat_sawtooth(period, spec.delta);
    case ProfileKind::sinusoid:
        return make_sinusoid(period);
    }
    throw InvalidArgument("unknown profile kind");
}

void write_provenance(const RunConfig& config, const char* command, std::ostream& out) {
    out << "# corrucas " << command << '\n';
    std::istringstream lines(serialize_config(config));
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
}


} // namespace

const char* to_string(ProfileKind kind) noexcept {
    switch (kind) {
    case ProfileKind::sawtooth: return "sawtooth";
    case ProfileKind::flat_sawtooth: return "flat_sawtooth";
    case ProfileKind::sinusoid: return "sinusoid";
    }
    return "?";
}

void RunConfig::validate() const {
    if (!(separation_nm > 0.0)) throw ConfigError(keys::separation, "must be positive");
    if (!(period_nm > 0.0)) throw ConfigError(keys::period, "must be positive");
    if (!(amplitude_lower_nm >= 0.0)) throw ConfigError(keys::amplitude_lower, "must be non-negative");
    if (!(amplitude_upper_nm >= 0.0)) throw ConfigError(keys::amplitude_upper, "must be non-negative");
    if (!(amplitude_lower_nm + amplitude_upper_nm < separation_nm))
        throw ConfigError(keys::amplitude_upper, "amplitudes must sum to less than the separation");
    if (!(lower.delta >= 0.0 && lower.delta < 1.0)) throw ConfigError(keys::lower_delta, "must lie in [0, 1)");
    if (!(upper.delta >= 0.0 && upper.delta < 1.0)) throw ConfigError(keys::upper_delta, "must lie in [0, 1)");
    if (samples < kMinSweepSamples)
        throw ConfigError(keys::samples, "must be at least " + std::to_string(kMinSweepSamples));
    for (double d : scan_deltas)
        if (!(d >= 0.0 && d < 1.0)) throw ConfigError(keys::deltas, "every delta must lie in [0, 1)");
    if (!(hbar_c > 0.0)) throw ConfigError(keys::hbar_c, "must be positive");
}

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");

        if (key == keys::separation) c.separation_nm = parse_double(key, value);
        else if (key == keys::amplitude_lower) c.amplitude_lower_nm = parse_double(key, value);
        else if (key == keys::amplitude_upper) c.amplitude_upper_nm = parse_double(key, value);
        else if (key == keys::period) c.period_nm = parse_double(key, value);
        else if (key == keys::lower_kind) c.lower.kind = parse_kind(key, value);
        else if (key == keys::lower_delta) c.lower.delta = parse_double(key, value);
        else if (key == keys::upper_kind) c.upper.kind = parse_kind(key, value);
        else if (key == keys::upper_delta) c.upper.delta = parse_double(key, value);
        else if (key == keys::samples) c.samples = parse_int(key, value);
        else if (key == keys::mode) {
            if (value == "dimensionless") c.mode = OutputMode::dimensionless;
            else if (value == "si") c.mode = OutputMode::si;
            else throw ConfigError(key, "expected 'dimensionless' or 'si'");
        } else if (key == keys::path) c.output_path = std::string(value);
        else if (key == keys::deltas) {
            c.scan_deltas.clear();
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const std::string_view item = trim(rest.substr(0, comma));
                if (item.empty()) throw ConfigError(key, "empty entry in delta list");
                c.scan_deltas.push_back(parse_double(key, item));
                rest = (comma == std::string_view::npos) ? std::string_view{} : rest.substr(comma + 1);
            }
        } else if (key == keys::hbar_c) c.hbar_c = parse_double(key, value);
        else throw ConfigError(key, "unknown key");
    }
    for (const char* required : {keys::separation, keys::amplitude_lower, keys::amplitude_upper, keys::period})
        if (!seen.contains(required)) throw ConfigError(required, "missing required key");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << keys::separation << " = " << exact_number(c.separation_nm) << '\n';
    out << keys::amplitude_lower << " = " << exact_number(c.amplitude_lower_nm) << '\n';
    out << keys::amplitude_upper << " = " << exact_number(c.amplitude_upper_nm) << '\n';
    out << keys::period << " = " << exact_number(c.period_nm) << '\n';
    out << keys::lower_kind << " = " << to_string(c.lower.kind) << '\n';
    out << keys::lower_delta << " = " << exact_number(c.lower.delta) << '\n';
    out << keys::upper_kind << " = " << to_string(c.upper.kind) << '\n';
    out << keys::upper_delta << " = " << exact_number(c.upper.delta) << '\n';
    out << keys::samples << " = " << c.samples << '\n';
    out << keys::mode << " = " << (c.mode == OutputMode::si ? "si" : "dimensionless") << '\n';
    if (!c.output_path.empty()) out << keys::path << " = " << c.output_path << '\n';
    if (!c.scan_deltas.empty()) {
        out << keys::deltas << " =";
        for (std::size_t i = 0; i < c.scan_deltas.size(); ++i)
            out << (i == 0 ? " " : ", ") << exact_number(c.scan_deltas[i]);
        out << '\n';
    }
    out << keys::hbar_c << " = " << exact_number(c.hbar_c) << '\n';
    return out.str();
}

PlatePair make_pair(const RunConfig& config) {
    config.validate();
    const double period = config.period_nm * kNanometer;
    const Geometry geometry{config.separation_nm * kNanometer, config.amplitude_lower_nm * kNanometer,
                            config.amplitude_upper_nm * kNanometer, period};
    return PlatePair(geometry, build_profile(config.lower, period, false), build_profile(config.upper, period, true),
                     config.hbar_c);
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_sweep(const RunConfig& config, std::ostream& out, unsigned threads) {
    const PlatePair pair = make_pair(config);
    const ForceCurve curve = sweep(pair, config.samples, config.mode == OutputMode::dimensionless, threads);
    write_provenance(config, "sweep", out);
    out << "x0_over_period,f_lat_left,f_lat_right,f_lat_mid\n";
    for (const ForceSample& s : curve.samples())
        out << format_number(s.x0 / curve.period()) << ',' << format_number(s.left) << ','
            << format_number(s.right) << ',' << format_number(s.mid()) << '\n';
}

void write_equilibria(const RunConfig& config, std::ostream& out, unsigned threads) {
    const PlatePair pair = make_pair(config);
    const ForceCurve curve = sweep(pair, config.samples, config.mode == OutputMode::dimensionless, threads);
    const auto points = find_equilibria(curve);
    write_provenance(config, "equilibria", out);
    out << "x0_over_period,kind,mechanism,f_left,f_right\n";
    for (const EquilibriumPoint& p : points)
        out << format_number(p.x0 / curve.period()) << ',' << to_string(p.kind) << ',' << to_string(p.mechanism)
            << ',' << format_number(p.force.left) << ',' << format_number(p.force.right) << '\n';
}

void write_scan(const RunConfig& config, std::ostream& out, unsigned threads) {
    config.validate();
    if (config.scan_deltas.empty()) throw ConfigError(keys::deltas, "scan needs a non-empty delta list");
    if (config.amplitude_lower_nm != config.amplitude_upper_nm || config.amplitude_lower_nm <= 0.0)
        throw ConfigError(keys::amplitude_upper, "scan needs equal positive amplitudes");
    const ScanBase base{config.separation_nm * kNanometer, config.amplitude_lower_nm * kNanometer,
                        config.period_nm * kNanometer, config.hbar_c, config.samples, threads};
    const auto rows = delta_scan(base, config.scan_deltas);
    write_provenance(config, "scan", out);
    out << "delta,x0_unstable_over_period,asymmetry_ratio\n";
    for (const ScanRow& r : rows)
        out << format_number(r.delta) << ',' << format_number(r.unstable_x0 / base.period) << ','
            << format_number(r.asymmetry) << '\n';
}

// Validation

namespace {

struct Check {
    std::string name;
    double deviation;
    double tolerance;
    bool pass() const { return deviation <= tolerance; }
};

double relative(double value, double reference) {
    const double denom = std::abs(reference);
    return denom > 0.0 ? std::abs(value - reference) / denom : std::abs(value - reference);
}

bool near_breakpoint(double t, const std::vector<double>& breaks, double margin) {
    for (double b : breaks) {
        const double d = std::abs(t - b);
        if (d < margin || 1.0 - d < margin) return true;
    }
    return false;
}

} // namespace

bool run_validate(const RunConfig& config, std::ostream& out) {
    const PlatePair pair = make_pair(config);
    const bool symmetric = config.lower.kind == ProfileKind::sawtooth && config.upper.kind == ProfileKind::sawtooth;
    const bool asymmetric =
        config.lower.kind == ProfileKind::flat_sawtooth && config.upper.kind == ProfileKind::sawtooth;
    if (!symmetric && !asymmetric)
        throw UnsupportedValidation("validate: no closed form for lower=" + std::string(to_string(config.lower.kind)) +
                                    ", upper=" + to_string(config.upper.kind));
    if (config.amplitude_lower_nm != config.amplitude_upper_nm || config.amplitude_lower_nm <= 0.0)
        throw UnsupportedValidation("validate: closed forms need equal positive amplitudes");

    const double a = pair.separation();
    const double amp = pair.amplitude_lower();
    const double period = pair.period();
    const double hc = pair.hbar_c();
    const double delta = asymmetric ? config.lower.delta : 0.0;
    const std::vector<double> breaks = pair.force_breakpoints();
    std::vector<Check> checks;

    auto closed = [&](double x0) {
        return symmetric ? lateral_force_sawtooth_closed(a, amp, period, x0, hc)
                         : lateral_force_asymmetric_closed(a, amp, period, delta, x0, hc);
    };

    if (symmetric) {
        double dev = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double t = i / 100.0;
            const SawtoothMoments ref = sawtooth_moments_closed_form(t);
            const double x0 = t * period;
            dev = std::max({dev, std::abs(pair.moment(1, 1, x0) - ref.f1_f2),
                            std::abs(pair.moment(2, 1, x0) - ref.f1sq_f2), std::abs(pair.moment(1, 2, x0) - ref.f1sq_f2),
                            std::abs(pair.moment(3, 1, x0) - ref.f1cu_f2), std::abs(pair.moment(1, 3, x0) - ref.f1cu_f2),
                            std::abs(pair.moment(2, 2, x0) - ref.f1sq_f2sq)});
        }
        checks.push_back({"exact_moments_vs_closed_form", dev, 1e-12});
    }

    {
        const QuadratureSpec spec{};
        double dev = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x0 = (i / 100.0) * period;
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; k + l <= 4; ++l)
                    dev = std::max(dev, std::abs(cross_moment_numeric(pair.lower(), pair.upper(), k, l, x0, spec) -
                                                 pair.moment(k, l, x0)));
        }
        checks.push_back({"quadrature_vs_exact_moments", dev, 1e-10});
    }

    {
        std::mt19937_64 rng(20061016);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double dev = 0.0;
        int taken = 0;
        while (taken < 200) {
            const double t = uni(rng);
            if (near_breakpoint(t, breaks, 1e-6)) continue;
            ++taken;
            dev = std::max(dev, relative(lateral_force(pair, t * period).mid(), closed(t * period)));
        }
        checks.push_back({"generic_lateral_vs_closed_form", dev, 1e-10});
    }

    if (asymmetric) {
        const double lx = delta * period;
        const double s = lateral_force_asymmetric_short_branch(a, amp, period, delta, lx, hc);
        const double l = lateral_force_asymmetric_long_branch(a, amp, period, delta, lx, hc);
        checks.push_back({"branch_continuity_at_lx", relative(l, s), 1e-12});
    }

    {
        const double h = period * 1e-6;
        double dev = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double t = (i + 0.5) / 50.0;
            if (near_breakpoint(t, breaks, 1e-4)) continue;
            const double x0 = t * period;
            const double fd = -(casimir_energy(pair, x0 + h) - casimir_energy(pair, x0 - h)) / (2.0 * h);
            dev = std::max(dev, relative(fd, lateral_force(pair, x0).mid()));
        }
        checks.push_back({"lateral_force_vs_energy_gradient", dev, 1e-5});
    }

    {
        double dev = 0.0;
        const double a_min = 1.05 * (pair.amplitude_lower() + pair.amplitude_upper());
        for (int i = 0; i < 20; ++i) {
            const double ai = std::max(a_min, a * (0.8 + 0.05 * i));
            const double h = ai * 1e-5;
            const double x0 = 0.3 * period;
            const double fd = -(casimir_energy(pair.with_separation(ai + h), x0) -
                                casimir_energy(pair.with_separation(ai - h), x0)) /
                              (2.0 * h);
            dev = std::max(dev, relative(fd, normal_force(pair.with_separation(ai), x0)));
        }
        checks.push_back({"normal_force_vs_energy_gradient", dev, 1e-6});
    }

    bool all = true;
    for (const Check& c : checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-36s max_dev=%.3e tol=%.1e %s\n", c.name.c_str(), c.deviation, c.tolerance,
                      c.pass() ? "PASS" : "FAIL");
        out << line;
        all = all && c.pass();
    }
    const ValidityReport report = validity_report(pair);
    for (const std::string& msg : report.messages) out << msg << '\n';
    out << (all ? "validation passed\n" : "validation FAILED\n");
    return all;
}

unsigned threads_from_env() {
    const char* env = std::getenv("CORRUCAS_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("CORRUCAS_THREADS", "expected a non-negative integer");
    return v;
}

int run(int argc, char** argv) {
    CLI::App app{"Casimir forces between plates with periodic longitudinal corrugations", "corrucas"};
    std::string command;
    std::string config_path;
    std::string out_path;
    int samples = 0;
    bool si = false;
    app.add_option("command", command, "sweep | equilibria | validate | scan")
        ->required()
        ->check(CLI::IsMember({"sweep", "equilibria", "validate", "scan"}));
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_path, "output file (overrides output.path)");
    app.add_option("--samples", samples, "samples per period (overrides sweep.samples)");
    app.add_flag("--si", si, "write forces in N/m^2 instead of F/|F0|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config = load_config(config_path);
        if (!out_path.empty()) config.output_path = out_path;
        if (samples != 0) config.samples = samples;
        if (si) config.mode = OutputMode::si;
        config.validate();
        const unsigned threads = threads_from_env();

        if (command == "validate") {
            std::ostringstream report;
            const bool ok = run_validate(config, report);
            std::cout << report.str();
            return ok ? kExitOk : kExitValidation;
        }

        std::ostringstream csv;
        if (command == "sweep") write_sweep(config, csv, threads);
        else if (command == "equilibria") write_equilibria(config, csv, threads);
        else write_scan(config, csv, threads);

        if (config.output_path.empty()) {
            std::cout << csv.str();
            return std::cout ? kExitOk : kExitRuntime;
        }
        std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "corrucas: I/O error: cannot open '" << config.output_path << "' for writing\n";
            return kExitRuntime;
        }
        file << csv.str();
        if (!file.flush()) {
            std::cerr << "corrucas: I/O error: failed writing '" << config.output_path << "'\n";
            return kExitRuntime;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "corrucas: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnsupportedValidation& e) {
        std::cerr << "corrucas: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "corrucas: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "corrucas: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace corrucas::cli
