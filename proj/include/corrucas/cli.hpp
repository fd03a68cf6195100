#pragma once

// Batch front-end: flat `key = value` run configs and the four CSV/text
// commands behind the `corrucas` executable.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "corrucas/casimir.hpp"
#include "corrucas/errors.hpp"

namespace corrucas::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitConfig = 2,
    kExitValidation = 3,
};

/// Bad or missing configuration entry; `key()` names it.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what) : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class ProfileKind { sawtooth, flat_sawtooth, sinusoid };
enum class OutputMode { dimensionless, si };

struct ProfileSpec {
    ProfileKind kind = ProfileKind::sawtooth;
    double delta = 0.0;

    bool operator==(const ProfileSpec&) const = default;
};

/// Lengths are nanometers here and converted to meters when building a pair.
struct RunConfig {
    double separation_nm = 0.0;
    double amplitude_lower_nm = 0.0;
    double amplitude_upper_nm = 0.0;
    double period_nm = 0.0;
    ProfileSpec lower;
    ProfileSpec upper;
    int samples = 512;
    OutputMode mode = OutputMode::dimensionless;
    std::string output_path; ///< empty writes to stdout
    std::vector<double> scan_deltas;
    double hbar_c = kHbarC;

    bool operator==(const RunConfig&) const = default;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
};

/// Parse config text. Unknown or duplicate keys and malformed values throw ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

const char* to_string(ProfileKind kind) noexcept;

PlatePair make_pair(const RunConfig& config);

/// 12 significant digits, "-0" printed as "0".
std::string format_number(double v);

void write_sweep(const RunConfig& config, std::ostream& out, unsigned threads = 1);
void write_equilibria(const RunConfig& config, std::ostream& out, unsigned threads = 1);
void write_scan(const RunConfig& config, std::ostream& out, unsigned threads = 1);

/// Runs the closed-form / exact-moment / quadrature agreement checks and the
/// gradient checks. Prints one line per check; returns true when all pass.
/// Throws UnsupportedValidation for pairs without a closed form.
bool run_validate(const RunConfig& config, std::ostream& out);

/// Worker count from CORRUCAS_THREADS (0 or unset: automatic).
unsigned threads_from_env();

/// Entry point of the executable; returns the process exit code.
int run(int argc, char** argv);

} // namespace corrucas::cli
