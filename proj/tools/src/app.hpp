#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ness/moments.hpp"
#include "ness/params.hpp"
#include "ness/sim.hpp"

namespace ness::app {

/// Bad configuration: unknown keys, malformed values or violated constraints.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kEngineError = 1, kConfigError = 2, kVerificationFailed = 3 };

/// Sweep range lo:step:hi, inclusive of hi up to rounding.
struct Range {
    double lo = 0.0;
    double step = 0.0;
    double hi = 0.0;
    std::vector<double> values() const;
};
Range parse_range(const std::string& text);

/// Parses "c", "ramp(a,b,T)" or "sin(mean,amp,period)".
TensionSchedule parse_schedule(const std::string& text);

struct RunConfig {
    std::string subcommand;
    ChainParams params;
    SimConfig sim;
    LyapunovMethod lyapunov = LyapunovMethod::Direct;
    int pde_m = 256;
    double pde_dt = 1e-4;
    std::vector<double> times{0.1, 0.5, 1.0};
    std::string pde_initial = "zero";
    std::string suite = "quick";
    std::optional<Range> tau_range;
    std::vector<int> n_list{64, 128};
    std::string out = "out";
    /// Effective key/value pairs after defaults and overrides, for the echo.
    std::map<std::string, std::string> effective;
};

/// Keys accepted in config files; flags map onto the same keys.
const std::vector<std::string>& known_keys();

/// Reads key = value lines; '#' starts a comment. Unknown keys are reported
/// together in one ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a validated RunConfig from merged key/value pairs.
RunConfig build_config(const std::string& subcommand, const std::map<std::string, std::string>& kv);

/// Command-line front end: parses argv (file first, flags override).
RunConfig parse_config(int argc, const char* const* argv);

/// Executes the subcommand, writing artifacts under config.out.
int run(const RunConfig& config);

/// Full entry point with exit-code mapping; diagnostics go to stderr.
int main_entry(int argc, const char* const* argv);

}  // namespace ness::app
