#pragma once

// Config-driven experiment runner behind the extremal_lab executable.

#include "extremal/asympt.hpp"
#include "extremal/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace extremal {

enum ExitCode : int { exit_pass = 0, exit_test_failure = 1, exit_invalid_config = 2, exit_numeric = 3 };

/// Invalid configuration; `where` is "file:line" or "--flag" when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

struct ExperimentConfig {
    std::string subcommand;
    std::uint64_t seed = 7;
    std::size_t seeds = 5;
    std::optional<std::size_t> replicates;
    std::optional<std::size_t> r;
    std::optional<std::size_t> n;
    std::optional<std::size_t> cases;
    std::optional<std::size_t> j;
    std::optional<double> t;
    std::optional<double> t2;
    std::optional<double> gamma;
    std::optional<double> level;
    std::optional<double> anchor;
    std::optional<double> width;
    std::optional<std::size_t> oracle_draws;
    std::string dist;
    std::string q;
    std::vector<double> grid;
    std::string out = "out";
    std::string threshold_file;
    Thresholds thresholds;
    /// Source of each explicitly set key: "--key" or "file:line".
    std::map<std::string, std::string> origin;
};

const std::vector<std::string>& subcommands();

/// "exp", "exp:2", "uniform:0:1", "pareto:2", "gumbel_min".
DistributionModel parse_distribution(const std::string& text);
/// "inv", "power:2", "exp", "logsq".
IntensityModel parse_intensity(const std::string& text);

/// Reads a JSON object of Thresholds fields; errors are anchored to lines.
Thresholds load_thresholds(const std::string& path);

/// Parses argv (flags override the --config file). Throws ConfigError.
ExperimentConfig parse_command_line(int argc, const char* const* argv);

struct RunResult {
    std::vector<TestReport> reports;
    int exit_code = exit_pass;
};

/// Validates, runs the subcommand and writes the artifacts into cfg.out.
/// Throws ConfigError for invalid settings; numeric failures propagate.
RunResult run(const ExperimentConfig& cfg);

/// Entry point: parse, run, print a summary, map errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace extremal
