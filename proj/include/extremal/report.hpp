#pragma once

// Named test outcomes aggregated over independent replicate seeds.

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace extremal {

/// How the per-seed results are turned into pass/fail. Every rule looks at
/// the median over seeds.
enum class PassRule {
    median_p_above,    // median p > threshold
    statistic_below,   // median statistic < threshold
    statistic_within,  // threshold <= median statistic <= threshold_upper
    statistic_at_most, // median statistic <= threshold (exact checks use 0)
};

std::string to_string(PassRule rule);

struct SeedOutcome {
    std::uint64_t seed;
    double statistic;
    std::optional<double> p_value;
};

struct TestReport {
    std::string name;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::size_t n_samples = 0;
    std::size_t seeds = 0;
    std::uint64_t seed = 0;
    PassRule rule = PassRule::median_p_above;
    double threshold = 0.0;
    std::optional<double> threshold_upper;
    bool pass = false;
    std::vector<SeedOutcome> per_seed;
};

/// Medians over `per_seed` and the pass flag for `rule`.
TestReport aggregate(std::string name, PassRule rule, double threshold,
                     std::optional<double> threshold_upper, std::size_t n_samples,
                     std::uint64_t base_seed, std::vector<SeedOutcome> per_seed);

nlohmann::ordered_json to_json(const TestReport& r);
nlohmann::ordered_json to_json(const std::vector<TestReport>& reports);

bool all_pass(const std::vector<TestReport>& reports) noexcept;

} // namespace extremal
