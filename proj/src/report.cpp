#include "extremal/report.hpp"

#include "extremal/errors.hpp"
#include "extremal/stats.hpp"

#include <algorithm>

namespace extremal {

std::string to_string(PassRule rule) {
    switch (rule) {
    case PassRule::median_p_above: return "median_p_above";
    case PassRule::statistic_below: return "statistic_below";
    case PassRule::statistic_within: return "statistic_within";
    case PassRule::statistic_at_most: return "statistic_at_most";
    }
    return "unknown";
}

TestReport aggregate(std::string name, PassRule rule, double threshold,
                     std::optional<double> threshold_upper, std::size_t n_samples,
                     std::uint64_t base_seed, std::vector<SeedOutcome> per_seed) {
    if (per_seed.empty()) throw DomainError("report " + name + " has no seed outcomes");
    if (rule == PassRule::statistic_within && !threshold_upper) {
        throw DomainError("report " + name + " needs an upper threshold");
    }
    TestReport out;
    out.name = std::move(name);
    out.n_samples = n_samples;
    out.seeds = per_seed.size();
    out.seed = base_seed;
    out.rule = rule;
    out.threshold = threshold;
    out.threshold_upper = threshold_upper;

    std::vector<double> stats, ps;
    for (const auto& s : per_seed) {
        stats.push_back(s.statistic);
        if (s.p_value) ps.push_back(*s.p_value);
    }
    out.statistic = median(stats);
    if (ps.size() == per_seed.size()) out.p_value = median(ps);
    switch (rule) {
    case PassRule::median_p_above:
        if (!out.p_value) throw DomainError("report " + out.name + " needs p-values");
        out.pass = *out.p_value > threshold;
        break;
    case PassRule::statistic_below: out.pass = out.statistic < threshold; break;
    case PassRule::statistic_within:
        out.pass = out.statistic >= threshold && out.statistic <= *threshold_upper;
        break;
    case PassRule::statistic_at_most: out.pass = out.statistic <= threshold; break;
    }
    out.per_seed = std::move(per_seed);
    return out;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

nlohmann::ordered_json to_json(const TestReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    j["p_value"] = optional_number(r.p_value);
    j["n_samples"] = r.n_samples;
    j["seeds"] = r.seeds;
    j["seed"] = r.seed;
    j["rule"] = to_string(r.rule);
    j["threshold"] = r.threshold;
    j["threshold_upper"] = optional_number(r.threshold_upper);
    j["pass"] = r.pass;
    auto& per = j["per_seed"] = nlohmann::ordered_json::array();
    for (const auto& s : r.per_seed) {
        per.push_back({{"seed", s.seed}, {"statistic", s.statistic},
                       {"p_value", optional_number(s.p_value)}});
    }
    return j;
}

nlohmann::ordered_json to_json(const std::vector<TestReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

bool all_pass(const std::vector<TestReport>& reports) noexcept {
    return std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.pass; });
}

} // namespace extremal
