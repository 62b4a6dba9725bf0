#include "extremal/cli.hpp"

#include "extremal/errors.hpp"
#include "extremal/parallel.hpp"
#include "extremal/prmsim.hpp"
#include "extremal/records.hpp"
#include "extremal/seqcore.hpp"
#include "extremal/tails.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

namespace extremal {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct HelpRequested {
    std::string text;
    int code;
};

const std::vector<std::string> kKeys{"seed",  "seeds",  "replicates", "r",      "n",
                                     "cases", "j",      "t",          "t2",     "gamma",
                                     "level", "anchor", "width",      "oracle-draws",
                                     "dist",  "q",      "grid",       "out",    "threshold-file"};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("bad number '" + s + "' in " + what);
}

std::string read_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot read " + what);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// key -> line for a "key = value" config file, rejecting unknown keys.
std::map<std::string, std::size_t> scan_config(const std::string& path) {
    const std::string text = read_file(path, "config file");
    static const std::regex kv(R"(^\s*([A-Za-z0-9_-]+)\s*=.*$)");
    static const std::regex skip(R"(^\s*(#.*|;.*|\[[^\]]*\]\s*)?$)");
    std::map<std::string, std::size_t> lines;
    std::istringstream is(text);
    std::string line;
    for (std::size_t no = 1; std::getline(is, line); ++no) {
        std::smatch m;
        if (std::regex_match(line, m, kv)) {
            std::string key = m[1];
            std::replace(key.begin(), key.end(), '_', '-');
            if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
                throw ConfigError(path + ":" + std::to_string(no), "unknown key '" + m[1].str() + "'");
            }
            lines[key] = no;
        } else if (!std::regex_match(line, skip)) {
            throw ConfigError(path + ":" + std::to_string(no), "expected 'key = value'");
        }
    }
    return lines;
}

std::string where(const ExperimentConfig& cfg, const std::string& key) {
    const auto it = cfg.origin.find(key);
    return it == cfg.origin.end() ? "--" + key : it->second;
}

[[noreturn]] void invalid(const ExperimentConfig& cfg, const std::string& key, const std::string& msg) {
    throw ConfigError(where(cfg, key), msg);
}

template <class Fn>
auto anchored(const ExperimentConfig& cfg, const std::string& key, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError& e) {
        invalid(cfg, key, e.what());
    }
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string aug(const AugmentedValue& v) { return v.is_bottom() ? "-inf" : num(v.value()); }

std::ofstream open_out(const fs::path& p) {
    std::ofstream o(p, std::ios::binary);
    if (!o) throw ConfigError(p.string(), "cannot write output file");
    return o;
}

void write_discrete_path(const fs::path& dir, const DistributionModel& f, std::size_t r,
                         std::size_t length, const RunSettings& s) {
    RngStream rng = seed_stream(s, 1000, 0);
    const auto x = f.sample(rng, length);
    const auto m = extremal_sequence(x, r);
    auto paths = open_out(dir / "paths.csv");
    paths << "n,m\n";
    for (std::size_t i = 0; i < m.size(); ++i) paths << i + 1 << ',' << aug(m[i]) << '\n';
    const auto rs = range_of_Mr(x, r);
    auto ranges = open_out(dir / "ranges.csv");
    ranges << "value,complete\n";
    for (double v : rs.values) ranges << num(v) << ',' << (AugmentedValue(v) <= rs.horizon ? 1 : 0) << '\n';
}

PoissonField write_continuous_path(const fs::path& dir, const IntensityModel& q, std::size_t r,
                                   double window, double level, const RunSettings& s) {
    auto field = simulate_field(q, window, level, seed_stream(s, 1000, 1));
    while (field.size() < r) field.lower_level(q.q_inverse(2.0 * q.q(field.level())));
    const auto sk = yr_skeleton(field, r);
    auto paths = open_out(dir / "paths.csv");
    paths << "t,y\n";
    for (std::size_t i = 0; i < sk.t.size(); ++i) paths << num(sk.t[i]) << ',' << num(sk.values[i]) << '\n';
    const auto rs = range_of_yr(field, r);
    auto ranges = open_out(dir / "ranges.csv");
    ranges << "value,complete\n";
    for (double v : rs.values) ranges << num(v) << ',' << (AugmentedValue(v) <= rs.horizon ? 1 : 0) << '\n';
    return field;
}

double default_gamma(const DistributionModel& f) {
    switch (f.family()) {
    case Family::uniform:
    case Family::exponential: return -1.0;
    case Family::gumbel_min: return 0.0;
    case Family::pareto_left: return 1.0 / f.parameters().at(0);
    default: throw DomainError("no default gamma for " + f.name() + "; pass --gamma");
    }
}

double default_gamma(const IntensityModel& q) {
    return q.family() == IntensityFamily::log_squared ? -1.0 : 0.0;
}

template <class T>
T value_or(const std::optional<T>& v, T d) {
    return v ? *v : d;
}

json config_json(const ExperimentConfig& c) {
    json j;
    j["subcommand"] = c.subcommand;
    j["seed"] = c.seed;
    j["seeds"] = c.seeds;
    const auto opt = [&](const char* k, const auto& v) {
        if (v) j[k] = *v;
    };
    opt("replicates", c.replicates);
    opt("r", c.r);
    opt("n", c.n);
    opt("cases", c.cases);
    opt("j", c.j);
    opt("t", c.t);
    opt("t2", c.t2);
    opt("gamma", c.gamma);
    opt("level", c.level);
    opt("anchor", c.anchor);
    opt("width", c.width);
    opt("oracle_draws", c.oracle_draws);
    if (!c.dist.empty()) j["dist"] = c.dist;
    if (!c.q.empty()) j["q"] = c.q;
    if (!c.grid.empty()) j["grid"] = c.grid;
    j["out"] = c.out;
    if (!c.threshold_file.empty()) j["threshold_file"] = c.threshold_file;
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void append(std::vector<TestReport>& to, std::vector<TestReport> more) {
    for (auto& r : more) to.push_back(std::move(r));
}

struct Context {
    const ExperimentConfig& cfg;
    RunSettings settings;
    fs::path dir;
};

std::size_t need_at_least(const ExperimentConfig& cfg, const char* key,
                          const std::optional<std::size_t>& v, std::size_t d, std::size_t lo) {
    const std::size_t x = value_or(v, d);
    if (x < lo) invalid(cfg, key, std::string(key) + " must be at least " + std::to_string(lo));
    return x;
}

double positive(const ExperimentConfig& cfg, const char* key, const std::optional<double>& v,
                double d) {
    const double x = value_or(v, d);
    if (!(x > 0.0) || !std::isfinite(x)) invalid(cfg, key, std::string(key) + " must be positive and finite");
    return x;
}

DistributionModel dist_of(const Context& c, const std::string& d) {
    return anchored(c.cfg, "dist", [&] { return parse_distribution(c.cfg.dist.empty() ? d : c.cfg.dist); });
}

IntensityModel q_of(const Context& c, const std::string& d) {
    return anchored(c.cfg, "q", [&] { return parse_intensity(c.cfg.q.empty() ? d : c.cfg.q); });
}

double gamma_for_discrete(const Context& c, const DistributionModel& f) {
    const double g = c.cfg.gamma ? *c.cfg.gamma : anchored(c.cfg, "dist", [&] { return default_gamma(f); });
    anchored(c.cfg, c.cfg.gamma ? "gamma" : "dist", [&] { return discrete_tail_model(f, g); });
    return g;
}

double gamma_for_continuous(const Context& c, const IntensityModel& q) {
    const double g = value_or(c.cfg.gamma, default_gamma(q));
    anchored(c.cfg, c.cfg.gamma ? "gamma" : "q", [&] { return continuous_tail_model(q, g); });
    return g;
}

std::vector<double> grid_or(const Context& c, std::vector<double> d) {
    auto g = c.cfg.grid.empty() ? std::move(d) : c.cfg.grid;
    if (!std::is_sorted(g.begin(), g.end()) || std::adjacent_find(g.begin(), g.end()) != g.end()) {
        invalid(c.cfg, "grid", "grid must be strictly increasing");
    }
    return g;
}

std::vector<TestReport> verify_recursion(const Context& c) {
    const auto n = need_at_least(c.cfg, "n", c.cfg.n, 64, 1);
    const auto cases = need_at_least(c.cfg, "cases", c.cfg.cases, 1000, 1);
    const auto r = std::min(need_at_least(c.cfg, "r", c.cfg.r, 3, 1), n);
    write_discrete_path(c.dir, dist_of(c, "uniform"), r, n, c.settings);
    return recursion_oracle(n, cases, c.settings);
}

std::vector<TestReport> verify_markov(const Context& c) {
    const auto f = dist_of(c, "uniform");
    if (!f.is_continuous()) invalid(c.cfg, "dist", "the kernel identity needs a continuous law");
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 2, 1);
    const auto n = need_at_least(c.cfg, "n", c.cfg.n, 10, r + 1);
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 100000, 2);
    const auto cases = need_at_least(c.cfg, "cases", c.cfg.cases, 100000, 1);
    write_discrete_path(c.dir, f, r, std::max<std::size_t>(n, 64), c.settings);
    std::vector<TestReport> out = truncation_oracle(cases, 8, c.settings);
    append(out, tilde_identity(f, std::max<std::size_t>(n, 32), 5, std::min<std::size_t>(cases, 2000), c.settings));
    append(out, markov_kernel_identity(f, r, n, reps, c.settings));
    return out;
}

std::vector<TestReport> verify_ignatov(const Context& c) {
    const auto f = dist_of(c, "exp");
    if (!f.is_continuous()) invalid(c.cfg, "dist", "Ignatov's theorem needs a continuous law");
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 5, 1);
    const auto k_max = need_at_least(c.cfg, "n", c.cfg.n, 50, r);
    const auto& reps = c.cfg.replicates;
    if (reps && *reps < 2) invalid(c.cfg, "replicates", "replicates must be at least 2");
    std::vector<std::size_t> ns;
    for (double v : grid_or(c, {2, 5, 10, 20})) {
        if (!(v >= 2.0) || v != std::floor(v)) invalid(c.cfg, "grid", "rank-law grid needs integers >= 2");
        ns.push_back(static_cast<std::size_t>(v));
    }
    std::set<std::size_t> ps{1, 2, r};
    const std::vector<std::size_t> p_list(ps.begin(), ps.end());
    write_discrete_path(c.dir, f, r, 1000, c.settings);
    std::vector<TestReport> out = rank_law(f, ns, value_or(reps, std::size_t{100000}), c.settings);
    append(out, jump_frequency(f, r, k_max, value_or(reps, std::size_t{100000}), c.settings));
    const std::size_t spacing_reps = value_or(reps, std::size_t{700});
    const auto corr_reps = need_at_least(c.cfg, "cases", c.cfg.cases, 10000, 2);
    append(out, ignatov(f, p_list, 3 * spacing_reps, corr_reps, 3.0, c.settings));
    return out;
}

std::vector<TestReport> ranges_discrete(const Context& c) {
    const auto f = dist_of(c, "uniform");
    const double g = gamma_for_discrete(c, f);
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 1000, 2);
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 10000, 2);
    const auto xs = grid_or(c, {0.5, 1.0, 2.0});
    const auto tm = discrete_tail_model(f, g);
    for (double x : xs) {
        if (!(tm.limit().g_extended(x) > 0.0)) invalid(c.cfg, "grid", "grid point has zero limit mass");
    }
    write_discrete_path(c.dir, f, r, 2 * r, c.settings);
    return range_counts_discrete(f, g, r, xs, 0.5, 1.0, reps, c.settings);
}

std::vector<TestReport> limit_discrete(const Context& c) {
    const auto f = dist_of(c, "uniform");
    const double g = gamma_for_discrete(c, f);
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 1000, 2);
    const auto j_max = value_or(c.cfg.j, std::size_t{2});
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 5000, 2);
    const auto edges = grid_or(c, {0.0, 0.5, 1.0, 2.0});
    if (edges.size() < 3) invalid(c.cfg, "grid", "need at least three cell edges");
    write_discrete_path(c.dir, f, r, r + j_max + 1000, c.settings);
    std::vector<TestReport> out = discrete_limit(f, g, r, j_max, reps, c.settings);
    append(out, empirical_prm(f, g, r, j_max, edges, reps, c.settings));
    return out;
}

std::vector<TestReport> simulate_field_cmd(const Context& c) {
    const auto q = q_of(c, "inv");
    const double window = positive(c.cfg, "t", c.cfg.t, 1.0);
    const double level = c.cfg.level ? *c.cfg.level : q.q_inverse(100.0 / window);
    if (!q.in_domain(level)) invalid(c.cfg, "level", "level outside the domain of " + q.name());
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 20, 1);
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 2000, 2);
    const auto probes = need_at_least(c.cfg, "cases", c.cfg.cases, 10000, 1);
    const auto field = anchored(c.cfg, "level", [&] {
        return write_continuous_path(c.dir, q, r, window, level, c.settings);
    });
    json head;
    head["model"] = q.name();
    head["T"] = field.window();
    head["level"] = field.level();
    head["seed"] = c.settings.seed;
    head["stream_key"] = field.stream_key();
    auto csv = open_out(c.dir / "field.csv");
    csv << "# " << head.dump() << "\nt,j\n";
    for (const auto& p : field.points()) csv << num(p.t) << ',' << num(p.j) << '\n';
    std::vector<TestReport> out = field_law(q, window, level, reps, c.settings);
    append(out, continuous_equivalence(q, probes, r, c.settings));
    return out;
}

std::vector<TestReport> limit_continuous(const Context& c) {
    const auto q = q_of(c, "inv");
    const double g = gamma_for_continuous(c, q);
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 400, 2);
    const double t = positive(c.cfg, "t", c.cfg.t, 1.0);
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 5000, 2);
    write_continuous_path(c.dir, q, r, t, truncation_level_for(q, r, t), c.settings);
    std::vector<TestReport> out = da_check(q, g, c.settings);
    append(out, onedim_Y(q, g, r, t, reps, c.settings));
    append(out, poisson_clt(1e4, 20000, c.settings));
    return out;
}

std::vector<TestReport> fidi_continuous(const Context& c) {
    const auto q = q_of(c, "inv");
    const double g = gamma_for_continuous(c, q);
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 400, 2);
    const double t1 = positive(c.cfg, "t", c.cfg.t, 1.0);
    const double t2 = positive(c.cfg, "t2", c.cfg.t2, 2.0 * t1);
    if (!(t2 > t1)) invalid(c.cfg, "t2", "t2 must exceed t");
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 5000, 2);
    const auto draws = need_at_least(c.cfg, "oracle-draws", c.cfg.oracle_draws, 1000000, 2);
    const auto grid = grid_or(c, {-1.0, 0.0, 1.0});
    const auto dom = continuous_tail_model(q, g).limit().domain();
    for (double x : grid) {
        if (!dom.contains(x)) invalid(c.cfg, "grid", "grid point " + num(x) + " outside the limit support");
    }
    write_continuous_path(c.dir, q, r, t2, truncation_level_for(q, r, t1), c.settings);
    return fidi_Y(q, g, r, t1, t2, grid, reps, draws, c.settings);
}

std::vector<TestReport> range_continuous_cmd(const Context& c) {
    const auto q = q_of(c, "exp");
    const auto r = need_at_least(c.cfg, "r", c.cfg.r, 20, 1);
    const double anchor = value_or(c.cfg.anchor, 0.0);
    if (!q.in_domain(anchor)) {
        invalid(c.cfg, "anchor", "anchor " + num(anchor) + " outside the domain of " + q.name() +
                                     "; choose a point between x_l and x_r");
    }
    const double width = positive(c.cfg, "width", c.cfg.width, 1.0);
    if (!q.in_domain(anchor - width) || !q.in_domain(anchor + width)) {
        invalid(c.cfg, "width", "cells around the anchor leave the domain of " + q.name());
    }
    const auto reps = need_at_least(c.cfg, "replicates", c.cfg.replicates, 10000, 2);
    const double rr = static_cast<double>(r);
    const double window = (rr + 10.0 * std::sqrt(rr) + 50.0) / q.q(anchor + width);
    write_continuous_path(c.dir, q, r, window, anchor - width, c.settings);
    return range_continuous(q, r, anchor, width, reps, c.settings);
}

} // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{
        "verify-recursion", "verify-markov",    "verify-ignatov",  "ranges-discrete",
        "limit-discrete",   "simulate-field",   "limit-continuous", "fidi-continuous",
        "range-continuous"};
    return names;
}

DistributionModel parse_distribution(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) throw DomainError("empty distribution name");
    std::vector<double> p;
    for (std::size_t i = 1; i < parts.size(); ++i) p.push_back(parse_number(parts[i], "distribution '" + text + "'"));
    const auto& name = parts[0];
    const auto arity = [&](std::size_t lo, std::size_t hi) {
        if (p.size() < lo || p.size() > hi) {
            throw DomainError("distribution '" + name + "' takes " + std::to_string(lo) + ".." +
                              std::to_string(hi) + " parameters");
        }
    };
    if (name == "uniform") {
        arity(0, 2);
        if (p.size() == 1) throw DomainError("uniform takes both bounds, as uniform:lo:hi");
        return p.empty() ? DistributionModel::uniform() : DistributionModel::uniform(p[0], p[1]);
    }
    if (name == "exp" || name == "exponential") {
        arity(0, 1);
        return DistributionModel::exponential(p.empty() ? 1.0 : p[0]);
    }
    if (name == "pareto" || name == "pareto_left") {
        arity(1, 1);
        return DistributionModel::pareto_left(p[0]);
    }
    if (name == "gumbel" || name == "gumbel_min") {
        arity(0, 0);
        return DistributionModel::gumbel_min();
    }
    throw DomainError("unknown distribution '" + name +
                      "' (known: uniform[:lo:hi], exp[:rate], pareto:alpha, gumbel_min)");
}

IntensityModel parse_intensity(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) throw DomainError("empty intensity name");
    const auto& name = parts[0];
    if (name == "inv" && parts.size() == 1) return IntensityModel::inverse();
    if (name == "power" && parts.size() == 2) {
        return IntensityModel::power(parse_number(parts[1], "intensity '" + text + "'"));
    }
    if (name == "exp" && parts.size() == 1) return IntensityModel::exponential();
    if (name == "logsq" && parts.size() == 1) return IntensityModel::log_squared();
    throw DomainError("unknown intensity '" + text + "' (known: inv, power:alpha, exp, logsq)");
}

Thresholds load_thresholds(const std::string& path) {
    const std::string text = read_file(path, "threshold file");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ":" + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)),
                          "invalid JSON in threshold file");
    }
    if (!j.is_object()) throw ConfigError(path + ":1", "threshold file must hold a JSON object");
    static const std::vector<std::pair<std::string, double Thresholds::*>> fields{
        {"median_p", &Thresholds::median_p},
        {"ks_max", &Thresholds::ks_max},
        {"dispersion_lo", &Thresholds::dispersion_lo},
        {"dispersion_hi", &Thresholds::dispersion_hi},
        {"correlation_max", &Thresholds::correlation_max},
        {"sigma_band", &Thresholds::sigma_band},
        {"fidi_max", &Thresholds::fidi_max},
        {"oracle_correlation_tol", &Thresholds::oracle_correlation_tol},
        {"poisson_clt_max", &Thresholds::poisson_clt_max},
        {"da_max", &Thresholds::da_max},
    };
    Thresholds th;
    for (const auto& [key, value] : j.items()) {
        const auto pos = text.find("\"" + key + "\"");
        const std::string at = path + ":" + std::to_string(line_of_offset(text, pos == std::string::npos ? 0 : pos));
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
        if (it == fields.end()) throw ConfigError(at, "unknown threshold '" + key + "'");
        if (!value.is_number()) throw ConfigError(at, "threshold '" + key + "' must be a number");
        const double v = value.get<double>();
        if (!std::isfinite(v) || v < 0.0) throw ConfigError(at, "threshold '" + key + "' must be finite and >= 0");
        th.*(it->second) = v;
    }
    if (th.dispersion_lo > th.dispersion_hi) {
        throw ConfigError(path, "dispersion_lo exceeds dispersion_hi");
    }
    return th;
}

ExperimentConfig parse_command_line(int argc, const char* const* argv) {
    ExperimentConfig cfg;
    CLI::App app{"Monte-Carlo laboratory for rth-order extremal processes", "extremal_lab"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    std::string config_path;
    app.set_config("--config", "", "Config file of 'key = value' lines mirroring the flags");
    app.add_option("--seed", cfg.seed, "Base seed");
    app.add_option("--seeds", cfg.seeds, "Number of independent replicate seeds");
    app.add_option("--replicates", cfg.replicates, "Replicates per seed");
    app.add_option("--r", cfg.r, "Order r");
    app.add_option("--n", cfg.n, "Sequence length (or jump horizon for verify-ignatov)");
    app.add_option("--cases", cfg.cases, "Cases for exact oracles (count-correlation replicates for verify-ignatov)");
    app.add_option("--j", cfg.j, "Largest coordinate offset j for limit-discrete");
    app.add_option("--t", cfg.t, "Time t (window for simulate-field, t1 for fidi)");
    app.add_option("--t2", cfg.t2, "Second time for fidi-continuous");
    app.add_option("--gamma", cfg.gamma, "Extreme-value shape");
    app.add_option("--level", cfg.level, "Truncation level for simulate-field");
    app.add_option("--anchor", cfg.anchor, "Split point for range-continuous");
    app.add_option("--width", cfg.width, "Half width of the cells around the anchor");
    app.add_option("--oracle-draws", cfg.oracle_draws, "Gaussian oracle draws for fidi-continuous");
    app.add_option("--dist", cfg.dist, "Distribution: uniform[:lo:hi], exp[:rate], pareto:alpha, gumbel_min");
    app.add_option("--q", cfg.q, "Intensity tail: inv, power:alpha, exp, logsq");
    app.add_option("--grid", cfg.grid, "Comma-separated grid")->delimiter(',');
    app.add_option("--out", cfg.out, "Output directory");
    app.add_option("--threshold-file", cfg.threshold_file, "JSON file of thresholds");
    static const std::vector<std::string> about{
        "Recursion and truncation-map oracles",
        "Markov kernel identity for the rth order statistic",
        "Rank law, jump frequencies and Ignatov spacings",
        "Poisson range counts of the discrete process",
        "Discrete fidi limit and empirical PRM cells",
        "Simulate a Poisson field and check its law",
        "Attraction check, one-dimensional law of Y and Poisson CLT",
        "Two-time fidi of Y against the Gaussian limit",
        "Range split S+ and S- of the continuous process"};
    for (std::size_t i = 0; i < subcommands().size(); ++i) {
        app.add_subcommand(subcommands()[i], about[i])->fallthrough();
    }

    // locate a config file first so that its lines can anchor diagnostics
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    std::map<std::string, std::size_t> config_lines;
    if (!config_path.empty()) config_lines = scan_config(config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        throw HelpRequested{app.help(), 0};
    } catch (const CLI::CallForAllHelp& e) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All), 0};
    } catch (const CLI::ParseError& e) {
        std::string at;
        const std::string msg = e.what();
        for (const auto& [key, line] : config_lines) {
            const bool on_command_line = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
            });
            if (!on_command_line && msg.find("--" + key + " ") != std::string::npos) {
                at = config_path + ":" + std::to_string(line);
            }
        }
        for (const auto& key : kKeys) {
            if (at.empty() && msg.find("--" + key + " ") != std::string::npos) at = "--" + key;
        }
        throw ConfigError(at, msg);
    }
    for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

    for (const auto& key : kKeys) {
        const bool on_command_line = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        });
        if (on_command_line) {
            cfg.origin[key] = "--" + key;
        } else if (const auto it = config_lines.find(key); it != config_lines.end()) {
            cfg.origin[key] = config_path + ":" + std::to_string(it->second);
        }
    }
    if (!cfg.threshold_file.empty()) cfg.thresholds = load_thresholds(cfg.threshold_file);
    return cfg;
}

RunResult run(const ExperimentConfig& cfg) {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), cfg.subcommand) == names.end()) {
        throw ConfigError("", "unknown subcommand '" + cfg.subcommand + "'");
    }
    if (cfg.seeds < 1) invalid(cfg, "seeds", "seeds must be at least 1");
    Context c{cfg, RunSettings{cfg.seed, cfg.seeds, cfg.thresholds}, fs::path(cfg.out)};
    std::error_code ec;
    fs::create_directories(c.dir, ec);
    if (ec || !fs::is_directory(c.dir)) invalid(cfg, "out", "cannot create output directory '" + cfg.out + "'");

    const auto started = std::chrono::steady_clock::now();
    std::vector<TestReport> reports;
    const auto& s = cfg.subcommand;
    if (s == "verify-recursion") reports = verify_recursion(c);
    else if (s == "verify-markov") reports = verify_markov(c);
    else if (s == "verify-ignatov") reports = verify_ignatov(c);
    else if (s == "ranges-discrete") reports = ranges_discrete(c);
    else if (s == "limit-discrete") reports = limit_discrete(c);
    else if (s == "simulate-field") reports = simulate_field_cmd(c);
    else if (s == "limit-continuous") reports = limit_continuous(c);
    else if (s == "fidi-continuous") reports = fidi_continuous(c);
    else reports = range_continuous_cmd(c);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    auto rep = open_out(c.dir / "reports.json");
    rep << to_json(reports).dump(2) << '\n';
    json meta;
    meta["timestamp"] = utc_timestamp();
    meta["elapsed_seconds"] = elapsed;
    meta["threads"] = worker_count();
    meta["config"] = config_json(cfg);
    auto m = open_out(c.dir / "metadata.json");
    m << meta.dump(2) << '\n';

    RunResult out;
    out.exit_code = all_pass(reports) ? exit_pass : exit_test_failure;
    out.reports = std::move(reports);
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const auto diag = [&](const std::string& where, const std::string& what) {
        err << "extremal_lab: " << (where.empty() ? "" : where + ": ") << "error: " << what << '\n';
    };
    try {
        const auto cfg = parse_command_line(argc, argv);
        const auto res = run(cfg);
        for (const auto& r : res.reports) {
            out << (r.pass ? "PASS " : "FAIL ") << r.name << " statistic=" << r.statistic;
            if (r.p_value) out << " p=" << *r.p_value;
            out << " rule=" << to_string(r.rule) << " threshold=" << r.threshold;
            if (r.threshold_upper) out << ".." << *r.threshold_upper;
            out << '\n';
        }
        return res.exit_code;
    } catch (const HelpRequested& h) {
        out << h.text;
        return h.code;
    } catch (const ConfigError& e) {
        diag(e.where(), e.what());
        return exit_invalid_config;
    } catch (const DomainError& e) {
        diag("", e.what());
        return exit_invalid_config;
    } catch (const InsufficientTruncation& e) {
        diag("", std::string("numeric failure: ") + e.what());
        return exit_numeric;
    } catch (const NumericError& e) {
        diag("", std::string("numeric failure: ") + e.what());
        return exit_numeric;
    } catch (const std::exception& e) {
        diag("", std::string("numeric failure: ") + e.what());
        return exit_numeric;
    }
}

} // namespace extremal
