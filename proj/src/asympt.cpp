#include "extremal/asympt.hpp"

#include "extremal/errors.hpp"
#include "extremal/markov.hpp"
#include "extremal/parallel.hpp"
#include "extremal/prmsim.hpp"
#include "extremal/records.hpp"
#include "extremal/seqcore.hpp"
#include "extremal/stats.hpp"
#include "extremal/tails.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace extremal {

namespace {

// experiment tags keep the seed streams of different experiments disjoint
enum Tag : std::uint64_t {
    kRecursion = 1,
    kTruncation,
    kTilde,
    kKernel,
    kRank,
    kJump,
    kIgnatovSpacing,
    kIgnatovCount,
    kDiscreteLimit,
    kEmpiricalPrm,
    kRangeDiscrete,
    kFieldLaw,
    kEquivalence,
    kOnedim,
    kPoissonClt,
    kFidi,
    kFidiOracle,
    kRangeContinuous,
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

TestReport exact_report(std::string name, double mismatches, std::size_t n, const RunSettings& s,
                        std::uint64_t key) {
    return aggregate(std::move(name), PassRule::statistic_at_most, 0.0, std::nullopt, n, s.seed,
                     {{key, mismatches, std::nullopt}});
}

std::vector<double> column(std::span<const std::vector<double>> rows, std::size_t j) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

} // namespace

RngStream seed_stream(const RunSettings& s, std::uint64_t experiment, std::size_t k) {
    return RngStream(s.seed).child(experiment).child(k);
}

std::vector<TestReport> recursion_oracle(std::size_t n_max, std::size_t cases,
                                         const RunSettings& s) {
    if (n_max < 1 || cases < 1) throw DomainError("recursion_oracle needs n_max >= 1 and cases >= 1");
    const RngStream base = seed_stream(s, kRecursion, 0);
    std::vector<std::size_t> bad(cases, 0);
    parallel_for(cases, [&](std::size_t c) {
        RngStream rng = base.child(c);
        const auto n = static_cast<std::size_t>(rng.integer(1, n_max));
        const bool ties = rng.uniform() < 0.5;
        std::vector<double> x(n);
        for (auto& v : x) v = ties ? static_cast<double>(rng.integer(0, 4)) : rng.uniform();
        const auto seq = AugmentedSequence::from_reals(x);
        auto xr = cummax(seq);
        for (std::size_t r = 1; r <= n; ++r) {
            bool ok = xr.size() == n;
            for (std::size_t i = 0; ok && i < n; ++i) {
                const AugmentedValue want =
                    i + 1 < r ? AugmentedValue::bottom() : AugmentedValue(kth_largest_prefix(x, r, i + 1));
                ok = xr[i] == want;
            }
            bad[c] += ok ? 0 : 1;
            if (r < n) xr = recursion_step(xr, seq);
        }
    });
    double total = 0;
    for (auto b : bad) total += static_cast<double>(b);
    return {exact_report("recursion_oracle", total, cases, s, base.key())};
}

std::vector<TestReport> truncation_oracle(std::size_t pairs, std::size_t r_max,
                                          const RunSettings& s) {
    if (pairs < 1 || r_max < 1) throw DomainError("truncation_oracle needs pairs >= 1 and r_max >= 1");
    const RngStream base = seed_stream(s, kTruncation, 0);
    std::vector<char> mismatch(pairs, 0), violation(pairs, 0);
    parallel_for(pairs, [&](std::size_t i) {
        RngStream rng = base.child(i);
        const auto r = static_cast<std::size_t>(rng.integer(1, r_max));
        const auto finite = static_cast<std::size_t>(rng.integer(0, r));
        const bool ties = rng.uniform() < 0.5;
        auto draw = [&] { return ties ? static_cast<double>(rng.integer(0, 5)) : 10.0 * rng.uniform(); };
        std::vector<double> vals(finite);
        for (auto& v : vals) v = draw();
        std::sort(vals.begin(), vals.end(), std::greater<>());
        double x = draw();
        if (finite > 0 && rng.uniform() < 0.1) x = vals[rng.integer(0, finite - 1)];

        std::vector<AugmentedValue> entries(vals.begin(), vals.end());
        entries.resize(r, AugmentedValue::bottom());
        const DescendingTuple m(entries);
        const auto out = truncation_map(m, x);

        std::vector<double> pool = vals;
        pool.push_back(x);
        std::sort(pool.begin(), pool.end(), std::greater<>());
        std::vector<AugmentedValue> want(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(r, pool.size())));
        want.resize(r, AugmentedValue::bottom());
        mismatch[i] = !std::equal(want.begin(), want.end(), out.entries().begin(), out.entries().end());
        for (std::size_t k = 0; k < r; ++k) {
            if (out[k] < m[k]) violation[i] = 1;
        }
    });
    const auto sum = [](const std::vector<char>& v) {
        return static_cast<double>(std::count(v.begin(), v.end(), 1));
    };
    return {exact_report("truncation_oracle", sum(mismatch), pairs, s, base.key()),
            exact_report("truncation_inequality", sum(violation), pairs, s, base.key())};
}

std::vector<TestReport> tilde_identity(const DistributionModel& f, std::size_t n,
                                       std::size_t r_max, std::size_t cases,
                                       const RunSettings& s) {
    if (n < 2 || r_max < 1 || cases < 1) throw DomainError("tilde_identity needs n >= 2, r_max >= 1, cases >= 1");
    const RngStream base = seed_stream(s, kTilde, 0);
    std::vector<char> bad(cases, 0);
    parallel_for(cases, [&](std::size_t c) {
        RngStream rng = base.child(c);
        const auto r = static_cast<std::size_t>(rng.integer(1, std::min(r_max, n)));
        const auto x = f.sample(rng, n);
        std::vector<double> u(n);
        for (auto& v : u) v = rng.uniform();
        const auto xr = extremal_sequence(x, r);
        const auto hat = build_hat_sequence(f, x, u, r);
        const auto tilde = build_tilde_sequence(f, xr, u, r);
        bad[c] = !(shifted_min(xr, hat) == tilde);
    });
    return {exact_report("tilde_identity", static_cast<double>(std::count(bad.begin(), bad.end(), 1)),
                         cases, s, base.key())};
}

std::vector<TestReport> markov_kernel_identity(const DistributionModel& f, std::size_t r,
                                               std::size_t n, std::size_t replicates,
                                               const RunSettings& s) {
    if (r < 1 || n < r + 1 || replicates < 1) {
        throw DomainError("markov_kernel_identity needs r >= 1, n >= r + 1 and replicates >= 1");
    }
    std::vector<SeedOutcome> per;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kKernel, k);
        std::vector<double> via_kernel(replicates), direct(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            RngStream a = block.child(2 * i);
            const auto x = f.sample(a, n);
            std::vector<double> u(n);
            for (auto& v : u) v = a.uniform();
            via_kernel[i] = kernel_step(f, extremal_sequence(x, r), u, r).term(n).value();
            RngStream b = block.child(2 * i + 1);
            direct[i] = kth_largest_prefix(f.sample(b, n), r + 1, n);
        });
        const auto g = ks_two_sample(via_kernel, direct);
        per.push_back({block.key(), g.statistic, g.p_value});
    }
    return {aggregate("markov_kernel_identity", PassRule::median_p_above, s.thresholds.median_p,
                      std::nullopt, replicates, s.seed, std::move(per))};
}

std::vector<TestReport> rank_law(const DistributionModel& f, std::span<const std::size_t> n_list,
                                 std::size_t replicates, const RunSettings& s) {
    if (n_list.empty() || replicates < 1) throw DomainError("rank_law needs n values and replicates");
    const std::size_t n_max = *std::max_element(n_list.begin(), n_list.end());
    if (*std::min_element(n_list.begin(), n_list.end()) < 2) throw DomainError("rank_law needs n >= 2");
    std::vector<std::vector<SeedOutcome>> per(n_list.size());
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kRank, k);
        std::vector<std::vector<std::size_t>> ranks(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            const auto rs = relative_ranks(f.sample(rng, n_max));
            for (auto n : n_list) ranks[i].push_back(rs.rank(n));
        });
        for (std::size_t a = 0; a < n_list.size(); ++a) {
            std::vector<std::uint64_t> counts(n_list[a], 0);
            for (const auto& row : ranks) ++counts[row[a] - 1];
            const auto g = chi_square_uniform(counts);
            per[a].push_back({block.key(), g.statistic, g.p_value});
        }
    }
    std::vector<TestReport> out;
    for (std::size_t a = 0; a < n_list.size(); ++a) {
        out.push_back(aggregate("rank_law_n" + std::to_string(n_list[a]), PassRule::median_p_above,
                                s.thresholds.median_p, std::nullopt, replicates, s.seed,
                                std::move(per[a])));
    }
    return out;
}

std::vector<TestReport> jump_frequency(const DistributionModel& f, std::size_t r,
                                       std::size_t k_max, std::size_t replicates,
                                       const RunSettings& s) {
    if (r < 1 || k_max < r || replicates < 1) throw DomainError("jump_frequency needs 1 <= r <= k_max");
    std::vector<SeedOutcome> per;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kJump, k);
        std::vector<std::vector<std::size_t>> jumps(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            jumps[i] = jump_indices(f.sample(rng, k_max), r);
        });
        std::vector<std::uint64_t> hits(k_max + 1, 0);
        for (const auto& js : jumps) {
            for (auto off : js) ++hits[r + off];
        }
        double worst = 0.0;
        for (std::size_t idx = r; idx <= k_max; ++idx) {
            const double p = static_cast<double>(r) / static_cast<double>(idx);
            worst = std::max(worst, std::abs(binomial_z(hits[idx], replicates, p)));
        }
        per.push_back({block.key(), worst, std::nullopt});
    }
    return {aggregate("jump_frequency_r" + std::to_string(r), PassRule::statistic_at_most,
                      s.thresholds.sigma_band, std::nullopt, replicates, s.seed, std::move(per))};
}

std::vector<double> first_p_record_values(const DistributionModel& f, RngStream& rng,
                                          std::size_t p, std::size_t m) {
    if (p < 1 || m < 1) throw DomainError("first_p_record_values needs p >= 1 and m >= 1");
    constexpr std::size_t kStoreLimit = std::size_t{1} << 22;
    constexpr std::uint64_t kCap = std::uint64_t{1} << 36;
    const RngStream start = rng;

    // online pass: x has rank p iff exactly p - 1 earlier values are >= x,
    // and only the top p earlier values can decide that
    std::vector<double> top; // descending
    std::vector<double> found;
    std::uint64_t length = 0;
    while (found.size() < m) {
        if (++length > kCap) throw NumericError("p-record search exceeded its length cap");
        const double x = f.sample(rng);
        const auto ge = static_cast<std::size_t>(
            std::upper_bound(top.begin(), top.end(), x, std::greater_equal<>()) - top.begin());
        if (ge == p - 1) found.push_back(x);
        if (top.size() < p || x > top.back()) {
            top.insert(top.begin() + static_cast<std::ptrdiff_t>(std::min(ge, top.size())), x);
            if (top.size() > p) top.pop_back();
        }
    }
    if (length <= kStoreLimit) {
        RngStream replay = start;
        const auto sample = f.sample(replay, static_cast<std::size_t>(length));
        const auto rec = p_records(sample, p);
        if (rec.values.size() != m || !std::equal(found.begin(), found.end(), rec.values.begin())) {
            throw NumericError("online p-record search disagrees with p_records");
        }
    }
    return found;
}

std::vector<TestReport> ignatov(const DistributionModel& f, std::span<const std::size_t> p_list,
                                std::size_t min_spacings, std::size_t corr_replicates,
                                double count_level, const RunSettings& s) {
    if (!f.is_continuous()) throw DomainError("Ignatov structure needs a continuous law");
    if (!(count_level > 0.0)) throw DomainError("count level must be positive");
    constexpr std::size_t kPerReplicate = 3;
    const std::size_t reps = (min_spacings + kPerReplicate - 1) / kPerReplicate;
    const double r0 = f.cumulative_hazard(f.left_endpoint());
    std::vector<TestReport> out;
    for (auto p : p_list) {
        std::vector<SeedOutcome> per;
        for (std::size_t k = 0; k < s.seeds; ++k) {
            const RngStream block = seed_stream(s, kIgnatovSpacing, k).child(p);
            std::vector<double> spacings(reps * kPerReplicate);
            parallel_for(reps, [&](std::size_t i) {
                RngStream rng = block.child(i);
                const auto vals = first_p_record_values(f, rng, p, kPerReplicate);
                double prev = std::isfinite(r0) ? r0 : 0.0;
                for (std::size_t j = 0; j < kPerReplicate; ++j) {
                    const double h = f.cumulative_hazard(vals[j]);
                    spacings[i * kPerReplicate + j] = h - prev;
                    prev = h;
                }
            });
            const auto g = ks_test(spacings, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });
            per.push_back({block.key(), g.statistic, g.p_value});
        }
        out.push_back(aggregate("ignatov_spacings_p" + std::to_string(p), PassRule::median_p_above,
                                s.thresholds.median_p, std::nullopt, reps * kPerReplicate, s.seed,
                                std::move(per)));
    }

    // counts of 1- and 2-records with R-value in (R(x_l), R(x_l) + level]
    std::vector<SeedOutcome> per;
    const double base_h = std::isfinite(r0) ? r0 : 0.0;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kIgnatovCount, k);
        std::vector<double> c1(corr_replicates), c2(corr_replicates);
        parallel_for(corr_replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            std::vector<double> x = f.sample(rng, 256);
            // every 2-record below the level is seen once M^(2) exceeds it
            while (f.cumulative_hazard(kth_largest_prefix(x, 2, x.size())) <= base_h + count_level) {
                const auto more = f.sample(rng, x.size());
                x.insert(x.end(), more.begin(), more.end());
            }
            const auto ranks = relative_ranks(x);
            const auto count = [&](std::size_t p) {
                double n = 0;
                for (double v : p_records(x, ranks, p).values) n += f.cumulative_hazard(v) <= base_h + count_level;
                return n;
            };
            c1[i] = count(1);
            c2[i] = count(2);
        });
        per.push_back({block.key(), std::abs(pearson(c1, c2)), std::nullopt});
    }
    out.push_back(aggregate("ignatov_count_correlation", PassRule::statistic_below,
                            s.thresholds.correlation_max, std::nullopt, corr_replicates, s.seed,
                            std::move(per)));
    return out;
}

std::vector<TestReport> discrete_limit(const DistributionModel& f, double gamma, std::size_t r,
                                       std::size_t j_max, std::size_t replicates,
                                       const RunSettings& s) {
    const auto tm = discrete_tail_model(f, gamma);
    const auto nrm = tm.norming(static_cast<double>(r));
    const auto& lim = tm.limit();
    std::vector<std::vector<SeedOutcome>> per(j_max + 1);
    std::vector<SeedOutcome> order;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kDiscreteLimit, k);
        std::vector<std::vector<double>> rows(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            const auto x = f.sample(rng, r + j_max);
            const auto m = extremal_sequence(x, r);
            for (std::size_t j = 0; j <= j_max; ++j) {
                rows[i].push_back((m.term(r + j).value() + nrm.b) / nrm.a);
            }
        });
        double violations = 0;
        for (const auto& row : rows) violations += !std::is_sorted(row.begin(), row.end());
        order.push_back({block.key(), violations, std::nullopt});
        for (std::size_t j = 0; j <= j_max; ++j) {
            const double shape = static_cast<double>(j + 1);
            const auto g = ks_test(column(rows, j),
                                   [&](double x) { return gamma_cdf(shape, lim.g_extended(x)); });
            per[j].push_back({block.key(), g.statistic, g.p_value});
        }
    }
    std::vector<TestReport> out;
    for (std::size_t j = 0; j <= j_max; ++j) {
        out.push_back(aggregate("discrete_limit_j" + std::to_string(j), PassRule::statistic_below,
                                s.thresholds.ks_max, std::nullopt, replicates, s.seed,
                                std::move(per[j])));
    }
    out.push_back(aggregate("discrete_limit_ordering", PassRule::statistic_at_most, 0.0,
                            std::nullopt, replicates, s.seed, std::move(order)));
    return out;
}

std::vector<TestReport> empirical_prm(const DistributionModel& f, double gamma, std::size_t r,
                                      std::size_t j, std::span<const double> edges,
                                      std::size_t replicates, const RunSettings& s) {
    if (edges.size() < 3 || !std::is_sorted(edges.begin(), edges.end())) {
        throw DomainError("empirical_prm needs at least two cells with increasing edges");
    }
    const auto tm = discrete_tail_model(f, gamma);
    const auto nrm = tm.norming(static_cast<double>(r));
    const std::size_t cells = edges.size() - 1;
    std::vector<std::vector<SeedOutcome>> per(cells);
    std::vector<SeedOutcome> corr;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kEmpiricalPrm, k);
        std::vector<std::vector<std::uint64_t>> counts(replicates, std::vector<std::uint64_t>(cells, 0));
        parallel_for(replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            for (double x : f.sample(rng, r + j)) {
                const double z = (x + nrm.b) / nrm.a;
                const auto it = std::lower_bound(edges.begin(), edges.end(), z);
                // z in (edges[c], edges[c + 1]]
                if (it == edges.begin() || it == edges.end()) continue;
                ++counts[i][static_cast<std::size_t>(it - edges.begin()) - 1];
            }
        });
        for (std::size_t c = 0; c < cells; ++c) {
            std::vector<std::uint64_t> col;
            for (const auto& row : counts) col.push_back(row[c]);
            const auto g = chi_square_poisson(col, tm.limit().mass(edges[c], edges[c + 1]));
            per[c].push_back({block.key(), g.statistic, g.p_value});
        }
        std::vector<double> a, b;
        for (const auto& row : counts) {
            a.push_back(static_cast<double>(row[0]));
            b.push_back(static_cast<double>(row[1]));
        }
        corr.push_back({block.key(), std::abs(pearson(a, b)), std::nullopt});
    }
    std::vector<TestReport> out;
    for (std::size_t c = 0; c < cells; ++c) {
        out.push_back(aggregate("empirical_prm_cell(" + fmt(edges[c]) + "," + fmt(edges[c + 1]) + "]",
                                PassRule::median_p_above, s.thresholds.median_p, std::nullopt,
                                replicates, s.seed, std::move(per[c])));
    }
    out.push_back(aggregate("empirical_prm_cell_correlation", PassRule::statistic_below,
                            s.thresholds.correlation_max, std::nullopt, replicates, s.seed,
                            std::move(corr)));
    return out;
}

std::vector<TestReport> range_counts_discrete(const DistributionModel& f, double gamma,
                                              std::size_t r, std::span<const double> x_list,
                                              double hit_lo, double hit_hi,
                                              std::size_t replicates, const RunSettings& s) {
    if (x_list.empty() || !(hit_lo < hit_hi)) throw DomainError("range_counts_discrete needs x values and hit_lo < hit_hi");
    const auto tm = discrete_tail_model(f, gamma);
    const auto nrm = tm.norming(static_cast<double>(r));
    const auto& lim = tm.limit();
    const double need = std::max(*std::max_element(x_list.begin(), x_list.end()), hit_hi);
    const auto raw = [&](double z) { return nrm.a * z - nrm.b; };
    const double hit_mass = static_cast<double>(r) *
                            (f.cumulative_hazard(raw(hit_hi)) - f.cumulative_hazard(raw(hit_lo)));
    const double hit_p = -std::expm1(-hit_mass);

    std::vector<std::vector<SeedOutcome>> mean_out(x_list.size()), disp_out(x_list.size());
    std::vector<SeedOutcome> hit_out;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kRangeDiscrete, k);
        std::vector<std::vector<double>> counts(replicates);
        std::vector<char> hit(replicates, 0);
        parallel_for(replicates, [&](std::size_t i) {
            RngStream rng = block.child(i);
            std::vector<double> x = f.sample(rng, r + 64);
            RangeSet rs = range_of_Mr(x, r);
            // values up to the horizon are complete; extend until it passes `need`
            while ((rs.horizon.value() + nrm.b) / nrm.a <= need) {
                const auto more = f.sample(rng, x.size());
                x.insert(x.end(), more.begin(), more.end());
                rs = range_of_Mr(x, r);
            }
            for (double xv : x_list) {
                counts[i].push_back(static_cast<double>(
                    std::count_if(rs.values.begin(), rs.values.end(),
                                  [&](double v) { return (v + nrm.b) / nrm.a <= xv; })));
            }
            hit[i] = rs.count_in(raw(hit_lo), raw(hit_hi)) > 0;
        });
        for (std::size_t a = 0; a < x_list.size(); ++a) {
            const auto col = column(counts, a);
            const double lam = lim.g_extended(x_list[a]);
            const double z = (mean(col) - lam) / std::sqrt(lam / static_cast<double>(replicates));
            mean_out[a].push_back({block.key(), std::abs(z), std::nullopt});
            disp_out[a].push_back({block.key(), dispersion_index(col), std::nullopt});
        }
        const auto hits = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
        hit_out.push_back({block.key(), std::abs(binomial_z(hits, replicates, hit_p)), std::nullopt});
    }
    std::vector<TestReport> out;
    const auto& th = s.thresholds;
    for (std::size_t a = 0; a < x_list.size(); ++a) {
        const std::string tag = "_x" + fmt(x_list[a]);
        out.push_back(aggregate("range_discrete_mean" + tag, PassRule::statistic_at_most,
                                th.sigma_band, std::nullopt, replicates, s.seed,
                                std::move(mean_out[a])));
        out.push_back(aggregate("range_discrete_dispersion" + tag, PassRule::statistic_within,
                                th.dispersion_lo, th.dispersion_hi, replicates, s.seed,
                                std::move(disp_out[a])));
    }
    out.push_back(aggregate("range_discrete_hitting", PassRule::statistic_at_most, th.sigma_band,
                            std::nullopt, replicates, s.seed, std::move(hit_out)));
    return out;
}

std::vector<TestReport> field_law(const IntensityModel& q, double window, double level,
                                  std::size_t replicates, const RunSettings& s) {
    const double lam = window * q.q(level);
    std::vector<SeedOutcome> mean_out, disp_out, tail_out;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kFieldLaw, k);
        std::vector<double> counts(replicates);
        std::vector<std::vector<double>> tails(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            const auto field = simulate_field(q, window, level, block.child(i));
            counts[i] = static_cast<double>(field.size());
            // Q(j)/Q(level) is uniform on (0, 1); keep the first mark only so
            // that the pooled sample is iid
            if (field.size() > 0) tails[i].push_back(q.q(field.points()[0].j) / q.q(level));
        });
        std::vector<double> pooled;
        for (const auto& t : tails) pooled.insert(pooled.end(), t.begin(), t.end());
        const double z = (mean(counts) - lam) / std::sqrt(lam / static_cast<double>(replicates));
        mean_out.push_back({block.key(), std::abs(z), std::nullopt});
        disp_out.push_back({block.key(), dispersion_index(counts), std::nullopt});
        const auto g = ks_test(pooled, [](double u) { return std::clamp(u, 0.0, 1.0); });
        tail_out.push_back({block.key(), g.statistic, g.p_value});
    }
    const auto& th = s.thresholds;
    return {aggregate("field_count_mean", PassRule::statistic_at_most, th.sigma_band, std::nullopt,
                      replicates, s.seed, std::move(mean_out)),
            aggregate("field_count_dispersion", PassRule::statistic_within, th.dispersion_lo,
                      th.dispersion_hi, replicates, s.seed, std::move(disp_out)),
            aggregate("field_mark_tail", PassRule::median_p_above, th.median_p, std::nullopt,
                      replicates, s.seed, std::move(tail_out))};
}

std::vector<TestReport> continuous_equivalence(const IntensityModel& q, std::size_t probes,
                                               std::size_t r_max, const RunSettings& s) {
    if (probes < 1 || r_max < 1) throw DomainError("continuous_equivalence needs probes and r_max >= 1");
    constexpr std::size_t kPerField = 10;
    const std::size_t fields = (probes + kPerField - 1) / kPerField;
    const RngStream base = seed_stream(s, kEquivalence, 0);
    std::vector<std::size_t> bad(fields, 0), done(fields, 0);
    parallel_for(fields, [&](std::size_t c) {
        RngStream rng = base.child(c).child(0);
        const auto r = static_cast<std::size_t>(rng.integer(1, r_max));
        auto field = simulate_for_order(q, r, 1.0, 0.1, base.child(c).child(1));
        const std::size_t here = std::min(kPerField, probes - c * kPerField);
        for (std::size_t p = 0; p < here; ++p) {
            const double t = rng.uniform(0.05, 1.0);
            const std::vector<double> grid{t};
            const double y = yr_path_extending(field, r, grid).values[0];
            double x = y;
            const double mode = rng.uniform();
            if (mode < 1.0 / 3.0) {
                const auto pts = field.points();
                x = pts[rng.integer(0, pts.size() - 1)].j;
            } else if (mode < 2.0 / 3.0) {
                x = q.q_inverse(q.q(y) * std::exp(0.5 * rng.normal()));
            }
            x = std::max(x, field.level());
            const bool lhs = y <= x;
            const bool rhs = count_above(field, t, x) < r;
            bad[c] += lhs != rhs;
            ++done[c];
        }
    });
    double total = 0, n = 0;
    for (std::size_t c = 0; c < fields; ++c) {
        total += static_cast<double>(bad[c]);
        n += static_cast<double>(done[c]);
    }
    return {exact_report("continuous_equivalence", total, static_cast<std::size_t>(n), s, base.key())};
}

std::vector<TestReport> da_check(const IntensityModel& q, double gamma, const RunSettings& s) {
    const auto tm = continuous_tail_model(q, gamma);
    std::vector<double> grid;
    for (double x = -3.0; x <= 3.0 + 1e-12; x += 0.25) {
        if (tm.limit().domain().contains(x)) grid.push_back(x);
    }
    const std::vector<double> r_list{1e2, 1e4, 1e6, 1e8};
    const auto chk = verify_da(q, tm, grid, r_list);
    const double stat = chk.nonincreasing() ? chk.final_error()
                                            : std::numeric_limits<double>::infinity();
    return {aggregate("da_check_" + q.name(), PassRule::statistic_below, s.thresholds.da_max,
                      std::nullopt, grid.size(), s.seed, {{s.seed, stat, std::nullopt}})};
}

namespace {

// Y^(r) at the grid times of one fresh field, with the level chosen for t_min
std::vector<double> y_on_grid(const IntensityModel& q, std::size_t r, std::span<const double> t,
                              const RngStream& rng) {
    auto field = simulate_for_order(q, r, t.back(), t.front(), rng);
    return yr_path_extending(field, r, t).values;
}

} // namespace

std::vector<TestReport> onedim_Y(const IntensityModel& q, double gamma, std::size_t r, double t,
                                 std::size_t replicates, const RunSettings& s) {
    if (!(t > 0.0)) throw DomainError("onedim_Y needs t > 0");
    const auto tm = continuous_tail_model(q, gamma);
    const auto nrm = tm.norming(static_cast<double>(r) / t);
    const double rt = std::sqrt(t);
    std::vector<SeedOutcome> per;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kOnedim, k);
        std::vector<double> z(replicates);
        const std::vector<double> grid{t};
        parallel_for(replicates, [&](std::size_t i) {
            z[i] = (y_on_grid(q, r, grid, block.child(i))[0] - nrm.b) / nrm.a;
        });
        const auto g = ks_test(z, [&](double x) { return normal_cdf(rt * tm.limit().h_extended(x)); });
        per.push_back({block.key(), g.statistic, g.p_value});
    }
    return {aggregate("onedim_Y", PassRule::statistic_below, s.thresholds.ks_max, std::nullopt,
                      replicates, s.seed, std::move(per))};
}

std::vector<TestReport> poisson_clt(double lambda, std::size_t samples, const RunSettings& s) {
    if (!(lambda > 0.0)) throw DomainError("poisson_clt needs lambda > 0");
    std::vector<SeedOutcome> per;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kPoissonClt, k);
        std::vector<double> z(samples);
        parallel_for(samples, [&](std::size_t i) {
            RngStream rng = block.child(i);
            z[i] = (static_cast<double>(rng.poisson(lambda)) - lambda) / std::sqrt(lambda);
        });
        const auto g = ks_test(z, normal_cdf);
        per.push_back({block.key(), g.statistic, g.p_value});
    }
    return {aggregate("poisson_clt", PassRule::statistic_below, s.thresholds.poisson_clt_max,
                      std::nullopt, samples, s.seed, std::move(per))};
}

std::vector<TestReport> fidi_Y(const IntensityModel& q, double gamma, std::size_t r, double t1,
                               double t2, std::span<const double> x_grid,
                               std::size_t replicates, std::size_t oracle_draws,
                               const RunSettings& s) {
    if (!(t1 > 0.0 && t1 < t2)) throw DomainError("fidi_Y needs 0 < t1 < t2");
    if (x_grid.empty()) throw DomainError("fidi_Y needs a nonempty x grid");
    const auto tm = continuous_tail_model(q, gamma);
    const auto& lim = tm.limit();
    for (double x : x_grid) {
        if (!lim.domain().contains(x)) throw DomainError("fidi grid point " + fmt(x) + " outside supp");
    }
    const auto n1 = tm.norming(static_cast<double>(r) / t1);
    const auto n2 = tm.norming(static_cast<double>(r) / t2);
    const std::size_t g = x_grid.size();
    const double rho_count = t1 / t2;

    std::vector<SeedOutcome> carving, count_cov, oracle_corr;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kFidi, k);
        const std::vector<double> times{t1, t2};
        std::vector<std::vector<double>> z(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            const auto y = y_on_grid(q, r, times, block.child(i));
            z[i] = {(y[0] - n1.b) / n1.a, (y[1] - n2.b) / n2.a};
        });
        std::vector<double> emp(g * g, 0.0);
        for (const auto& p : z) {
            for (std::size_t a = 0; a < g; ++a) {
                for (std::size_t b = 0; b < g; ++b) {
                    emp[a * g + b] += (p[0] <= x_grid[a] && p[1] <= x_grid[b]) ? 1.0 : 0.0;
                }
            }
        }
        for (auto& v : emp) v /= static_cast<double>(replicates);

        // oracle draws in fixed-size chunks so the reduction is schedule-free
        constexpr std::size_t kChunk = 4096;
        const std::size_t chunks = (oracle_draws + kChunk - 1) / kChunk;
        const RngStream oblock = seed_stream(s, kFidiOracle, k);
        std::vector<std::vector<double>> carve_hits(chunks, std::vector<double>(g * g, 0.0));
        std::vector<std::vector<double>> cov_hits(chunks, std::vector<double>(g * g, 0.0));
        std::vector<std::vector<std::array<double, 2>>> ratio(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            RngStream rng = oblock.child(c);
            const std::size_t here = std::min(kChunk, oracle_draws - c * kChunk);
            for (std::size_t d = 0; d < here; ++d) {
                const double z1 = rng.normal(), z2 = rng.normal();
                const double b1 = std::sqrt(t1) * z1;
                const double b2 = b1 + std::sqrt(t2 - t1) * z2;
                const double w1 = z1;
                const double w2 = rho_count * z1 + std::sqrt(1.0 - rho_count * rho_count) * z2;
                ratio[c].push_back({b1 / t1, b2 / t2});
                for (std::size_t a = 0; a < g; ++a) {
                    const double h1 = lim.h(x_grid[a]);
                    for (std::size_t b = 0; b < g; ++b) {
                        const double h2 = lim.h(x_grid[b]);
                        carve_hits[c][a * g + b] += (b1 <= t1 * h1 && b2 <= t2 * h2) ? 1.0 : 0.0;
                        cov_hits[c][a * g + b] +=
                            (w1 <= std::sqrt(t1) * h1 && w2 <= std::sqrt(t2) * h2) ? 1.0 : 0.0;
                    }
                }
            }
        });
        double d_carve = 0.0, d_cov = 0.0;
        for (std::size_t cell = 0; cell < g * g; ++cell) {
            double hc = 0.0, hv = 0.0;
            for (std::size_t c = 0; c < chunks; ++c) {
                hc += carve_hits[c][cell];
                hv += cov_hits[c][cell];
            }
            d_carve = std::max(d_carve, std::abs(emp[cell] - hc / static_cast<double>(oracle_draws)));
            d_cov = std::max(d_cov, std::abs(emp[cell] - hv / static_cast<double>(oracle_draws)));
        }
        std::vector<double> u, v;
        for (const auto& part : ratio) {
            for (const auto& p : part) {
                u.push_back(p[0]);
                v.push_back(p[1]);
            }
        }
        carving.push_back({block.key(), d_carve, std::nullopt});
        count_cov.push_back({block.key(), d_cov, std::nullopt});
        oracle_corr.push_back({oblock.key(), std::abs(pearson(u, v) - std::sqrt(t1 / t2)), std::nullopt});
    }
    const auto& th = s.thresholds;
    return {aggregate("fidi_Y", PassRule::statistic_below, th.fidi_max, std::nullopt, replicates,
                      s.seed, std::move(carving)),
            aggregate("fidi_Y_count_covariance_oracle", PassRule::statistic_below, th.fidi_max,
                      std::nullopt, replicates, s.seed, std::move(count_cov)),
            aggregate("fidi_oracle_correlation", PassRule::statistic_below,
                      th.oracle_correlation_tol, std::nullopt, oracle_draws, s.seed,
                      std::move(oracle_corr))};
}

std::vector<TestReport> range_continuous(const IntensityModel& q, std::size_t r, double anchor,
                                         double c, std::size_t replicates,
                                         const RunSettings& s) {
    if (!(c > 0.0)) throw DomainError("range_continuous needs c > 0");
    const double lo = anchor - c, hi = anchor + c;
    if (!q.in_domain(lo) || !q.in_domain(hi)) {
        throw DomainError("cells (" + fmt(lo) + ", " + fmt(hi) + "] leave the domain of " + q.name());
    }
    const double mu_minus = static_cast<double>(r) * s_minus(q, c, anchor);
    const double mu_plus = static_cast<double>(r) * s_plus(q, c, anchor);
    const double rr = static_cast<double>(r);
    const double window = (rr + 10.0 * std::sqrt(rr) + 50.0) / q.q(hi);

    std::vector<SeedOutcome> corr, dp, dm, mp, mm;
    for (std::size_t k = 0; k < s.seeds; ++k) {
        const RngStream block = seed_stream(s, kRangeContinuous, k);
        std::vector<double> plus(replicates), minus(replicates);
        parallel_for(replicates, [&](std::size_t i) {
            // records above the level are exact, and those up to Y^(r)(T) complete
            auto field = simulate_field(q, window, lo, block.child(i));
            RangeSet rs = range_of_yr(field, r);
            while (field.size() < r || !(rs.horizon.value() > hi)) {
                field.extend_window(2.0 * field.window());
                rs = range_of_yr(field, r);
            }
            minus[i] = static_cast<double>(rs.count_in(lo, anchor));
            plus[i] = static_cast<double>(rs.count_in(anchor, hi));
        });
        const auto z = [&](const std::vector<double>& x, double mu) {
            return std::abs((mean(x) - mu) / std::sqrt(mu / static_cast<double>(replicates)));
        };
        corr.push_back({block.key(), std::abs(pearson(plus, minus)), std::nullopt});
        dp.push_back({block.key(), dispersion_index(plus), std::nullopt});
        dm.push_back({block.key(), dispersion_index(minus), std::nullopt});
        mp.push_back({block.key(), z(plus, mu_plus), std::nullopt});
        mm.push_back({block.key(), z(minus, mu_minus), std::nullopt});
    }
    const auto& th = s.thresholds;
    return {aggregate("range_split_correlation", PassRule::statistic_below, th.correlation_max,
                      std::nullopt, replicates, s.seed, std::move(corr)),
            aggregate("range_split_dispersion_plus", PassRule::statistic_within, th.dispersion_lo,
                      th.dispersion_hi, replicates, s.seed, std::move(dp)),
            aggregate("range_split_dispersion_minus", PassRule::statistic_within, th.dispersion_lo,
                      th.dispersion_hi, replicates, s.seed, std::move(dm)),
            aggregate("range_split_mean_plus", PassRule::statistic_at_most, th.sigma_band,
                      std::nullopt, replicates, s.seed, std::move(mp)),
            aggregate("range_split_mean_minus", PassRule::statistic_at_most, th.sigma_band,
                      std::nullopt, replicates, s.seed, std::move(mm))};
}

} // namespace extremal
