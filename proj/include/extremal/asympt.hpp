#pragma once

// Monte-Carlo convergence harness. Each experiment runs over
// RunSettings::seeds independent seed streams and returns aggregated
// TestReports; results depend only on the arguments and the seed.

#include "extremal/distribution.hpp"
#include "extremal/intensity.hpp"
#include "extremal/report.hpp"
#include "extremal/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace extremal {

/// Calibration constants; every pass/fail decision reads from here.
struct Thresholds {
    double median_p = 0.01;
    double ks_max = 0.03;
    double dispersion_lo = 0.9;
    double dispersion_hi = 1.1;
    double correlation_max = 0.05;
    double sigma_band = 3.0;
    double fidi_max = 0.03;
    double oracle_correlation_tol = 0.02;
    double poisson_clt_max = 0.02;
    double da_max = 0.01;
};

struct RunSettings {
    std::uint64_t seed = 7;
    std::size_t seeds = 5;
    Thresholds thresholds;
};

/// Stream for seed block k of an experiment; replicate i uses .child(i).
RngStream seed_stream(const RunSettings& s, std::uint64_t experiment, std::size_t k);

/// Recursion x^(r+1) = cummax(shifted_min(x^(r), x)) against the sort oracle
/// for all r <= n on random cases (half of them with ties).
std::vector<TestReport> recursion_oracle(std::size_t n_max, std::size_t cases,
                                         const RunSettings& s);

/// truncation_map against insert-and-sort, and mu_k(m, x) >= m_k.
std::vector<TestReport> truncation_oracle(std::size_t pairs, std::size_t r_max,
                                          const RunSettings& s);

/// shifted_min(X^(r), X-hat) equals X-tilde pathwise for equal uniforms.
std::vector<TestReport> tilde_identity(const DistributionModel& f, std::size_t n,
                                       std::size_t r_max, std::size_t cases,
                                       const RunSettings& s);

/// Two-sample KS between kernel_step output at coordinate n and directly
/// sorted X^(r+1)_n.
std::vector<TestReport> markov_kernel_identity(const DistributionModel& f, std::size_t r,
                                               std::size_t n, std::size_t replicates,
                                               const RunSettings& s);

/// Chi-square of R_n against uniform{1..n} for each n.
std::vector<TestReport> rank_law(const DistributionModel& f, std::span<const std::size_t> n_list,
                                 std::size_t replicates, const RunSettings& s);

/// Largest |binomial z| of the jump frequency at k against r/k, k = r..k_max.
std::vector<TestReport> jump_frequency(const DistributionModel& f, std::size_t r,
                                       std::size_t k_max, std::size_t replicates,
                                       const RunSettings& s);

/// Spacings of R(p-record values) against Exp(1) for each p (at least
/// `min_spacings` per seed), and the correlation of 1-record and 2-record
/// counts with R-values in (0, count_level].
std::vector<TestReport> ignatov(const DistributionModel& f, std::span<const std::size_t> p_list,
                                std::size_t min_spacings, std::size_t corr_replicates,
                                double count_level, const RunSettings& s);

/// KS of (M^(r)_{r+j} + b_r)/a_r against P[Gamma(j+1) <= g(x)] for j = 0..j_max,
/// and the ordering of the coordinates.
std::vector<TestReport> discrete_limit(const DistributionModel& f, double gamma, std::size_t r,
                                       std::size_t j_max, std::size_t replicates,
                                       const RunSettings& s);

/// Counts of normalized points (X_i + b_r)/a_r, i <= r + j, in the cells of
/// `edges` against Poisson(m(cell)), plus the correlation of the first two cells.
std::vector<TestReport> empirical_prm(const DistributionModel& f, double gamma, std::size_t r,
                                      std::size_t j, std::span<const double> edges,
                                      std::size_t replicates, const RunSettings& s);

/// Normalized range points at or below x: mean against g(x) and dispersion
/// for each x, plus P[range hits G] = 1 - exp(-r R(G)) for the normalized
/// cell G = (hit_lo, hit_hi).
std::vector<TestReport> range_counts_discrete(const DistributionModel& f, double gamma,
                                              std::size_t r, std::span<const double> x_list,
                                              double hit_lo, double hit_hi,
                                              std::size_t replicates, const RunSettings& s);

/// Count law and mark tail of simulated fields.
std::vector<TestReport> field_law(const IntensityModel& q, double window, double level,
                                  std::size_t replicates, const RunSettings& s);

/// [Y^(r)(t) <= x] iff [N([0,t] x (x, x_r)) < r] on `probes` random triples.
std::vector<TestReport> continuous_equivalence(const IntensityModel& q, std::size_t probes,
                                               std::size_t r_max, const RunSettings& s);

/// Grid check of the left-tail condition for the norming used by onedim_Y.
std::vector<TestReport> da_check(const IntensityModel& q, double gamma, const RunSettings& s);

/// KS of (Y^(r)(t) - b(r/t))/a(r/t) against Phi(sqrt(t) h(x)).
std::vector<TestReport> onedim_Y(const IntensityModel& q, double gamma, std::size_t r, double t,
                                 std::size_t replicates, const RunSettings& s);

/// KS of (N - lambda)/sqrt(lambda) against Phi for N ~ Poisson(lambda).
std::vector<TestReport> poisson_clt(double lambda, std::size_t samples, const RunSettings& s);

/// Joint cdf of the normalized pair (Y^(r)(t1), Y^(r)(t2)) on x_grid^2 against
/// the Brownian carving oracle (B(t1), B(t1) + B(t2) - B(t1)) with the events
/// B(t_i) <= t_i h(x_i). Also reports the same distance to a bivariate
/// normal with the count correlation t1/t2, and the carving oracle's own
/// correlation of B(t1)/t1 and B(t2)/t2 against sqrt(t1/t2).
std::vector<TestReport> fidi_Y(const IntensityModel& q, double gamma, std::size_t r, double t1,
                               double t2, std::span<const double> x_grid,
                               std::size_t replicates, std::size_t oracle_draws,
                               const RunSettings& s);

/// Range points of Y^(r) split at `anchor` into the cells (anchor - c, anchor]
/// and (anchor, anchor + c]: means r S(cell), dispersion, and the correlation
/// of the two counts.
std::vector<TestReport> range_continuous(const IntensityModel& q, std::size_t r, double anchor,
                                         double c, std::size_t replicates,
                                         const RunSettings& s);

/// First m p-record values of an iid F sequence drawn from `rng`, extending
/// the sequence until they exist.
std::vector<double> first_p_record_values(const DistributionModel& f, RngStream& rng,
                                          std::size_t p, std::size_t m);

} // namespace extremal
