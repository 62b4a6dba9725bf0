#pragma once

// Goodness-of-fit primitives and summary statistics for the Monte-Carlo
// harness. All functions are pure.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace extremal {

struct GofResult {
    double statistic;
    double p_value;
};

/// Q_KS(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_survival(double lambda);

/// One-sample KS: D = sup |F_n - cdf|, p from the Kolmogorov series with
/// Stephens' finite-n correction. Throws DomainError on an empty sample.
GofResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS with effective size n m / (n + m).
GofResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// P[chi2_dof > stat].
double chi_square_survival(double stat, double dof);

/// Pearson chi-square of observed counts against expected counts
/// (same length, all expected > 0); dof = bins - 1 - fitted.
GofResult chi_square(std::span<const double> observed, std::span<const double> expected,
                     std::size_t fitted = 0);

/// Chi-square of category counts against the uniform law on the categories.
GofResult chi_square_uniform(std::span<const std::uint64_t> counts);

/// Chi-square of integer data against Poisson(mean); upper bins are merged
/// until every expected count is at least 5.
GofResult chi_square_poisson(std::span<const std::uint64_t> data, double mean);

/// P[Gamma(shape, 1) <= x]; 0 for x <= 0.
double gamma_cdf(double shape, double x);
/// Standard normal cdf and its inverse on (0, 1).
double normal_cdf(double x);
double normal_quantile(double p);
double poisson_pmf(std::uint64_t k, double mean);

double mean(std::span<const double> x);
/// Unbiased sample variance; needs at least two entries.
double variance(std::span<const double> x);
/// Variance / mean.
double dispersion_index(std::span<const double> x);
/// Sample correlation; 0 when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> x);

/// (k - n p) / sqrt(n p (1 - p)); 0 for a degenerate p with k = n p and
/// infinite otherwise.
double binomial_z(std::uint64_t k, std::uint64_t n, double p);

template <class T>
std::vector<double> as_doubles(std::span<const T> v) {
    return std::vector<double>(v.begin(), v.end());
}

} // namespace extremal
