#pragma once

#include "extremal/rng.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace extremal {

enum class Family { uniform, exponential, pareto_left, gumbel_min, empirical, user };

std::string_view to_string(Family f);

/// A univariate law F with its cdf, left-continuous quantile and cumulative
/// hazard R(x) = -log(1 - F(x)).
///
/// Built-in parametric families use closed forms. `from_cdf` wraps a
/// user-supplied cdf and inverts it by bisection (relative tolerance 1e-12,
/// at most 200 iterations). Cheap to copy: the parameters are shared.
class DistributionModel {
public:
    static DistributionModel uniform(double lo = 0.0, double hi = 1.0);
    static DistributionModel exponential(double rate = 1.0);
    /// F(x) = (-x)^(-alpha) on (-inf, -1]; heavy left tail (Fréchet minima, gamma = 1/alpha).
    static DistributionModel pareto_left(double alpha);
    /// F(x) = 1 - exp(-e^x); R(x) = e^x.
    static DistributionModel gumbel_min();
    /// Step cdf of the data; quantile is the step-function left inverse.
    static DistributionModel empirical(std::vector<double> data);
    /// `lo`/`hi` bracket the support and may be infinite.
    static DistributionModel from_cdf(std::string name, std::function<double(double)> cdf,
                                      double lo, double hi);

    double cdf(double x) const;
    /// Left-continuous inverse: quantile(u) <= x  iff  u <= cdf(x). u in (0, 1).
    double quantile(double u) const;
    double cumulative_hazard(double x) const;

    /// Left-continuous inverse of x -> F(x)/F(m) restricted to x <= m.
    /// Requires F(m) > 0; the conventions for F(m) = 0 live in markov.
    double conditional_quantile(double u, double m) const;

    double left_endpoint() const;
    double right_endpoint() const;
    bool is_continuous() const;

    Family family() const;
    const std::string& name() const;
    /// Family parameters: {lo, hi}, {rate}, {alpha}; empty otherwise.
    std::vector<double> parameters() const;

    double sample(RngStream& rng) const { return quantile(rng.uniform()); }
    std::vector<double> sample(RngStream& rng, std::size_t n) const;

    class Impl;

private:
    explicit DistributionModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Smallest x in [lo, hi] with f(x) >= target for nondecreasing f; infinite
/// bounds are expanded geometrically. Throws NumericError with the bracket
/// when no bracket exists.
double bisect_left_inverse(const std::function<double(double)>& f, double target, double lo,
                           double hi);

} // namespace extremal
