#pragma once

// The explicit Markov kernel taking the order-r extremal process to order
// r+1: conditional quantiles, the truncation maps on descending r-tuples,
// and the auxiliary sequences X-hat and X-tilde.

#include "extremal/augmented.hpp"
#include "extremal/distribution.hpp"
#include "extremal/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace extremal {

/// F^<-(u | m). With F(m) > 0 this is the left inverse of F(.)/F(m) on
/// x <= m; with F(m) = 0 it is 1[m > 0]; with m = bottom it is 0.
/// Throws DomainError unless u in (0, 1).
double conditional_quantile(const DistributionModel& f, double u, const AugmentedValue& m);

/// m_1 >= m_2 >= ... >= m_r over the extended reals.
class DescendingTuple {
public:
    /// Throws DomainError if the entries are not nonincreasing or empty.
    explicit DescendingTuple(std::vector<AugmentedValue> entries);

    /// (bottom, ..., bottom) of length r.
    static DescendingTuple bottoms(std::size_t r);

    std::size_t size() const noexcept { return m_.size(); }
    const AugmentedValue& operator[](std::size_t i) const { return m_[i]; }
    /// 1-based component m_k.
    const AugmentedValue& component(std::size_t k) const;
    const AugmentedValue& last() const noexcept { return m_.back(); }
    std::span<const AugmentedValue> entries() const noexcept { return m_; }

    friend bool operator==(const DescendingTuple&, const DescendingTuple&) = default;

private:
    DescendingTuple(std::vector<AugmentedValue> entries, bool /*trusted*/)
        : m_(std::move(entries)) {}
    std::vector<AugmentedValue> m_;

    friend DescendingTuple truncation_map(const DescendingTuple& m, const AugmentedValue& x);
};

/// Top r of the multiset {m_1, ..., m_r, x}, computed coordinatewise:
/// mu_k = m_k if x <= m_k, x if m_k < x <= m_{k-1}, m_{k-1} if x > m_{k-1}
/// (with m_0 = +inf).
DescendingTuple truncation_map(const DescendingTuple& m, const AugmentedValue& x);

/// F^<-(u | m_r) when x <= m_r, otherwise x.
AugmentedValue mu_hat_zero(const DistributionModel& f, const DescendingTuple& m,
                           const AugmentedValue& x, double u);

/// X-hat: first entry X_1; entry n >= 2 is mu_hat_zero of the top-r tuple of
/// X_1..X_{n-1}, X_n and u[n-1]. `u` needs at least x.size() entries.
AugmentedSequence build_hat_sequence(const DistributionModel& f, std::span<const double> x,
                                     std::span<const double> u, std::size_t r);

/// X-tilde: bottom for n <= r; for n > r the previous value of `x_r` when it
/// jumps at n, and F^<-(u[n-1] | X^(r)_n) when it stays flat.
/// `x_r` must start with exactly r-1 bottoms and be nondecreasing.
AugmentedSequence build_tilde_sequence(const DistributionModel& f, const AugmentedSequence& x_r,
                                       std::span<const double> u, std::size_t r);

/// One kernel transition: cummax of the tilde sequence. Given X^(r), the
/// result has the conditional law of X^(r+1).
AugmentedSequence kernel_step(const DistributionModel& f, const AugmentedSequence& x_r,
                              std::span<const double> u, std::size_t r);

/// The independent uniform array U_{r,n}. Row r is drawn from child stream r
/// of the base stream, so rows never depend on which other rows were used.
class UniformArray {
public:
    UniformArray(const RngStream& base, std::size_t n_max) : base_(base), n_max_(n_max) {}

    /// U_{r,1..n_max}, stored 0-based.
    std::vector<double> row(std::size_t r) const;
    std::size_t length() const noexcept { return n_max_; }

private:
    RngStream base_;
    std::size_t n_max_;
};

} // namespace extremal
