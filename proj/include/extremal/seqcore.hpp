#pragma once

// Deterministic algebra of augmented sequences: order statistics of growing
// samples, partial maxima, the shifted componentwise minimum, and the
// order-raising recursion x^(r+1) = cummax(shifted_min(x^(r), x)).
//
// Everything here is comparison-only, so results are bitwise reproducible.

#include "extremal/augmented.hpp"

#include <cstddef>
#include <span>

namespace extremal {

/// rth largest of sample[0..n), duplicates counted with multiplicity.
/// Throws DomainError unless 1 <= r <= n <= sample.size().
double kth_largest_prefix(std::span<const double> sample, std::size_t r, std::size_t n);

/// Extremal sequence of order r: r-1 bottoms followed by m_n^(r), n >= r.
/// The input must be all-finite with at least r entries.
AugmentedSequence extremal_sequence(const AugmentedSequence& x, std::size_t r);
AugmentedSequence extremal_sequence(std::span<const double> x, std::size_t r);

/// Partial maxima; the result carries the monotone flag.
AugmentedSequence cummax(const AugmentedSequence& x);

/// (bottom, x_1 ∧ y_2, x_2 ∧ y_3, ...). Lengths must agree.
AugmentedSequence shifted_min(const AugmentedSequence& x, const AugmentedSequence& y);

/// One step of the order recursion. `x_r` must be extremal_sequence(x, r);
/// that relation is the caller's contract and is not checked.
AugmentedSequence recursion_step(const AugmentedSequence& x_r, const AugmentedSequence& x);

} // namespace extremal
