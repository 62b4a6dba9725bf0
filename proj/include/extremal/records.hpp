#pragma once

// Relative ranks at birth, p-record times and values, jump offsets of the
// order-r extremal sequence, and the range of that sequence.

#include "extremal/augmented.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace extremal {

/// R_n = #{j <= n : X_j >= X_n}; 1 <= R_n <= n.
class RankSequence {
public:
    RankSequence() = default;
    explicit RankSequence(std::vector<std::size_t> ranks);

    std::size_t size() const noexcept { return ranks_.size(); }
    std::size_t operator[](std::size_t i) const { return ranks_[i]; }
    /// 1-based R_n.
    std::size_t rank(std::size_t n) const;
    std::span<const std::size_t> values() const noexcept { return ranks_; }

private:
    std::vector<std::size_t> ranks_;
};

/// O(n log n) via a Fenwick tree over the value order. Among tied values
/// the first occurrence gets the smaller rank.
RankSequence relative_ranks(std::span<const double> sample);

/// 1-based indices j with R_j = p, increasing.
std::vector<std::size_t> record_times(const RankSequence& ranks, std::size_t p);

struct RecordProcess {
    std::size_t order = 1;
    std::vector<std::size_t> times; // 1-based
    std::vector<double> values;
};

RecordProcess p_records(std::span<const double> sample, const RankSequence& ranks, std::size_t p);
RecordProcess p_records(std::span<const double> sample, std::size_t p);

/// Range of M^(r) on a finite sample: the union of p-record values for
/// p = 1..r, sorted ascending.
///
/// On a prefix a record value v is guaranteed to lie on the path of M^(r)
/// only once r - p later points exceed it, so `horizon` = M^(r)_n records
/// the cut: values <= horizon form the complete part of the range.
struct RangeSet {
    std::vector<double> values;
    AugmentedValue horizon;

    std::vector<double> complete_values() const;
    /// Number of values in (lo, hi].
    std::size_t count_in(double lo, double hi) const;
};

/// Computes the record union with a min-heap of the current top r. Debug
/// builds also check it against the distinct path values up to the horizon
/// when the sample has no ties.
RangeSet range_of_Mr(std::span<const double> sample, std::size_t r);

/// Distinct finite values of a sequence, ascending.
std::vector<double> path_range(const AugmentedSequence& path);

/// {0} together with the offsets j >= 1 where M^(r)_{r+j} > M^(r)_{r+j-1}.
/// Throws DomainError if the sample is shorter than r.
std::vector<std::size_t> jump_indices(std::span<const double> sample, std::size_t r);

} // namespace extremal
