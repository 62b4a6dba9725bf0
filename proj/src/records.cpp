#include "extremal/records.hpp"

#include "extremal/errors.hpp"
#include "extremal/seqcore.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <queue>
#include <string>

namespace extremal {

RankSequence::RankSequence(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {
    for (std::size_t i = 0; i < ranks_.size(); ++i) {
        if (ranks_[i] < 1 || ranks_[i] > i + 1) {
            throw DomainError("rank " + std::to_string(ranks_[i]) + " at index " +
                              std::to_string(i + 1) + " outside 1.." + std::to_string(i + 1));
        }
    }
}

std::size_t RankSequence::rank(std::size_t n) const {
    if (n == 0 || n > ranks_.size()) {
        throw DomainError("rank index " + std::to_string(n) + " outside 1.." +
                          std::to_string(ranks_.size()));
    }
    return ranks_[n - 1];
}

namespace {

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t i) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
    }
    // number of inserted positions < i
    std::size_t prefix(std::size_t i) const {
        std::size_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

private:
    std::vector<std::size_t> tree_;
};

} // namespace

RankSequence relative_ranks(std::span<const double> sample) {
    std::vector<double> order(sample.begin(), sample.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    Fenwick seen(order.size());
    std::vector<std::size_t> ranks(sample.size());
    for (std::size_t n = 0; n < sample.size(); ++n) {
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(order.begin(), order.end(), sample[n]) - order.begin());
        // earlier points >= X_n, plus X_n itself
        ranks[n] = n - seen.prefix(pos) + 1;
        seen.add(pos);
    }
    return RankSequence(std::move(ranks));
}

std::vector<std::size_t> record_times(const RankSequence& ranks, std::size_t p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] == p) out.push_back(i + 1);
    }
    return out;
}

RecordProcess p_records(std::span<const double> sample, const RankSequence& ranks, std::size_t p) {
    if (ranks.size() != sample.size()) throw DomainError("ranks and sample lengths differ");
    RecordProcess rec;
    rec.order = p;
    rec.times = record_times(ranks, p);
    rec.values.reserve(rec.times.size());
    for (std::size_t t : rec.times) rec.values.push_back(sample[t - 1]);
    return rec;
}

RecordProcess p_records(std::span<const double> sample, std::size_t p) {
    return p_records(sample, relative_ranks(sample), p);
}

std::vector<double> RangeSet::complete_values() const {
    if (horizon.is_bottom()) return {};
    const auto end = std::upper_bound(values.begin(), values.end(), horizon.value());
    return {values.begin(), end};
}

std::size_t RangeSet::count_in(double lo, double hi) const {
    if (!(lo < hi)) return 0;
    const auto a = std::upper_bound(values.begin(), values.end(), lo);
    const auto b = std::upper_bound(values.begin(), values.end(), hi);
    return static_cast<std::size_t>(b - a);
}

std::vector<double> path_range(const AugmentedSequence& path) {
    std::vector<double> out = path.finite_values();
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RangeSet range_of_Mr(std::span<const double> sample, std::size_t r) {
    if (r < 1) throw DomainError("range_of_Mr needs r >= 1");
    std::priority_queue<double, std::vector<double>, std::greater<>> top;
    RangeSet out;
    for (double v : sample) {
        // rank at birth <= r exactly when v enters the top r
        if (top.size() < r) {
            top.push(v);
            out.values.push_back(v);
        } else if (v > top.top()) {
            top.pop();
            top.push(v);
            out.values.push_back(v);
        }
    }
    if (top.size() == r) out.horizon = top.top();
    std::sort(out.values.begin(), out.values.end());
#ifndef NDEBUG
    if (sample.size() >= r) {
        std::vector<double> sorted(sample.begin(), sample.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
            assert(out.complete_values() == path_range(extremal_sequence(sample, r)));
        }
    }
#endif
    return out;
}

std::vector<std::size_t> jump_indices(std::span<const double> sample, std::size_t r) {
    const auto m = extremal_sequence(sample, r);
    std::vector<std::size_t> out{0};
    for (std::size_t i = r; i < m.size(); ++i) {
        if (m[i - 1] < m[i]) out.push_back(i + 1 - r);
    }
    return out;
}

} // namespace extremal
