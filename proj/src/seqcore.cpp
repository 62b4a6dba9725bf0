#include "extremal/seqcore.hpp"

#include "extremal/errors.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace extremal {

double kth_largest_prefix(std::span<const double> sample, std::size_t r, std::size_t n) {
    if (n > sample.size()) {
        throw DomainError("prefix length " + std::to_string(n) + " exceeds sample size " +
                          std::to_string(sample.size()));
    }
    if (r < 1 || r > n) {
        throw DomainError("order r=" + std::to_string(r) + " outside 1.." + std::to_string(n));
    }
    std::vector<double> head(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(n));
    auto kth = head.begin() + static_cast<std::ptrdiff_t>(r - 1);
    std::nth_element(head.begin(), kth, head.end(), std::greater<>());
    return *kth;
}

AugmentedSequence extremal_sequence(const AugmentedSequence& x, std::size_t r) {
    if (!x.all_finite()) throw DomainError("extremal_sequence needs a finite input sequence");
    return extremal_sequence(std::span<const double>(x.finite_values()), r);
}

AugmentedSequence extremal_sequence(std::span<const double> x, std::size_t r) {
    if (r < 1) throw DomainError("extremal_sequence needs order r >= 1");
    if (x.size() < r) {
        throw DomainError("sequence of length " + std::to_string(x.size()) +
                          " is shorter than the order " + std::to_string(r));
    }
    // min-heap holding the r largest values seen so far; its top is m_n^(r)
    std::priority_queue<double, std::vector<double>, std::greater<>> top;
    std::vector<AugmentedValue> out;
    out.reserve(x.size());
    for (double v : x) {
        if (top.size() < r) {
            top.push(v);
        } else if (v > top.top()) {
            top.pop();
            top.push(v);
        }
        out.push_back(top.size() < r ? AugmentedValue::bottom() : AugmentedValue(top.top()));
    }
    return AugmentedSequence(std::move(out), true);
}

AugmentedSequence cummax(const AugmentedSequence& x) {
    std::vector<AugmentedValue> out;
    out.reserve(x.size());
    AugmentedValue running = AugmentedValue::bottom();
    for (const auto& v : x.entries()) {
        running = join(running, v);
        out.push_back(running);
    }
    return AugmentedSequence(std::move(out), true);
}

AugmentedSequence shifted_min(const AugmentedSequence& x, const AugmentedSequence& y) {
    if (x.size() != y.size()) {
        throw DomainError("shifted_min length mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
    }
    std::vector<AugmentedValue> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.push_back(i == 0 ? AugmentedValue::bottom() : meet(x[i - 1], y[i]));
    }
    return AugmentedSequence(std::move(out));
}

AugmentedSequence recursion_step(const AugmentedSequence& x_r, const AugmentedSequence& x) {
    return cummax(shifted_min(x_r, x));
}

} // namespace extremal
