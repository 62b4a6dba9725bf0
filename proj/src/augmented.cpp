#include "extremal/augmented.hpp"

#include "extremal/errors.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace extremal {

double AugmentedValue::value() const {
    if (!finite_) throw DomainError("bottom has no finite value");
    return value_;
}

std::string to_string(const AugmentedValue& v) {
    if (v.is_bottom()) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v.value();
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const AugmentedValue& v) { return os << to_string(v); }

AugmentedSequence::AugmentedSequence(std::vector<AugmentedValue> entries, bool monotone)
    : entries_(std::move(entries)), monotone_(monotone) {
    if (monotone_ && !is_nondecreasing()) {
        throw DomainError("sequence flagged monotone is not nondecreasing");
    }
}

AugmentedSequence AugmentedSequence::from_reals(std::span<const double> values) {
    return AugmentedSequence(std::vector<AugmentedValue>(values.begin(), values.end()));
}

const AugmentedValue& AugmentedSequence::term(std::size_t n) const {
    if (n == 0 || n > entries_.size()) {
        throw DomainError("term index " + std::to_string(n) + " outside 1.." +
                          std::to_string(entries_.size()));
    }
    return entries_[n - 1];
}

bool AugmentedSequence::is_nondecreasing() const noexcept {
    return std::is_sorted(entries_.begin(), entries_.end(),
                          [](const AugmentedValue& a, const AugmentedValue& b) { return a < b; });
}

bool AugmentedSequence::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const AugmentedValue& v) { return v.is_finite(); });
}

std::size_t AugmentedSequence::leading_bottoms() const noexcept {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [](const AugmentedValue& v) { return v.is_finite(); });
    return static_cast<std::size_t>(it - entries_.begin());
}

std::vector<double> AugmentedSequence::finite_values() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& v : entries_) {
        if (v.is_finite()) out.push_back(v.value());
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const AugmentedSequence& s) {
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ", ";
        os << s[i];
    }
    return os << ')';
}

} // namespace extremal
