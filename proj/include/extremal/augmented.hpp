#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace extremal {

/// A point of the extended reals [-inf, inf): either the bottom element
/// (written ⊥, standing for -inf) or a finite real.
///
/// Bottom is a sentinel rather than an IEEE infinity, so conventions such as
/// "F^<-(u | bottom) = 0" are handled by explicit case logic.
class AugmentedValue {
public:
    constexpr AugmentedValue() noexcept = default;
    constexpr AugmentedValue(double v) noexcept : finite_(true), value_(v) {} // NOLINT(google-explicit-constructor)

    static constexpr AugmentedValue bottom() noexcept { return AugmentedValue{}; }

    constexpr bool is_bottom() const noexcept { return !finite_; }
    constexpr bool is_finite() const noexcept { return finite_; }

    /// The finite payload. Throws DomainError on bottom.
    double value() const;

    friend constexpr bool operator==(const AugmentedValue& a, const AugmentedValue& b) noexcept {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(const AugmentedValue& a,
                                                       const AugmentedValue& b) noexcept {
        if (!a.finite_ || !b.finite_) {
            return static_cast<int>(a.finite_) <=> static_cast<int>(b.finite_);
        }
        return a.value_ <=> b.value_;
    }

private:
    bool finite_ = false;
    double value_ = 0.0;
};

constexpr AugmentedValue meet(const AugmentedValue& a, const AugmentedValue& b) noexcept {
    return (b < a) ? b : a;
}

constexpr AugmentedValue join(const AugmentedValue& a, const AugmentedValue& b) noexcept {
    return (a < b) ? b : a;
}

std::string to_string(const AugmentedValue& v);
std::ostream& operator<<(std::ostream& os, const AugmentedValue& v);

/// Finite prefix x_1..x_n of a sequence over the extended reals.
///
/// Storage is 0-based (`operator[]`), while `term(n)` gives the 1-based
/// access used by the recursions. A sequence constructed with the monotone
/// flag is checked to be nondecreasing.
class AugmentedSequence {
public:
    AugmentedSequence() = default;
    explicit AugmentedSequence(std::vector<AugmentedValue> entries, bool monotone = false);

    static AugmentedSequence from_reals(std::span<const double> values);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const AugmentedValue& operator[](std::size_t i) const { return entries_[i]; }
    const AugmentedValue& term(std::size_t n) const;

    std::span<const AugmentedValue> entries() const noexcept { return entries_; }

    bool flagged_monotone() const noexcept { return monotone_; }
    bool is_nondecreasing() const noexcept;
    bool all_finite() const noexcept;

    /// Number of leading bottom entries.
    std::size_t leading_bottoms() const noexcept;

    /// Finite payloads with bottoms dropped.
    std::vector<double> finite_values() const;

    friend bool operator==(const AugmentedSequence& a, const AugmentedSequence& b) noexcept {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<AugmentedValue> entries_;
    bool monotone_ = false;
};

std::ostream& operator<<(std::ostream& os, const AugmentedSequence& s);

} // namespace extremal
