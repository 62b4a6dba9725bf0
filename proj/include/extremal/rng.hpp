#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace extremal {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// A named, reproducible random stream.
///
/// Streams form a tree: `child(i)` derives an independent stream from the
/// parent key and the index without consuming parent state, so a replicate
/// or strip always sees the same numbers regardless of scheduling.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    explicit RngStream(std::uint64_t seed) : key_(splitmix64(seed)), engine_(key_) {}

    RngStream child(std::uint64_t index) const {
        return RngStream(key_, splitmix64(index ^ 0x5851f42d4c957f2dULL), 0);
    }

    std::uint64_t key() const noexcept { return key_; }

    /// Uniform on the open interval (0, 1); 53 bits of mantissa, never 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    double exponential() { return -std::log1p(-uniform()); }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return static_cast<std::uint64_t>(std::poisson_distribution<long long>(mean)(engine_));
    }

    /// Uniform integer on [lo, hi].
    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
    }

    engine_type& engine() noexcept { return engine_; }

private:
    RngStream(std::uint64_t parent, std::uint64_t salt, int)
        : key_(splitmix64(parent ^ salt)), engine_(key_) {}

    std::uint64_t key_;
    engine_type engine_;
};

} // namespace extremal
