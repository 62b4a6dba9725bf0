#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace extremal {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a numerical procedure (inversion, bracketing) fails.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulated Poisson field held fewer than `need` points by time `t`.
/// Callers lower the truncation level with an independent strip and retry.
class InsufficientTruncation : public std::runtime_error {
public:
    InsufficientTruncation(double t, std::size_t have, std::size_t need)
        : std::runtime_error("insufficient truncation at t=" + std::to_string(t) + ": have " +
                             std::to_string(have) + " points, need " + std::to_string(need)),
          t_(t), have_(have), need_(need) {}

    double time() const noexcept { return t_; }
    std::size_t have() const noexcept { return have_; }
    std::size_t need() const noexcept { return need_; }

private:
    double t_;
    std::size_t have_;
    std::size_t need_;
};

} // namespace extremal
