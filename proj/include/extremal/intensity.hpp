#pragma once

#include <functional>
#include <memory>
#include <string>

namespace extremal {

enum class IntensityFamily { power, exponential, log_squared, custom };

/// Tail Q(x) = Pi(x, x_r) of an atomless mean measure Pi on (x_l, x_r);
/// strictly decreasing with Q(x_l+) = inf and Q(x_r-) = 0.
///
/// Built-ins:
///   power(alpha)   Q(x) = x^-alpha on (0, inf); "inv" is alpha = 1
///   exponential    Q(x) = e^-x on R
///   log_squared    Q(x) = (log x)^2 on (0, 1)
class IntensityModel {
public:
    static IntensityModel power(double alpha);
    static IntensityModel inverse() { return power(1.0); }
    static IntensityModel exponential();
    static IntensityModel log_squared();
    /// Without `q_inverse` the inverse is found by bisection. The model is
    /// probed on an interior grid and rejected with DomainError unless Q is
    /// finite, positive, strictly decreasing and free of jumps there.
    static IntensityModel custom(std::string name, std::function<double(double)> q, double x_l,
                                 double x_r, std::function<double(double)> q_inverse = {});

    double q(double x) const;
    /// inf{x : Q(x) <= y} for y > 0.
    double q_inverse(double y) const;
    /// S(x) = -log Q(x).
    double s(double x) const;

    double x_lower() const noexcept;
    double x_upper() const noexcept;
    bool in_domain(double x) const noexcept { return x > x_lower() && x < x_upper(); }

    IntensityFamily family() const noexcept;
    const std::string& name() const noexcept;
    /// Shape parameter for power models; 0 otherwise.
    double parameter() const noexcept;

    class Impl;

private:
    explicit IntensityModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

} // namespace extremal
