#pragma once

// Extreme-value limit functions and norming constants for the minimum
// domain-of-attraction condition r R(a_r x - b_r) -> g(x) of the discrete
// sequence and the left-tail condition (r - Q(a(r) x + b(r))) / sqrt(r) -> h(x)
// of the continuous-time process.

#include "extremal/distribution.hpp"
#include "extremal/intensity.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace extremal {

enum class Regime { gumbel, reverse_weibull, frechet };

Regime regime_of(double gamma) noexcept;
std::string to_string(Regime r);

/// Open interval (lo, hi) with possibly infinite ends.
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const noexcept { return x > lo && x < hi; }
};

/// supp_gamma = {x : 1 - gamma x > 0}.
Interval support(double gamma) noexcept;

/// g_gamma(x) = (1 - gamma x)^(-1/gamma), e^x at gamma = 0. x in supp_gamma.
double g_value(double gamma, double x);
/// y > 0.
double g_inverse_value(double gamma, double y);
/// h_gamma(x) = -(2/gamma) log(1 - gamma x), 2x at gamma = 0, so that
/// e^(h/2) = g.
double h_value(double gamma, double x);
double h_inverse_value(double gamma, double y);

/// Limit functions after an affine change of variable:
/// g(x) = g_gamma(scale x + shift), h(x) = h_gamma(scale x + shift).
///
/// Any valid norming differs from another by such a reparametrization, so
/// this is how a concrete norming's limit is expressed.
class LimitFunctions {
public:
    explicit LimitFunctions(double gamma, double scale = 1.0, double shift = 0.0);

    double gamma() const noexcept { return gamma_; }
    double scale() const noexcept { return scale_; }
    double shift() const noexcept { return shift_; }

    Interval domain() const noexcept;

    double g(double x) const;
    double g_inverse(double y) const;
    double h(double x) const;
    double h_inverse(double y) const;

    /// g and h continued outside the domain by their boundary limits
    /// (0 or inf for g, -inf or inf for h), for use inside cdfs.
    double g_extended(double x) const noexcept;
    double h_extended(double x) const noexcept;

    /// m(x1, x2] = g(x2) - g(x1), with ends clamped to the domain.
    double mass(double x1, double x2) const noexcept;

private:
    double gamma_, scale_, shift_;
};

struct Norming {
    double a;
    double b;
};

/// Shape, limit functions and norming a(r), b(r) for one model.
class TailModel {
public:
    TailModel(std::string name, LimitFunctions limit, std::function<Norming(double)> norming,
              bool exact = false);

    const std::string& name() const noexcept { return name_; }
    double gamma() const noexcept { return limit_.gamma(); }
    Regime regime() const noexcept { return regime_of(limit_.gamma()); }
    const LimitFunctions& limit() const noexcept { return limit_; }
    Norming norming(double r) const;
    /// True when the prelimit equals the limit identically on the domain.
    bool exact() const noexcept { return exact_; }

private:
    std::string name_;
    LimitFunctions limit_;
    std::function<Norming(double)> norming_;
    bool exact_;
};

/// Convention: points are normalized as (X + b_r) / a_r, so r R(a_r x - b_r) -> g(x).
/// Closed forms for uniform, exponential, gumbel_min and pareto_left; user
/// cdfs use the quantile pins rF(-b_r) = g(0) = 1 and rF(a_r - b_r) = g(1)
/// (x = -1 instead of 1 when 1 lies outside supp_gamma). Empirical laws and
/// a gamma that contradicts the family raise DomainError.
TailModel discrete_tail_model(const DistributionModel& f, double gamma);
Norming norming_discrete(const DistributionModel& f, double gamma, double r);

/// Points are normalized as (Y - b(r)) / a(r). Closed forms for the
/// built-in intensities; custom models use b(r) = Q^<-(r) and
/// Q(b(r) + a(r)) = r - sqrt(r), which pins h(1) = 1.
TailModel continuous_tail_model(const IntensityModel& q, double gamma);
Norming norming_continuous(const IntensityModel& q, double gamma, double r);

/// Maximum absolute deviation over a grid, for each r.
struct DaCheckRow {
    double r;
    double max_error;
    double worst_x;
};

struct DaCheck {
    std::vector<DaCheckRow> rows;
    bool nonincreasing() const noexcept;
    double final_error() const noexcept { return rows.empty() ? 0.0 : rows.back().max_error; }
};

/// sup_x |r R(a_r x - b_r) - g(x)| over `grid`, per r.
DaCheck verify_da(const DistributionModel& f, const TailModel& tm, std::span<const double> grid,
                  std::span<const double> r_list);
/// sup_x |(r - Q(a(r) x + b(r))) / sqrt(r) - h(x)| over `grid`, per r.
DaCheck verify_da(const IntensityModel& q, const TailModel& tm, std::span<const double> grid,
                  std::span<const double> r_list);
/// sup_x |sqrt(r) - sqrt(Q(a(r) x + b(r))) - h(x)/2| over `grid`, per r.
DaCheck verify_sqrt_gap(const IntensityModel& q, const TailModel& tm,
                        std::span<const double> grid, std::span<const double> r_list);

/// G(x) = exp(-sqrt(Q(x))).
double attraction_cdf(const IntensityModel& q, double x);
/// G is nondecreasing on a probe grid with limits 0 at x_l and 1 at x_r.
bool attraction_cdf_valid(const IntensityModel& q);

} // namespace extremal
