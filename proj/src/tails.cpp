#include "extremal/tails.hpp"

#include "extremal/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace extremal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_in_support(double gamma, double x) {
    if (!support(gamma).contains(x)) {
        std::ostringstream msg;
        msg << "x=" << x << " outside supp_gamma for gamma=" << gamma;
        throw DomainError(msg.str());
    }
}

void require_gamma(double declared, double family_gamma, const std::string& family) {
    if (std::abs(declared - family_gamma) > 1e-9 * std::max(1.0, std::abs(family_gamma))) {
        std::ostringstream msg;
        msg << "gamma=" << declared << " does not match family " << family << " (gamma="
            << family_gamma << ")";
        throw DomainError(msg.str());
    }
}

void require_order(double r) {
    if (!(r > 1.0)) throw DomainError("norming needs r > 1, got " + std::to_string(r));
}

} // namespace

Regime regime_of(double gamma) noexcept {
    if (gamma == 0.0) return Regime::gumbel;
    return gamma < 0.0 ? Regime::reverse_weibull : Regime::frechet;
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::gumbel: return "gumbel";
    case Regime::reverse_weibull: return "reverse_weibull";
    case Regime::frechet: return "frechet";
    }
    return "unknown";
}

Interval support(double gamma) noexcept {
    if (gamma == 0.0) return {-kInf, kInf};
    if (gamma < 0.0) return {1.0 / gamma, kInf};
    return {-kInf, 1.0 / gamma};
}

double g_value(double gamma, double x) {
    require_in_support(gamma, x);
    if (gamma == 0.0) return std::exp(x);
    return std::exp(-std::log1p(-gamma * x) / gamma);
}

double g_inverse_value(double gamma, double y) {
    if (!(y > 0.0)) throw DomainError("g inverse needs y > 0, got " + std::to_string(y));
    if (gamma == 0.0) return std::log(y);
    return -std::expm1(-gamma * std::log(y)) / gamma;
}

double h_value(double gamma, double x) {
    require_in_support(gamma, x);
    if (gamma == 0.0) return 2.0 * x;
    return -(2.0 / gamma) * std::log1p(-gamma * x);
}

double h_inverse_value(double gamma, double y) {
    if (!std::isfinite(y)) throw DomainError("h inverse needs a finite argument");
    if (gamma == 0.0) return 0.5 * y;
    return -std::expm1(-0.5 * gamma * y) / gamma;
}

LimitFunctions::LimitFunctions(double gamma, double scale, double shift)
    : gamma_(gamma), scale_(scale), shift_(shift) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
        throw DomainError("limit reparametrization needs a finite scale > 0 and finite shift");
    }
}

Interval LimitFunctions::domain() const noexcept {
    const Interval s = support(gamma_);
    return {(s.lo - shift_) / scale_, (s.hi - shift_) / scale_};
}

double LimitFunctions::g(double x) const { return g_value(gamma_, scale_ * x + shift_); }

double LimitFunctions::g_inverse(double y) const {
    return (g_inverse_value(gamma_, y) - shift_) / scale_;
}

double LimitFunctions::h(double x) const { return h_value(gamma_, scale_ * x + shift_); }

double LimitFunctions::h_inverse(double y) const {
    return (h_inverse_value(gamma_, y) - shift_) / scale_;
}

double LimitFunctions::g_extended(double x) const noexcept {
    const Interval d = domain();
    if (x <= d.lo) return 0.0;
    if (x >= d.hi) return kInf;
    const double y = scale_ * x + shift_;
    return gamma_ == 0.0 ? std::exp(y) : std::exp(-std::log1p(-gamma_ * y) / gamma_);
}

double LimitFunctions::h_extended(double x) const noexcept {
    const Interval d = domain();
    if (x <= d.lo) return -kInf;
    if (x >= d.hi) return kInf;
    const double y = scale_ * x + shift_;
    return gamma_ == 0.0 ? 2.0 * y : -(2.0 / gamma_) * std::log1p(-gamma_ * y);
}

double LimitFunctions::mass(double x1, double x2) const noexcept {
    if (!(x2 > x1)) return 0.0;
    return g_extended(x2) - g_extended(x1);
}

TailModel::TailModel(std::string name, LimitFunctions limit,
                     std::function<Norming(double)> norming, bool exact)
    : name_(std::move(name)), limit_(limit), norming_(std::move(norming)), exact_(exact) {}

Norming TailModel::norming(double r) const {
    require_order(r);
    const Norming n = norming_(r);
    if (!(n.a > 0.0) || !std::isfinite(n.a) || !std::isfinite(n.b)) {
        std::ostringstream msg;
        msg << "norming for " << name_ << " at r=" << r << " is invalid: a=" << n.a
            << ", b=" << n.b;
        throw NumericError(msg.str());
    }
    return n;
}

TailModel discrete_tail_model(const DistributionModel& f, double gamma) {
    const auto p = f.parameters();
    switch (f.family()) {
    case Family::uniform: {
        require_gamma(gamma, -1.0, f.name());
        const double lo = p[0], width = p[1] - p[0];
        // rF(a x - b) = x exactly; rR differs at second order
        return TailModel(f.name(), LimitFunctions(-1.0, 1.0, -1.0),
                         [lo, width](double r) { return Norming{width / r, -lo}; });
    }
    case Family::exponential: {
        require_gamma(gamma, -1.0, f.name());
        const double rate = p[0];
        return TailModel(f.name(), LimitFunctions(-1.0, 1.0, -1.0),
                         [rate](double r) { return Norming{1.0 / (rate * r), 0.0}; }, true);
    }
    case Family::gumbel_min:
        require_gamma(gamma, 0.0, f.name());
        return TailModel(f.name(), LimitFunctions(0.0),
                         [](double r) { return Norming{1.0, std::log(r)}; }, true);
    case Family::pareto_left: {
        const double alpha = p[0];
        require_gamma(gamma, 1.0 / alpha, f.name());
        // (1 - gamma y)^(-1/gamma) = (-x)^(-alpha) for y = (x + 1) / gamma
        return TailModel(f.name(), LimitFunctions(gamma, 1.0 / gamma, 1.0 / gamma),
                         [alpha](double r) { return Norming{std::pow(r, 1.0 / alpha), 0.0}; });
    }
    case Family::empirical:
        throw DomainError("empirical law " + f.name() +
                          " has no domain of attraction; supply a parametric family");
    case Family::user: break;
    }
    const bool one_inside = support(gamma).contains(1.0);
    const double pin_x = one_inside ? 1.0 : -1.0;
    const double pin_g = g_value(gamma, pin_x);
    return TailModel(f.name(), LimitFunctions(gamma), [f, pin_x, pin_g](double r) {
        if (!(pin_g < r) || !(1.0 < r)) {
            throw DomainError("r=" + std::to_string(r) + " too small for the quantile pins");
        }
        const double q0 = f.quantile(1.0 / r);
        const double q1 = f.quantile(pin_g / r);
        return Norming{(q1 - q0) / pin_x, -q0};
    });
}

Norming norming_discrete(const DistributionModel& f, double gamma, double r) {
    return discrete_tail_model(f, gamma).norming(r);
}

TailModel continuous_tail_model(const IntensityModel& q, double gamma) {
    switch (q.family()) {
    case IntensityFamily::power: {
        require_gamma(gamma, 0.0, q.name());
        const double alpha = q.parameter();
        // (r - Q(a x + b)) / sqrt(r) -> x = h_0(x / 2)
        return TailModel(q.name(), LimitFunctions(0.0, 0.5, 0.0), [alpha](double r) {
            return Norming{std::pow(r, -1.0 / alpha - 0.5) / alpha, std::pow(r, -1.0 / alpha)};
        });
    }
    case IntensityFamily::exponential:
        require_gamma(gamma, 0.0, q.name());
        return TailModel(q.name(), LimitFunctions(0.0, 0.5, 0.0),
                         [](double r) { return Norming{1.0 / std::sqrt(r), -std::log(r)}; });
    case IntensityFamily::log_squared:
        require_gamma(gamma, -1.0, q.name());
        // Q(e^-sqrt(r) (1 + x)) = (sqrt(r) - log(1 + x))^2, limit 2 log(1 + x)
        return TailModel(q.name(), LimitFunctions(-1.0), [](double r) {
            const double e = std::exp(-std::sqrt(r));
            return Norming{e, e};
        });
    case IntensityFamily::custom: break;
    }
    const double pin = h_inverse_value(gamma, 1.0);
    return TailModel(q.name(), LimitFunctions(gamma, pin, 0.0), [q](double r) {
        const double b = q.q_inverse(r);
        const double a = q.q_inverse(r - std::sqrt(r)) - b;
        if (!(a > 0.0)) {
            std::ostringstream msg;
            msg << "inversion of Q for " << q.name() << " failed: Q^<-(" << r - std::sqrt(r)
                << ") <= Q^<-(" << r << ") = " << b;
            throw NumericError(msg.str());
        }
        return Norming{a, b};
    });
}

Norming norming_continuous(const IntensityModel& q, double gamma, double r) {
    return continuous_tail_model(q, gamma).norming(r);
}

bool DaCheck::nonincreasing() const noexcept {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].max_error > rows[i - 1].max_error) return false;
    }
    return true;
}

namespace {

template <class Fn>
DaCheck sup_over_grid(const TailModel& tm, std::span<const double> grid,
                      std::span<const double> r_list, Fn&& deviation) {
    const Interval dom = tm.limit().domain();
    for (double x : grid) {
        if (!dom.contains(x)) {
            std::ostringstream msg;
            msg << "grid point " << x << " outside the limit domain (" << dom.lo << ", " << dom.hi
                << ")";
            throw DomainError(msg.str());
        }
    }
    DaCheck out;
    for (double r : r_list) {
        const Norming n = tm.norming(r);
        DaCheckRow row{r, 0.0, grid.empty() ? 0.0 : grid.front()};
        for (double x : grid) {
            const double e = std::abs(deviation(r, n, x));
            if (e > row.max_error || std::isnan(e)) {
                row.max_error = std::isnan(e) ? kInf : e;
                row.worst_x = x;
            }
        }
        out.rows.push_back(row);
    }
    return out;
}

} // namespace

DaCheck verify_da(const DistributionModel& f, const TailModel& tm, std::span<const double> grid,
                  std::span<const double> r_list) {
    return sup_over_grid(tm, grid, r_list, [&](double r, const Norming& n, double x) {
        return r * f.cumulative_hazard(n.a * x - n.b) - tm.limit().g(x);
    });
}

DaCheck verify_da(const IntensityModel& q, const TailModel& tm, std::span<const double> grid,
                  std::span<const double> r_list) {
    return sup_over_grid(tm, grid, r_list, [&](double r, const Norming& n, double x) {
        return (r - q.q(n.a * x + n.b)) / std::sqrt(r) - tm.limit().h(x);
    });
}

DaCheck verify_sqrt_gap(const IntensityModel& q, const TailModel& tm,
                        std::span<const double> grid, std::span<const double> r_list) {
    return sup_over_grid(tm, grid, r_list, [&](double r, const Norming& n, double x) {
        return std::sqrt(r) - std::sqrt(q.q(n.a * x + n.b)) - 0.5 * tm.limit().h(x);
    });
}

double attraction_cdf(const IntensityModel& q, double x) { return std::exp(-std::sqrt(q.q(x))); }

bool attraction_cdf_valid(const IntensityModel& q) {
    const double xl = q.x_lower(), xr = q.x_upper();
    const double lo = std::isfinite(xl) ? xl + 1e-12 * std::max(1.0, std::abs(xl)) : -1e12;
    const double hi = std::isfinite(xr) ? xr - 1e-12 * std::max(1.0, std::abs(xr)) : 1e12;
    if (attraction_cdf(q, lo) > 1e-3 || attraction_cdf(q, hi) < 1.0 - 1e-3) return false;
    // monotone on an even interior grid
    double prev = 0.0;
    const double mid_lo = std::isfinite(xl) ? xl : -60.0;
    const double mid_hi = std::isfinite(xr) ? xr : mid_lo + 120.0;
    for (int i = 1; i < 1000; ++i) {
        const double x = mid_lo + (mid_hi - mid_lo) * i / 1000.0;
        const double v = attraction_cdf(q, x);
        if (v < prev || v < 0.0 || v > 1.0) return false;
        prev = v;
    }
    return true;
}

} // namespace extremal
