#include "extremal/intensity.hpp"

#include "extremal/distribution.hpp"
#include "extremal/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace extremal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

class IntensityModel::Impl {
public:
    IntensityFamily family;
    std::string name;
    double x_l, x_r;
    double parameter = 0.0;
    std::function<double(double)> q;
    std::function<double(double)> q_inv;
};

IntensityModel IntensityModel::power(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("power intensity needs alpha > 0");
    auto impl = std::make_shared<Impl>();
    impl->family = IntensityFamily::power;
    impl->name = alpha == 1.0 ? "inv" : "power(" + std::to_string(alpha) + ")";
    impl->x_l = 0.0;
    impl->x_r = kInf;
    impl->parameter = alpha;
    impl->q = [alpha](double x) { return std::pow(x, -alpha); };
    impl->q_inv = [alpha](double y) { return std::pow(y, -1.0 / alpha); };
    return IntensityModel(std::move(impl));
}

IntensityModel IntensityModel::exponential() {
    auto impl = std::make_shared<Impl>();
    impl->family = IntensityFamily::exponential;
    impl->name = "exp";
    impl->x_l = -kInf;
    impl->x_r = kInf;
    impl->q = [](double x) { return std::exp(-x); };
    impl->q_inv = [](double y) { return -std::log(y); };
    return IntensityModel(std::move(impl));
}

IntensityModel IntensityModel::log_squared() {
    auto impl = std::make_shared<Impl>();
    impl->family = IntensityFamily::log_squared;
    impl->name = "logsq";
    impl->x_l = 0.0;
    impl->x_r = 1.0;
    impl->q = [](double x) {
        const double l = std::log(x);
        return l * l;
    };
    impl->q_inv = [](double y) { return std::exp(-std::sqrt(y)); };
    return IntensityModel(std::move(impl));
}

IntensityModel IntensityModel::custom(std::string name, std::function<double(double)> q,
                                      double x_l, double x_r,
                                      std::function<double(double)> q_inverse) {
    if (!q) throw DomainError("custom intensity needs Q");
    if (!(x_l < x_r)) throw DomainError("custom intensity needs x_l < x_r");

    // interior probe grid; infinite ends are replaced by a wide finite span
    const double lo = std::isfinite(x_l) ? x_l : (std::isfinite(x_r) ? x_r - 50.0 : -50.0);
    const double hi = std::isfinite(x_r) ? x_r : lo + 100.0;
    const int probes = 400;
    double prev = kInf;
    for (int i = 1; i < probes; ++i) {
        const double x = lo + (hi - lo) * i / probes;
        const double v = q(x);
        std::ostringstream where;
        where << "custom intensity '" << name << "' at x=" << x;
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw DomainError(where.str() + ": Q must be finite and positive inside the domain");
        }
        if (!(v < prev)) throw DomainError(where.str() + ": Q must be strictly decreasing");
        const double d = 1e-9 * std::max(1.0, std::abs(x));
        const double jump = q(x - d) - q(x + d);
        if (jump > 1e-4 * v) throw DomainError(where.str() + ": Q jumps (atom in the mean measure)");
        prev = v;
    }

    auto impl = std::make_shared<Impl>();
    impl->family = IntensityFamily::custom;
    impl->name = std::move(name);
    impl->x_l = x_l;
    impl->x_r = x_r;
    impl->q = q;
    if (q_inverse) {
        impl->q_inv = std::move(q_inverse);
    } else {
        impl->q_inv = [q, x_l, x_r](double y) {
            return bisect_left_inverse([&q](double x) { return -q(x); }, -y, x_l, x_r);
        };
    }
    return IntensityModel(std::move(impl));
}

double IntensityModel::q(double x) const {
    if (x <= impl_->x_l) return kInf;
    if (x >= impl_->x_r) return 0.0;
    return impl_->q(x);
}

double IntensityModel::q_inverse(double y) const {
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw DomainError("Q inverse needs a finite positive level, got " + std::to_string(y));
    }
    return impl_->q_inv(y);
}

double IntensityModel::s(double x) const { return -std::log(q(x)); }

double IntensityModel::x_lower() const noexcept { return impl_->x_l; }
double IntensityModel::x_upper() const noexcept { return impl_->x_r; }
IntensityFamily IntensityModel::family() const noexcept { return impl_->family; }
const std::string& IntensityModel::name() const noexcept { return impl_->name; }
double IntensityModel::parameter() const noexcept { return impl_->parameter; }

} // namespace extremal
