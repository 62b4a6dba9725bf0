#include "extremal/distribution.hpp"

#include "extremal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace extremal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_open(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("quantile level " + std::to_string(u) + " outside (0, 1)");
    }
}

} // namespace

class DistributionModel::Impl {
public:
    Impl(Family family, std::string name) : family_(family), name_(std::move(name)) {}
    virtual ~Impl() = default;

    virtual double cdf(double x) const = 0;
    virtual double quantile(double u) const = 0;
    virtual double left() const = 0;
    virtual double right() const = 0;
    virtual bool continuous() const { return true; }
    virtual std::vector<double> parameters() const { return {}; }

    virtual double cumulative_hazard(double x) const { return -std::log1p(-cdf(x)); }

    virtual double conditional_quantile(double u, double m) const {
        return std::min(quantile(u * cdf(m)), m);
    }

    Family family_;
    std::string name_;
};

namespace {

class UniformImpl final : public DistributionModel::Impl {
public:
    UniformImpl(double lo, double hi)
        : Impl(Family::uniform, "uniform(" + std::to_string(lo) + "," + std::to_string(hi) + ")"),
          lo_(lo), hi_(hi) {}

    double cdf(double x) const override {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        return (x - lo_) / (hi_ - lo_);
    }
    double quantile(double u) const override { return lo_ + u * (hi_ - lo_); }
    double conditional_quantile(double u, double m) const override {
        return lo_ + u * (std::min(m, hi_) - lo_);
    }
    double left() const override { return lo_; }
    double right() const override { return hi_; }
    std::vector<double> parameters() const override { return {lo_, hi_}; }

private:
    double lo_, hi_;
};

class ExponentialImpl final : public DistributionModel::Impl {
public:
    explicit ExponentialImpl(double rate)
        : Impl(Family::exponential, "exponential(" + std::to_string(rate) + ")"), rate_(rate) {}

    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }
    double quantile(double u) const override { return -std::log1p(-u) / rate_; }
    double cumulative_hazard(double x) const override { return x <= 0.0 ? 0.0 : rate_ * x; }
    double left() const override { return 0.0; }
    double right() const override { return kInf; }
    std::vector<double> parameters() const override { return {rate_}; }

private:
    double rate_;
};

class ParetoLeftImpl final : public DistributionModel::Impl {
public:
    explicit ParetoLeftImpl(double alpha)
        : Impl(Family::pareto_left, "pareto_left(" + std::to_string(alpha) + ")"), alpha_(alpha) {}

    double cdf(double x) const override { return x >= -1.0 ? 1.0 : std::pow(-x, -alpha_); }
    double quantile(double u) const override { return -std::pow(u, -1.0 / alpha_); }
    double left() const override { return -kInf; }
    double right() const override { return -1.0; }
    std::vector<double> parameters() const override { return {alpha_}; }

private:
    double alpha_;
};

class GumbelMinImpl final : public DistributionModel::Impl {
public:
    GumbelMinImpl() : Impl(Family::gumbel_min, "gumbel_min") {}

    double cdf(double x) const override { return -std::expm1(-std::exp(x)); }
    double quantile(double u) const override { return std::log(-std::log1p(-u)); }
    double cumulative_hazard(double x) const override { return std::exp(x); }
    double left() const override { return -kInf; }
    double right() const override { return kInf; }
};

class EmpiricalImpl final : public DistributionModel::Impl {
public:
    explicit EmpiricalImpl(std::vector<double> data)
        : Impl(Family::empirical, "empirical(n=" + std::to_string(data.size()) + ")"),
          sorted_(std::move(data)) {
        std::sort(sorted_.begin(), sorted_.end());
    }

    double cdf(double x) const override {
        return static_cast<double>(count_le(x)) / static_cast<double>(sorted_.size());
    }
    double quantile(double u) const override { return at_level(u, sorted_.size()); }
    double conditional_quantile(double u, double m) const override {
        return at_level(u, count_le(m));
    }
    double left() const override { return sorted_.front(); }
    double right() const override { return sorted_.back(); }
    bool continuous() const override { return false; }

private:
    std::size_t count_le(double x) const {
        return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), x) -
                                        sorted_.begin());
    }
    // sorted_[ceil(u k) - 1]: left inverse of the step cdf over the k smallest points
    double at_level(double u, std::size_t k) const {
        const double pos = std::ceil(u * static_cast<double>(k));
        const auto idx = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
        return sorted_[std::min(idx, k - 1)];
    }

    std::vector<double> sorted_;
};

class UserImpl final : public DistributionModel::Impl {
public:
    UserImpl(std::string name, std::function<double(double)> cdf, double lo, double hi)
        : Impl(Family::user, std::move(name)), cdf_(std::move(cdf)), lo_(lo), hi_(hi) {}

    double cdf(double x) const override { return cdf_(x); }
    double quantile(double u) const override { return bisect_left_inverse(cdf_, u, lo_, hi_); }
    double left() const override { return lo_; }
    double right() const override { return hi_; }

private:
    std::function<double(double)> cdf_;
    double lo_, hi_;
};

} // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::uniform: return "uniform";
    case Family::exponential: return "exponential";
    case Family::pareto_left: return "pareto_left";
    case Family::gumbel_min: return "gumbel_min";
    case Family::empirical: return "empirical";
    case Family::user: return "user";
    }
    return "unknown";
}

DistributionModel DistributionModel::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("uniform needs finite lo < hi");
    }
    return DistributionModel(std::make_shared<UniformImpl>(lo, hi));
}

DistributionModel DistributionModel::exponential(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential needs rate > 0");
    return DistributionModel(std::make_shared<ExponentialImpl>(rate));
}

DistributionModel DistributionModel::pareto_left(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("pareto_left needs alpha > 0");
    return DistributionModel(std::make_shared<ParetoLeftImpl>(alpha));
}

DistributionModel DistributionModel::gumbel_min() {
    return DistributionModel(std::make_shared<GumbelMinImpl>());
}

DistributionModel DistributionModel::empirical(std::vector<double> data) {
    if (data.empty()) throw DomainError("empirical distribution needs data");
    return DistributionModel(std::make_shared<EmpiricalImpl>(std::move(data)));
}

DistributionModel DistributionModel::from_cdf(std::string name, std::function<double(double)> cdf,
                                              double lo, double hi) {
    if (!cdf) throw DomainError("from_cdf needs a cdf");
    if (!(lo < hi)) throw DomainError("from_cdf needs lo < hi");
    return DistributionModel(std::make_shared<UserImpl>(std::move(name), std::move(cdf), lo, hi));
}

double DistributionModel::cdf(double x) const { return impl_->cdf(x); }

double DistributionModel::quantile(double u) const {
    require_unit_open(u);
    return impl_->quantile(u);
}

double DistributionModel::cumulative_hazard(double x) const { return impl_->cumulative_hazard(x); }

double DistributionModel::conditional_quantile(double u, double m) const {
    require_unit_open(u);
    if (!(impl_->cdf(m) > 0.0)) throw DomainError("conditional quantile needs F(m) > 0");
    return impl_->conditional_quantile(u, m);
}

double DistributionModel::left_endpoint() const { return impl_->left(); }
double DistributionModel::right_endpoint() const { return impl_->right(); }
bool DistributionModel::is_continuous() const { return impl_->continuous(); }
Family DistributionModel::family() const { return impl_->family_; }
const std::string& DistributionModel::name() const { return impl_->name_; }
std::vector<double> DistributionModel::parameters() const { return impl_->parameters(); }

std::vector<double> DistributionModel::sample(RngStream& rng, std::size_t n) const {
    std::vector<double> out(n);
    for (auto& v : out) v = sample(rng);
    return out;
}

double bisect_left_inverse(const std::function<double(double)>& f, double target, double lo,
                           double hi) {
    // expand infinite ends until the bracket straddles the target
    double step = 1.0;
    if (!std::isfinite(lo)) {
        lo = std::isfinite(hi) ? hi - step : -step;
        for (int i = 0; f(lo) >= target; ++i) {
            if (i > 2000) throw NumericError("no lower bracket for level " + std::to_string(target));
            step *= 2.0;
            lo -= step;
        }
    }
    step = 1.0;
    if (!std::isfinite(hi)) {
        hi = lo + step;
        for (int i = 0; f(hi) < target; ++i) {
            if (i > 2000) throw NumericError("no upper bracket for level " + std::to_string(target));
            step *= 2.0;
            hi += step;
        }
    }
    if (f(hi) < target) {
        std::ostringstream msg;
        msg << "level " << target << " not reached on bracket [" << lo << ", " << hi << "]";
        throw NumericError(msg.str());
    }
    if (f(lo) >= target) return lo;
    // invariant: f(lo) < target <= f(hi)
    for (int i = 0; i < 200; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= 1e-12 * std::abs(hi)) break;
    }
    return hi;
}

} // namespace extremal
