#include "extremal/stats.hpp"

#include "extremal/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace extremal {

double kolmogorov_survival(double lambda) {
    // 1 - Q(0.2) is below 1e-12; the series converges slowly there
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double n_eff) {
    const double rn = std::sqrt(n_eff);
    return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

} // namespace

GofResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_test needs a nonempty sample");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        if (!(f >= 0.0 && f <= 1.0)) throw NumericError("cdf value outside [0, 1] in ks_test");
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, stephens_p(d, n)};
}

GofResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample needs nonempty samples");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return {d, stephens_p(d, n * m / (n + m))};
}

double chi_square_survival(double stat, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi-square needs positive degrees of freedom");
    if (stat <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

GofResult chi_square(std::span<const double> observed, std::span<const double> expected,
                     std::size_t fitted) {
    if (observed.size() != expected.size() || observed.size() < 2 + fitted) {
        throw DomainError("chi_square needs matching bins and positive degrees of freedom");
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw DomainError("chi_square expected counts must be positive");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    const double dof = static_cast<double>(observed.size() - 1 - fitted);
    return {stat, chi_square_survival(stat, dof)};
}

GofResult chi_square_uniform(std::span<const std::uint64_t> counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const std::vector<double> obs = as_doubles(counts);
    const std::vector<double> exp(counts.size(), total / static_cast<double>(counts.size()));
    return chi_square(obs, exp);
}

GofResult chi_square_poisson(std::span<const std::uint64_t> data, double mean_value) {
    if (data.empty()) throw DomainError("chi_square_poisson needs data");
    if (!(mean_value > 0.0)) throw DomainError("Poisson mean must be positive");
    const double n = static_cast<double>(data.size());
    // single bins 0..K-1 and a tail bin [K, inf) holding at least 5 expected
    std::vector<double> expected;
    double cum = 0.0;
    while (true) {
        const double e = n * poisson_pmf(expected.size(), mean_value);
        if (n - cum - e < 5.0) break;
        expected.push_back(e);
        cum += e;
    }
    const std::size_t tail = expected.size();
    expected.push_back(n - cum);
    std::vector<double> observed(expected.size(), 0.0);
    for (auto v : data) observed[std::min<std::size_t>(v, tail)] += 1.0;

    // merge sparse bins into their right neighbour
    std::vector<double> obs_m, exp_m;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        o_acc += observed[i];
        e_acc += expected[i];
        if (e_acc >= 5.0 || i + 1 == expected.size()) {
            obs_m.push_back(o_acc);
            exp_m.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (exp_m.size() >= 2 && exp_m.back() < 5.0) {
        obs_m[obs_m.size() - 2] += obs_m.back();
        exp_m[exp_m.size() - 2] += exp_m.back();
        obs_m.pop_back();
        exp_m.pop_back();
    }
    if (exp_m.size() < 2) throw DomainError("too few samples for a Poisson chi-square");
    return chi_square(obs_m, exp_m);
}

double gamma_cdf(double shape, double x) {
    if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(shape, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<>(), p);
}

double poisson_pmf(std::uint64_t k, double m) {
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(m) - m - std::lgamma(kd + 1.0));
}

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("variance needs at least two values");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double dispersion_index(std::span<const double> x) {
    const double m = mean(x);
    if (!(m > 0.0)) throw NumericError("dispersion index needs a positive mean");
    return variance(x) / m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("pearson needs two samples of equal length >= 2");
    }
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> x) {
    if (x.empty()) throw DomainError("median of an empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t h = x.size() / 2;
    return x.size() % 2 == 1 ? x[h] : 0.5 * (x[h - 1] + x[h]);
}

double binomial_z(std::uint64_t k, std::uint64_t n, double p) {
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double var = nd * p * (1.0 - p);
    if (var <= 0.0) {
        return kd == nd * p ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (kd - nd * p) / std::sqrt(var);
}

} // namespace extremal
