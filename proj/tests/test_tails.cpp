#include "catch_amalgamated.hpp"

#include "extremal/errors.hpp"
#include "extremal/intensity.hpp"
#include "extremal/tails.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace extremal;
using Catch::Approx;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

} // namespace

TEST_CASE("g and its inverse") {
    CHECK(g_value(0.0, 1.0) == Approx(std::numbers::e));
    CHECK(g_value(-1.0, 1.0) == Approx(2.0));
    CHECK(g_value(1.0, 0.5) == Approx(2.0));
    CHECK(g_inverse_value(0.0, 1.0) == 0.0);
    CHECK(g_inverse_value(-1.0, 2.0) == Approx(1.0));
    CHECK_THROWS_AS(g_inverse_value(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(g_value(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(g_value(-0.5, -2.5), DomainError);
    for (double gamma : {-2.0, -1.0, -0.3, 0.0, 0.25, 1.0, 3.0}) {
        for (double ly = -4; ly <= 4; ly += 0.25) {
            const double y = std::exp(ly);
            REQUIRE(g_value(gamma, g_inverse_value(gamma, y)) == Approx(y).epsilon(1e-10));
        }
    }
}

TEST_CASE("h and its inverse") {
    CHECK(h_value(0.0, 1.0) == 2.0);
    CHECK(h_inverse_value(0.0, 2.0) == 1.0);
    for (double x : {-0.9, -0.2, 0.0, 0.7, 5.0}) {
        CHECK(h_value(-1.0, x) == Approx(2.0 * std::log1p(x)).margin(1e-15));
    }
    for (double gamma : {-1.5, -1.0, 0.0, 0.5, 2.0}) {
        for (double y = -12; y <= 12; y += 0.5) {
            REQUIRE(h_value(gamma, h_inverse_value(gamma, y)) == Approx(y).epsilon(1e-10).margin(1e-12));
        }
        // e^(h/2) = g
        for (double x : linspace(-0.4, 0.4, 9)) {
            REQUIRE(std::exp(0.5 * h_value(gamma, x)) == Approx(g_value(gamma, x)));
        }
    }
    CHECK_THROWS_AS(h_value(2.0, 0.5), DomainError);
}

TEST_CASE("support matches the case list") {
    CHECK(support(-2.0).lo == -0.5);
    CHECK(std::isinf(support(-2.0).hi));
    CHECK(support(0.5).hi == 2.0);
    CHECK(std::isinf(support(0.5).lo));
    CHECK(support(0.0).contains(-1e300));
    CHECK(regime_of(0.0) == Regime::gumbel);
    CHECK(regime_of(-1.0) == Regime::reverse_weibull);
    CHECK(regime_of(0.2) == Regime::frechet);
}

TEST_CASE("limit mass is additive and reparametrized consistently") {
    const LimitFunctions lf(-1.0, 1.0, -1.0); // g(x) = x on (0, inf)
    CHECK(lf.domain().lo == 0.0);
    CHECK(lf.g(2.5) == Approx(2.5));
    CHECK(lf.g_inverse(2.5) == Approx(2.5));
    CHECK(lf.mass(0.5, 1.0) + lf.mass(1.0, 3.0) == lf.mass(0.5, 3.0));
    CHECK(lf.mass(-1.0, 1.0) == Approx(1.0));
    CHECK(lf.mass(2.0, 1.0) == 0.0);
    const LimitFunctions half(0.0, 0.5, 0.0); // h(x) = x
    CHECK(half.h(1.7) == Approx(1.7));
    CHECK(half.h_inverse(-0.3) == Approx(-0.3));
    const LimitFunctions frechet(0.5, 2.0, 2.0); // g(x) = (-x)^(-2) on x < 0
    CHECK(frechet.g(-2.0) == Approx(0.25));
    CHECK(frechet.g_extended(0.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(LimitFunctions(0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("discrete normings") {
    const auto u = DistributionModel::uniform();
    const Norming n = norming_discrete(u, -1.0, 50.0);
    CHECK(n.a == Approx(1.0 / 50));
    CHECK(n.b == 0.0);
    const Norming ne = norming_discrete(DistributionModel::exponential(), -1.0, 50.0);
    CHECK(ne.a == Approx(1.0 / 50));
    const Norming ns = norming_discrete(DistributionModel::uniform(2.0, 4.0), -1.0, 10.0);
    CHECK(ns.a == Approx(0.2));
    CHECK(ns.b == -2.0);
    CHECK_THROWS_AS(norming_discrete(u, 0.0, 10.0), DomainError);
    CHECK_THROWS_AS(discrete_tail_model(DistributionModel::empirical({1, 2, 3}), 0.0), DomainError);
    CHECK_THROWS_AS(norming_discrete(u, -1.0, 1.0), DomainError);
}

TEST_CASE("uniform satisfies the attraction condition to 1e-3 at r = 1e4") {
    const auto u = DistributionModel::uniform();
    const auto tm = discrete_tail_model(u, -1.0);
    const auto grid = linspace(0.1, 3.0, 30);
    const std::vector<double> rs{1e2, 1e3, 1e4};
    const auto check = verify_da(u, tm, grid, rs);
    CHECK(check.final_error() < 1e-3);
    CHECK(check.nonincreasing());
}

TEST_CASE("exact families have zero attraction error") {
    const std::vector<double> rs{10, 100, 1000};
    const auto e = DistributionModel::exponential(3.0);
    const auto te = discrete_tail_model(e, -1.0);
    CHECK(te.exact());
    CHECK(verify_da(e, te, linspace(0.1, 5, 20), rs).final_error() < 1e-12);
    const auto gm = DistributionModel::gumbel_min();
    const auto tg = discrete_tail_model(gm, 0.0);
    CHECK(verify_da(gm, tg, linspace(-3, 3, 20), rs).final_error() < 1e-9);
}

TEST_CASE("pareto-left lies in the Frechet domain") {
    const auto p = DistributionModel::pareto_left(2.0);
    const auto tm = discrete_tail_model(p, 0.5);
    CHECK(tm.regime() == Regime::frechet);
    const std::vector<double> rs{1e1, 1e2, 1e3, 1e4};
    const auto check = verify_da(p, tm, linspace(-4, -0.5, 20), rs);
    CHECK(check.nonincreasing());
    CHECK(check.final_error() < 1e-3);
}

TEST_CASE("quantile-pinned fallback for a user cdf") {
    const auto u = DistributionModel::from_cdf(
        "user-uniform", [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.0, 1.0);
    const auto tm = discrete_tail_model(u, -1.0);
    const Norming n = tm.norming(1000.0);
    CHECK(n.b == Approx(-1e-3).epsilon(1e-9));
    CHECK(n.a == Approx(1e-3).epsilon(1e-9));
    // rF(a x - b) against the canonical g(x) = 1 + x
    for (double x : linspace(-0.9, 3.0, 14)) {
        CHECK(1000.0 * u.cdf(n.a * x - n.b) == Approx(tm.limit().g(x)).epsilon(1e-8));
    }
    const auto logistic = DistributionModel::from_cdf(
        "logistic", [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
        -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    const auto tl = discrete_tail_model(logistic, 0.0);
    const std::vector<double> rs{1e2, 1e3, 1e4};
    const auto check = verify_da(logistic, tl, linspace(-2, 2, 9), rs);
    CHECK(check.nonincreasing());
    CHECK(check.final_error() < 1e-2);
}

TEST_CASE("continuous norming for Q = 1/x") {
    const auto q = IntensityModel::inverse();
    const auto tm = continuous_tail_model(q, 0.0);
    const Norming n = tm.norming(400.0);
    CHECK(n.b == Approx(1.0 / 400));
    CHECK(n.a == Approx(std::pow(400.0, -1.5)));
    CHECK(q.q(n.b) == Approx(400.0));
    for (double x : linspace(-2, 2, 9)) CHECK(tm.limit().h(x) == Approx(x).margin(1e-15));
    const std::vector<double> rs{1e2, 1e3, 1e4};
    const auto grid = linspace(-2, 2, 41);
    const auto check = verify_da(q, tm, grid, rs);
    CHECK(check.final_error() < 0.1);
    CHECK(check.nonincreasing());
    CHECK(verify_sqrt_gap(q, tm, grid, rs).nonincreasing());
    // Q(a x + b) ~ r
    const Norming n6 = tm.norming(1e6);
    for (double x : grid) CHECK(q.q(n6.a * x + n6.b) / 1e6 == Approx(1.0).epsilon(3e-3));
}

TEST_CASE("built-in intensities converge under their normings") {
    const std::vector<double> rs{1e2, 1e3, 1e4};
    SECTION("exponential") {
        const auto q = IntensityModel::exponential();
        const auto tm = continuous_tail_model(q, 0.0);
        CHECK(verify_da(q, tm, linspace(-2, 2, 21), rs).nonincreasing());
        CHECK(verify_da(q, tm, linspace(-2, 2, 21), rs).final_error() < 0.05);
    }
    SECTION("power") {
        const auto q = IntensityModel::power(2.5);
        const auto tm = continuous_tail_model(q, 0.0);
        CHECK(verify_da(q, tm, linspace(-2, 2, 21), rs).final_error() < 0.1);
    }
    SECTION("log squared") {
        const auto q = IntensityModel::log_squared();
        const auto tm = continuous_tail_model(q, -1.0);
        const auto grid = linspace(-0.5, 2, 21);
        const auto check = verify_da(q, tm, grid, rs);
        CHECK(check.nonincreasing());
        CHECK(check.final_error() < 0.05);
        CHECK(verify_sqrt_gap(q, tm, grid, rs).final_error() < 1e-12);
        CHECK_THROWS_AS(continuous_tail_model(q, 0.0), DomainError);
    }
}

TEST_CASE("custom intensity uses the generic pins") {
    const auto q = IntensityModel::custom(
        "inv-custom", [](double x) { return 1.0 / x; }, 0.0,
        std::numeric_limits<double>::infinity());
    const auto tm = continuous_tail_model(q, 0.0);
    const double r = 900.0;
    const Norming n = tm.norming(r);
    CHECK(q.q(n.b) == Approx(r).epsilon(1e-9));
    CHECK(q.q(n.b + n.a) == Approx(r - 30.0).epsilon(1e-9));
    CHECK(tm.limit().h(1.0) == Approx(1.0));
    const std::vector<double> rs{1e2, 1e3, 1e4};
    CHECK(verify_da(q, tm, linspace(-2, 2, 21), rs).nonincreasing());
}

TEST_CASE("custom intensity validation") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(IntensityModel::custom("flat", [](double) { return 1.0; }, 0.0, inf), DomainError);
    CHECK_THROWS_AS(IntensityModel::custom(
                        "atom", [](double x) { return std::exp(-x) + (x < 3.0 ? 1.0 : 0.0); },
                        -inf, inf),
                    DomainError);
    CHECK_THROWS_AS(IntensityModel::custom("reversed", [](double x) { return x; }, 0.0, 1.0),
                    DomainError);
    const auto q = IntensityModel::custom("exp2", [](double x) { return std::exp(-2 * x); }, -inf, inf);
    CHECK(q.q_inverse(5.0) == Approx(-std::log(5.0) / 2).epsilon(1e-10));
    CHECK(q.s(1.5) == Approx(3.0));
}

TEST_CASE("exp(-sqrt(Q)) is a cdf for the built-in intensities") {
    CHECK(attraction_cdf_valid(IntensityModel::inverse()));
    CHECK(attraction_cdf_valid(IntensityModel::power(3.0)));
    CHECK(attraction_cdf_valid(IntensityModel::exponential()));
    CHECK(attraction_cdf_valid(IntensityModel::log_squared()));
    CHECK(attraction_cdf(IntensityModel::inverse(), 4.0) == Approx(std::exp(-0.5)));
}
