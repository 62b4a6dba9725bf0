#include "catch_amalgamated.hpp"

#include "extremal/errors.hpp"
#include "extremal/prmsim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

using namespace extremal;
using Catch::Approx;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// rth largest mark by time t, by sorting
double brute_yr(const PoissonField& f, std::size_t r, double t) {
    std::vector<double> m;
    for (const auto& p : f.points()) {
        if (p.t <= t) m.push_back(p.j);
    }
    std::sort(m.begin(), m.end(), std::greater<>());
    return m.at(r - 1);
}

} // namespace

TEST_CASE("field counts and mark tails") {
    const auto q = IntensityModel::inverse();
    RngStream rng(1);
    const int reps = 2000;
    double total = 0, above = 0, marks = 0;
    for (int k = 0; k < reps; ++k) {
        const auto f = simulate_field(q, 1.0, 0.01, rng.child(static_cast<std::uint64_t>(k)));
        total += static_cast<double>(f.size());
        for (const auto& p : f.points()) {
            REQUIRE(p.j > 0.01);
            REQUIRE((p.t >= 0.0 && p.t <= 1.0));
            above += p.j > 0.05;
            marks += 1;
        }
        REQUIRE(std::is_sorted(f.points().begin(), f.points().end(),
                               [](const auto& a, const auto& b) { return a.t < b.t; }));
    }
    const double mean = total / reps;
    CHECK(std::abs(mean - 100.0) < 4 * std::sqrt(100.0 / reps));
    // Q(0.05) / Q(0.01) = 0.2
    const double frac = above / marks;
    CHECK(std::abs(frac - 0.2) < 4 * std::sqrt(0.2 * 0.8 / marks));
    CHECK_THROWS_AS(simulate_field(q, 1.0, -1.0, rng), DomainError);
    CHECK_THROWS_AS(simulate_field(q, 0.0, 0.5, rng), DomainError);
}

TEST_CASE("fields are reproducible from their stream") {
    const auto q = IntensityModel::exponential();
    const auto a = simulate_field(q, 2.0, -1.0, RngStream(9));
    const auto b = simulate_field(q, 2.0, -1.0, RngStream(9));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points()[i].t == b.points()[i].t);
        CHECK(a.points()[i].j == b.points()[i].j);
    }
}

TEST_CASE("lower strips reproduce a directly simulated field in law") {
    const auto q = IntensityModel::exponential();
    RngStream rng(4);
    const int reps = 3000;
    // direct at level -1 versus level 0 plus a strip (-1, 0]
    double n_direct = 0, n_merged = 0, hi_direct = 0, hi_merged = 0;
    for (int k = 0; k < reps; ++k) {
        const auto d = simulate_field(q, 1.0, -1.0, rng.child(2 * static_cast<std::uint64_t>(k)));
        auto m = simulate_field(q, 1.0, 0.0, rng.child(2 * static_cast<std::uint64_t>(k) + 1));
        m.lower_level(-1.0);
        REQUIRE(m.strips() == 1);
        REQUIRE(m.level() == -1.0);
        n_direct += static_cast<double>(d.size());
        n_merged += static_cast<double>(m.size());
        hi_direct += static_cast<double>(count_above(d, 1.0, 0.5));
        hi_merged += static_cast<double>(count_above(m, 1.0, 0.5));
        for (const auto& p : m.points()) REQUIRE(p.j > -1.0);
    }
    const double lam = std::exp(1.0), lam_hi = std::exp(-0.5);
    CHECK(std::abs(n_direct / reps - lam) < 4 * std::sqrt(lam / reps));
    CHECK(std::abs(n_merged / reps - lam) < 4 * std::sqrt(lam / reps));
    CHECK(std::abs(hi_merged / reps - lam_hi) < 4 * std::sqrt(lam_hi / reps));
    CHECK(std::abs(hi_direct / reps - lam_hi) < 4 * std::sqrt(lam_hi / reps));
}

TEST_CASE("window extension adds points only after the old window") {
    const auto q = IntensityModel::exponential();
    auto f = simulate_field(q, 1.0, 0.0, RngStream(3));
    const auto before = f.size();
    std::size_t early = 0;
    f.extend_window(5.0);
    for (const auto& p : f.points()) early += p.t <= 1.0;
    CHECK(early == before);
    CHECK(f.window() == 5.0);
    CHECK(f.extensions() == 1);
    CHECK_THROWS_AS(f.extend_window(4.0), DomainError);
    CHECK_THROWS_AS(f.lower_level(1.0), DomainError);
}

TEST_CASE("Y^(r) on hand-built fields") {
    const auto q = IntensityModel::inverse();
    const auto f = PoissonField::from_points(q, 1.0, 0.5, {{0.1, 5.0}, {0.3, 3.0}, {0.2, 1.0}},
                                             RngStream(0));
    const std::vector<double> at_end{1.0};
    CHECK(yr_path(f, 2, at_end).values == std::vector<double>{3.0});
    CHECK(yr_path(f, 1, at_end).values == std::vector<double>{5.0});
    const std::vector<double> early{0.15};
    CHECK_THROWS_AS(yr_path(f, 2, early), InsufficientTruncation);
    try {
        yr_path(f, 3, early);
    } catch (const InsufficientTruncation& e) {
        CHECK(e.have() == 1);
        CHECK(e.need() == 3);
        CHECK(e.time() == 0.15);
    }
    const auto sk = yr_skeleton(f, 2);
    CHECK(sk.t == std::vector<double>{0.2, 0.3});
    CHECK(sk.values == std::vector<double>{1.0, 3.0});
    CHECK(range_of_yr(f, 1).values == std::vector<double>{5.0});
    CHECK(p_records_field(f, 1).values == std::vector<double>{5.0});
    const auto single = PoissonField::from_points(q, 1.0, 0.5, {{0.4, 2.0}}, RngStream(0));
    CHECK(p_records_field(single, 1).values == std::vector<double>{2.0});
    CHECK_THROWS_AS(PoissonField::from_points(q, 1.0, 0.5, {{0.4, 0.2}}, RngStream(0)), DomainError);
    const std::vector<double> unsorted{0.5, 0.2};
    CHECK_THROWS_AS(yr_path(f, 1, unsorted), DomainError);
}

TEST_CASE("Y^(r) matches the sort oracle, is monotone, and obeys the counting equivalence") {
    const auto q = IntensityModel::inverse();
    RngStream rng(12);
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.05 * i);
    for (int c = 0; c < 30; ++c) {
        for (std::size_t r : {1u, 4u, 20u}) {
            auto f = simulate_for_order(q, r, 2.0, 0.05, rng.child(static_cast<std::uint64_t>(100 * c + r)));
            const auto path = yr_path_extending(f, r, grid);
            const auto lower = r > 1 ? yr_path(f, r - 1, grid) : path;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                REQUIRE(path.values[i] == brute_yr(f, r, grid[i]));
                if (i > 0) REQUIRE(path.values[i] >= path.values[i - 1]);
                REQUIRE(lower.values[i] >= path.values[i]);
                // [Y <= x] iff N([0,t] x (x, inf)) < r, probed around the value
                for (double x : {path.values[i], path.values[i] * 0.999, path.values[i] * 1.001}) {
                    if (x < f.level()) continue;
                    REQUIRE((path.values[i] <= x) == (count_above(f, grid[i], x) < r));
                }
            }
            // skeleton agrees with the grid path
            const auto sk = yr_skeleton(f, r);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto it = std::upper_bound(sk.t.begin(), sk.t.end(), grid[i]);
                REQUIRE(it != sk.t.begin());
                REQUIRE(sk.values[static_cast<std::size_t>(it - sk.t.begin()) - 1] == path.values[i]);
            }
        }
    }
}

TEST_CASE("insufficient truncation is resolved by lower strips") {
    const auto q = IntensityModel::inverse();
    auto f = simulate_field(q, 1.0, 1.0, RngStream(5)); // about one point
    const std::vector<double> grid{0.5, 1.0};
    CHECK_THROWS_AS(yr_path(f, 10, grid), InsufficientTruncation);
    const auto path = yr_path_extending(f, 10, grid);
    CHECK(f.strips() > 0);
    CHECK(path.values[1] == brute_yr(f, 10, 1.0));
}

TEST_CASE("field p-records match the double-loop definition") {
    const auto q = IntensityModel::exponential();
    RngStream rng(21);
    for (int c = 0; c < 20; ++c) {
        const auto f = simulate_field(q, 3.0, -2.0, rng.child(static_cast<std::uint64_t>(c)));
        const auto pts = f.points();
        for (std::size_t p : {1u, 2u, 3u}) {
            std::vector<double> expect;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                std::size_t n = 0;
                for (std::size_t i = 0; i <= k; ++i) n += pts[i].j >= pts[k].j;
                if (n == p) expect.push_back(pts[k].j);
            }
            REQUIRE(p_records_field(f, p).values == expect);
        }
        // complete range part equals the distinct skeleton values
        const auto rs = range_of_yr(f, 3);
        const auto sk = yr_skeleton(f, 3);
        std::vector<double> sv = sk.values;
        std::sort(sv.begin(), sv.end());
        sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
        if (!sk.values.empty()) REQUIRE(rs.complete_values() == sv);
    }
}

TEST_CASE("S split around an anchor") {
    const auto q = IntensityModel::exponential(); // S(x) = x
    CHECK(s_plus(q, 0.0) == 0.0);
    CHECK(h_bar_plus(q, 0.0) == 1.0);
    CHECK(h_bar_minus(q, 0.0) == 1.0);
    const auto sp = s_split(q, 1.5);
    CHECK(sp.plus == Approx(1.5));
    CHECK(sp.minus == Approx(1.5));
    const auto inv = IntensityModel::inverse(); // S(x) = log x
    CHECK_THROWS_AS(s_plus(inv, 1.0), DomainError);
    const double x = 2.0, y = 0.5, a = 1.0;
    CHECK(s_plus(inv, x, a) + s_minus(inv, y, a) == Approx(inv.s(a + x) - inv.s(a - y)));
    CHECK_THROWS_AS(s_minus(inv, 1.0, a), DomainError);
    CHECK(h_bar_plus(inv, 1.0, a) == Approx(0.5));
    CHECK(std::isinf(kInf));
}
