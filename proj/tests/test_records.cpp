#include "catch_amalgamated.hpp"

#include "extremal/distribution.hpp"
#include "extremal/errors.hpp"
#include "extremal/records.hpp"
#include "extremal/seqcore.hpp"

#include <cmath>
#include <set>
#include <vector>

using namespace extremal;

namespace {

std::vector<std::size_t> brute_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        for (std::size_t j = 0; j <= n; ++j) out[n] += x[j] >= x[n];
    }
    return out;
}

} // namespace

TEST_CASE("relative ranks by hand") {
    const std::vector<double> x{3, 1, 2};
    const auto r = relative_ranks(x);
    CHECK(std::vector<std::size_t>(r.values().begin(), r.values().end()) ==
          std::vector<std::size_t>{1, 2, 2});
    CHECK(r.rank(3) == 2);
    CHECK_THROWS_AS(r.rank(0), DomainError);
    const std::vector<double> inc{1, 2, 3, 4, 5};
    const auto inc_ranks = relative_ranks(inc);
    for (std::size_t v : inc_ranks.values()) CHECK(v == 1);
    CHECK(relative_ranks(std::vector<double>{}).size() == 0);
    CHECK_THROWS_AS(RankSequence({1, 3}), DomainError);
}

TEST_CASE("relative ranks match the quadratic count, ties included") {
    RngStream rng(2);
    for (int c = 0; c < 200; ++c) {
        std::vector<double> x(static_cast<std::size_t>(rng.integer(1, 120)));
        for (auto& v : x) v = static_cast<double>(rng.integer(0, 15));
        const auto r = relative_ranks(x);
        REQUIRE(std::vector<std::size_t>(r.values().begin(), r.values().end()) == brute_ranks(x));
    }
}

TEST_CASE("record times") {
    const RankSequence r({1, 2, 2});
    CHECK(record_times(r, 2) == std::vector<std::size_t>{2, 3});
    CHECK(record_times(r, 1) == std::vector<std::size_t>{1});
    CHECK(record_times(r, 4).empty());
    const std::vector<double> x{3, 1, 2};
    const auto rec = p_records(x, 2);
    CHECK(rec.values == std::vector<double>{1, 2});
    CHECK(rec.order == 2);
}

TEST_CASE("mean number of upper records is the harmonic sum") {
    const auto f = DistributionModel::uniform();
    RngStream rng(8);
    const std::size_t n = 100;
    const int reps = 4000;
    double total = 0, total_sq = 0;
    for (int k = 0; k < reps; ++k) {
        const auto x = f.sample(rng, n);
        const double c = static_cast<double>(record_times(relative_ranks(x), 1).size());
        total += c;
        total_sq += c * c;
    }
    double h = 0;
    for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    const double mean = total / reps;
    const double sd = std::sqrt((total_sq / reps - mean * mean) / reps);
    CHECK(std::abs(mean - h) < 4 * sd);
}

TEST_CASE("range of the order-r sequence") {
    const std::vector<double> x{3, 1, 2};
    const auto rs = range_of_Mr(x, 2);
    CHECK(rs.values == std::vector<double>{1, 2, 3});
    CHECK(rs.horizon == AugmentedValue(2.0));
    CHECK(rs.complete_values() == std::vector<double>{1, 2});
    CHECK(path_range(extremal_sequence(std::span<const double>(x), 2)) == std::vector<double>{1, 2});
    CHECK(rs.count_in(0.5, 2.0) == 2);
    CHECK(rs.count_in(2.0, 2.0) == 0);

    const auto short_rs = range_of_Mr(x, 5);
    CHECK(short_rs.horizon.is_bottom());
    CHECK(short_rs.complete_values().empty());
}

TEST_CASE("range of order one is the classical record values") {
    const std::vector<double> x{2, 1, 5, 3, 7, 7, 6};
    CHECK(range_of_Mr(x, 1).values == std::vector<double>{2, 5, 7});
}

TEST_CASE("record union up to the horizon equals the path range") {
    const auto f = DistributionModel::exponential();
    RngStream rng(13);
    for (int c = 0; c < 100; ++c) {
        const auto x = f.sample(rng, 400);
        for (std::size_t r : {1u, 2u, 3u, 7u}) {
            const auto rs = range_of_Mr(x, r);
            REQUIRE(rs.complete_values() == path_range(extremal_sequence(std::span<const double>(x), r)));
            // union over p of p-record values
            const auto ranks = relative_ranks(x);
            std::set<double> uni;
            for (std::size_t p = 1; p <= r; ++p) {
                for (double v : p_records(x, ranks, p).values) uni.insert(v);
            }
            REQUIRE(std::vector<double>(uni.begin(), uni.end()) == rs.values);
        }
    }
}

TEST_CASE("jumps happen exactly at indices with rank at most r") {
    const auto f = DistributionModel::uniform();
    RngStream rng(19);
    for (int c = 0; c < 100; ++c) {
        const auto x = f.sample(rng, 200);
        const auto ranks = relative_ranks(x);
        for (std::size_t r : {1u, 3u, 10u}) {
            const auto jumps = jump_indices(x, r);
            REQUIRE(jumps.front() == 0);
            const std::set<std::size_t> js(jumps.begin() + 1, jumps.end());
            for (std::size_t k = r + 1; k <= x.size(); ++k) {
                REQUIRE((js.count(k - r) == 1) == (ranks.rank(k) <= r));
            }
        }
    }
}

TEST_CASE("decreasing sample never jumps after r") {
    const std::vector<double> x{9, 8, 7, 6, 5, 4};
    CHECK(jump_indices(x, 2) == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(jump_indices(x, 7), DomainError);
}
