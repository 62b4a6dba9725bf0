#include "catch_amalgamated.hpp"

#include "extremal/errors.hpp"
#include "extremal/rng.hpp"
#include "extremal/seqcore.hpp"

#include <algorithm>
#include <functional>
#include <vector>

using namespace extremal;

namespace {

// full-sort oracle for the rth largest of the first n entries
double sorted_rth(std::vector<double> v, std::size_t r, std::size_t n) {
    v.resize(n);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v[r - 1];
}

AugmentedSequence seq(std::initializer_list<AugmentedValue> v) {
    return AugmentedSequence(std::vector<AugmentedValue>(v));
}

const AugmentedValue bot = AugmentedValue::bottom();

} // namespace

TEST_CASE("augmented values order bottom below every real") {
    CHECK(bot < AugmentedValue(-1e300));
    CHECK(bot == AugmentedValue::bottom());
    CHECK(meet(bot, 3.0) == bot);
    CHECK(join(bot, 3.0) == AugmentedValue(3.0));
    CHECK_THROWS_AS(bot.value(), DomainError);
    CHECK(to_string(bot) == "-inf");
}

TEST_CASE("monotone flag is validated") {
    CHECK_THROWS_AS(AugmentedSequence({3.0, 1.0}, true), DomainError);
    CHECK_NOTHROW(AugmentedSequence({bot, 1.0, 1.0}, true));
}

TEST_CASE("kth largest of a prefix") {
    const std::vector<double> a{3, 1, 2};
    CHECK(kth_largest_prefix(a, 2, 3) == 2.0);
    const std::vector<double> b{5, 5, 1};
    CHECK(kth_largest_prefix(b, 2, 3) == 5.0);
    CHECK_THROWS_AS(kth_largest_prefix(a, 4, 3), DomainError);
    CHECK_THROWS_AS(kth_largest_prefix(a, 1, 4), DomainError);
    CHECK_THROWS_AS(kth_largest_prefix(a, 0, 3), DomainError);
}

TEST_CASE("kth largest matches the full-sort oracle on random cases") {
    RngStream rng(11);
    for (int c = 0; c < 1000; ++c) {
        const auto len = static_cast<std::size_t>(rng.integer(1, 40));
        std::vector<double> v(len);
        // coarse values so ties are frequent
        for (auto& x : v) x = static_cast<double>(rng.integer(0, 9));
        const auto n = static_cast<std::size_t>(rng.integer(1, len));
        const auto r = static_cast<std::size_t>(rng.integer(1, n));
        REQUIRE(kth_largest_prefix(v, r, n) == sorted_rth(v, r, n));
    }
}

TEST_CASE("extremal sequence by hand") {
    const std::vector<double> x{3, 1, 2};
    CHECK(extremal_sequence(std::span<const double>(x), 2) == seq({bot, 1.0, 2.0}));
    CHECK(extremal_sequence(std::span<const double>(x), 1) == seq({3.0, 3.0, 3.0}));
    CHECK(extremal_sequence(std::span<const double>(x), 3) == seq({bot, bot, 1.0}));
    CHECK_THROWS_AS(extremal_sequence(std::span<const double>(x), 0), DomainError);
    CHECK_THROWS_AS(extremal_sequence(std::span<const double>(x), 4), DomainError);
    CHECK_THROWS_AS(extremal_sequence(seq({bot, 1.0}), 1), DomainError);
}

TEST_CASE("order one is the running maximum") {
    RngStream rng(3);
    std::vector<double> x(200);
    for (auto& v : x) v = rng.normal();
    CHECK(extremal_sequence(std::span<const double>(x), 1) == cummax(AugmentedSequence::from_reals(x)));
}

TEST_CASE("extremal sequence agrees with the sort oracle at every index and order") {
    RngStream rng(5);
    for (int c = 0; c < 50; ++c) {
        const auto len = static_cast<std::size_t>(rng.integer(1, 60));
        std::vector<double> x(len);
        for (auto& v : x) v = static_cast<double>(rng.integer(0, 20));
        for (std::size_t r = 1; r <= len; ++r) {
            const auto m = extremal_sequence(std::span<const double>(x), r);
            REQUIRE(m.flagged_monotone());
            REQUIRE(m.leading_bottoms() == r - 1);
            for (std::size_t n = r; n <= len; ++n) {
                REQUIRE(m.term(n) == AugmentedValue(sorted_rth(x, r, n)));
            }
        }
    }
}

TEST_CASE("cummax examples") {
    CHECK(cummax(seq({3.0, 1.0, 2.0})) == seq({3.0, 3.0, 3.0}));
    CHECK(cummax(seq({1.0, 2.0, 3.0})) == seq({1.0, 2.0, 3.0}));
    CHECK(cummax(seq({bot, 5.0, 1.0})) == seq({bot, 5.0, 5.0}));
    CHECK(cummax(seq({3.0, 1.0})).flagged_monotone());
}

TEST_CASE("shifted minimum examples") {
    CHECK(shifted_min(seq({1.0, 2.0}), seq({9.0, 0.0})) == seq({bot, 0.0}));
    CHECK(shifted_min(seq({4.0, 4.0, 4.0}), seq({4.0, 4.0, 4.0})) == seq({bot, 4.0, 4.0}));
    CHECK(shifted_min(seq({bot, 1.0}), seq({2.0, 7.0})).term(2) == bot);
    CHECK_THROWS_AS(shifted_min(seq({1.0}), seq({1.0, 2.0})), DomainError);
}

TEST_CASE("recursion step raises the order") {
    SECTION("first finite entry is the minimum of the first r+1 values") {
        const std::vector<double> x{4, 7, 1, 9, 3};
        const auto xs = AugmentedSequence::from_reals(x);
        for (std::size_t r = 1; r < x.size(); ++r) {
            const auto next = recursion_step(extremal_sequence(xs, r), xs);
            const double lo = *std::min_element(x.begin(), x.begin() + static_cast<long>(r + 1));
            CHECK(next.term(r + 1) == AugmentedValue(lo));
        }
    }
    SECTION("constant sample") {
        const std::vector<double> x(8, 2.5);
        const auto xs = AugmentedSequence::from_reals(x);
        const auto next = recursion_step(extremal_sequence(xs, 3), xs);
        CHECK(next.leading_bottoms() == 3);
        for (std::size_t n = 4; n <= 8; ++n) CHECK(next.term(n) == AugmentedValue(2.5));
    }
    SECTION("iterating from the running maximum reproduces every order") {
        RngStream rng(17);
        for (int c = 0; c < 40; ++c) {
            const auto len = static_cast<std::size_t>(rng.integer(2, 80));
            std::vector<double> x(len);
            for (auto& v : x) v = c % 2 ? rng.uniform() : static_cast<double>(rng.integer(0, 5));
            const auto xs = AugmentedSequence::from_reals(x);
            auto cur = cummax(xs);
            for (std::size_t r = 1; r < len; ++r) {
                const auto direct = extremal_sequence(xs, r);
                REQUIRE(cur == direct);
                const auto next = recursion_step(cur, xs);
                // pointwise ordering across orders
                for (std::size_t n = 0; n < len; ++n) REQUIRE(next[n] <= cur[n]);
                cur = next;
            }
        }
    }
}
