#include "catch_amalgamated.hpp"

#include "extremal/asympt.hpp"
#include "extremal/errors.hpp"
#include "extremal/records.hpp"

#include <vector>

using namespace extremal;

namespace {

RunSettings small(std::uint64_t seed = 11) {
    RunSettings s;
    s.seed = seed;
    s.seeds = 3;
    return s;
}

void require_all_pass(const std::vector<TestReport>& reports) {
    for (const auto& r : reports) {
        INFO(r.name << " statistic=" << r.statistic << " p=" << (r.p_value ? *r.p_value : -1.0));
        CHECK(r.pass);
    }
}

} // namespace

TEST_CASE("first_p_record_values agrees with p_records on a long prefix") {
    const auto f = DistributionModel::exponential();
    for (std::size_t p : {1u, 2u, 4u}) {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            RngStream a(seed), b(seed);
            const auto vals = first_p_record_values(f, a, p, 3);
            const auto sample = f.sample(b, 20000);
            const auto rec = p_records(sample, p);
            if (rec.values.size() >= 3) {
                CHECK(std::vector<double>(rec.values.begin(), rec.values.begin() + 3) == vals);
            }
        }
    }
}

TEST_CASE("exact experiments report zero mismatches") {
    const auto s = small();
    require_all_pass(recursion_oracle(32, 200, s));
    require_all_pass(truncation_oracle(5000, 6, s));
    require_all_pass(tilde_identity(DistributionModel::uniform(), 24, 5, 300, s));
    require_all_pass(continuous_equivalence(IntensityModel::inverse(), 500, 10, s));
    const auto r = recursion_oracle(16, 50, s);
    CHECK(r[0].statistic == 0.0);
    CHECK(r[0].n_samples == 50);
}

TEST_CASE("statistical experiments pass at small scale") {
    const auto s = small();
    const auto u = DistributionModel::uniform();
    require_all_pass(markov_kernel_identity(u, 2, 10, 4000, s));
    const std::vector<std::size_t> ns{2, 5, 10};
    require_all_pass(rank_law(u, ns, 5000, s));
    require_all_pass(jump_frequency(u, 3, 20, 5000, s));
    const std::vector<std::size_t> ps{1, 2};
    require_all_pass(ignatov(DistributionModel::exponential(), ps, 600, 3000, 3.0, s));
    require_all_pass(discrete_limit(u, -1.0, 200, 2, 2000, s));
    const std::vector<double> edges{0.0, 0.5, 1.0, 2.0};
    require_all_pass(empirical_prm(u, -1.0, 200, 0, edges, 3000, s));
    const std::vector<double> xs{0.5, 2.0};
    require_all_pass(range_counts_discrete(u, -1.0, 200, xs, 0.5, 1.0, 3000, s));
    require_all_pass(field_law(IntensityModel::inverse(), 1.0, 0.05, 3000, s));
    require_all_pass(da_check(IntensityModel::inverse(), 0.0, s));
    require_all_pass(poisson_clt(1e4, 5000, s));
    require_all_pass(range_continuous(IntensityModel::exponential(), 5, 0.0, 1.0, 3000, s));
}

TEST_CASE("the one-dimensional limit detects the far prelimit at r = 2 and accepts r = 400") {
    const auto s = small();
    const auto q = IntensityModel::inverse();
    const auto r1 = onedim_Y(q, 0.0, 2, 1.0, 3000, s);
    CHECK_FALSE(r1[0].pass);
    const auto r400 = onedim_Y(q, 0.0, 400, 1.0, 2000, s);
    CHECK(r400[0].statistic < 0.05);
    // t = 4 uses the limit Phi(2x)
    CHECK(onedim_Y(q, 0.0, 400, 4.0, 2000, s)[0].statistic < 0.05);
}

TEST_CASE("fidi oracle reproduces the carving correlation") {
    const auto s = small();
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const auto rep = fidi_Y(IntensityModel::inverse(), 0.0, 100, 1.0, 2.0, grid, 500, 200000, s);
    REQUIRE(rep.size() == 3);
    CHECK(rep[2].name == "fidi_oracle_correlation");
    CHECK(rep[2].pass);
    CHECK_THROWS_AS(fidi_Y(IntensityModel::inverse(), 0.0, 100, 2.0, 1.0, grid, 10, 10, s), DomainError);
}

TEST_CASE("experiments are deterministic per seed") {
    const auto s = small(5);
    const auto u = DistributionModel::uniform();
    const auto a = to_json(discrete_limit(u, -1.0, 100, 1, 500, s)).dump();
    const auto b = to_json(discrete_limit(u, -1.0, 100, 1, 500, s)).dump();
    CHECK(a == b);
    const auto c = to_json(discrete_limit(u, -1.0, 100, 1, 500, small(6))).dump();
    CHECK(a != c);
}

TEST_CASE("invalid experiment arguments") {
    const auto s = small();
    const auto u = DistributionModel::uniform();
    CHECK_THROWS_AS(markov_kernel_identity(u, 2, 2, 10, s), DomainError);
    CHECK_THROWS_AS(discrete_limit(u, 0.0, 100, 1, 10, s), DomainError);
    CHECK_THROWS_AS(range_continuous(IntensityModel::inverse(), 5, 0.0, 1.0, 10, s), DomainError);
    CHECK_THROWS_AS(onedim_Y(IntensityModel::inverse(), 0.0, 10, 0.0, 10, s), DomainError);
}
