#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorefair/algorithms.hpp"
#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generators.hpp"
#include "chorefair/oracle.hpp"
#include "oracles.hpp"

#include <random>

using namespace chorefair;

namespace {

Instance make(std::initializer_list<std::initializer_list<const char*>> rows) {
    CostMatrix c;
    for (auto row : rows) {
        c.emplace_back();
        for (auto s : row) {
            Rational v(s);
            v.canonicalize();
            c.back().push_back(v);
        }
    }
    return Instance(std::move(c));
}

std::uint64_t count_all(std::size_t n, std::size_t m) {
    AllocationEnumerator e(n, m);
    std::uint64_t k = 0;
    while (e.next()) ++k;
    return k;
}

} // namespace

TEST_CASE("enumeration counts") {
    CHECK(count_all(2, 2) == 4);
    CHECK(count_all(3, 6) == 729);
    CHECK(count_all(1, 3) == 1);
    CHECK(count_all(4, 0) == 1);
    CHECK(allocation_count(3, 6) == 729);
}

TEST_CASE("enumeration is lexicographic and complete") {
    AllocationEnumerator e(3, 4);
    std::vector<std::vector<AgentId>> seen;
    while (e.next()) seen.push_back(e.assignment());
    std::vector<std::vector<AgentId>> expected;
    oracle_ref::for_each_assignment(3, 4, [&](const std::vector<AgentId>& v) { expected.push_back(v); });
    CHECK(seen == expected);
    CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("budget is enforced with the required count") {
    CHECK_THROWS_AS(AllocationEnumerator(3, 20, 1000), BudgetExceeded);
    try {
        allocation_count(2, 11, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(std::string(e.what()).find("2048") != std::string::npos);
    }
    CHECK_THROWS_AS(opt_fair(gen_eqx_cof(3, Rational(1000)).instance, Criterion::EQX, {100, 1}),
                    BudgetExceeded);
    CHECK_NOTHROW(allocation_count(2, 10, 1024));
    // n^m far beyond 64 bits is still reported, not wrapped
    CHECK_THROWS_AS(allocation_count(10, 80), BudgetExceeded);
}

TEST_CASE("optimal fair allocations on constructed instances") {
    const auto eqx = gen_eqx_cof(2, Rational(100));
    CHECK(opt_fair(eqx.instance, Criterion::EQX).social_cost == 202);

    const auto eq1 = gen_eq1_cof(2, make_rational(1, 100));
    const auto r = opt_fair(eq1.instance, Criterion::EQ1);
    CHECK(r.social_cost == make_rational(51, 100));
    CHECK(r.allocation == Allocation({{0}, {1, 2}}));

    PartitionInput p{{3, 1, 2, 2}, std::nullopt};
    const auto hard = gen_eq1_hard(p, 3, Rational(1000));
    CHECK(opt_fair(hard.instance, Criterion::EQ1).social_cost == make_rational(16, 1000));
}

TEST_CASE("gap reports") {
    const auto eq1 = gen_eq1_cof(2, make_rational(1, 100));
    const auto g = cof_gap(eq1.instance, Criterion::EQ1);
    CHECK(g.opt_unconstrained == make_rational(2, 100));
    CHECK(*g.opt_fair == make_rational(51, 100));
    CHECK(*g.gap == make_rational(49, 100));
    CHECK(*g.ratio == make_rational(51, 2));
    CHECK(satisfies(eq1.instance, *g.witness, Criterion::EQ1));
    CHECK(social_cost(eq1.instance, *g.witness) == *g.opt_fair);

    const auto eqx = gen_eqx_cof(2, Rational(100));
    CHECK(*cof_gap(eqx.instance, Criterion::EQX).gap == 198);
    CHECK(*cof_gap(normalize(eqx.instance), Criterion::EQX).gap == make_rational(198, 103));

    const Instance fair = make({{"1/2", "1/2", "0"}, {"0", "1/2", "1/2"}});
    CHECK(*cof_gap(fair, Criterion::EF1).gap == 0);

    const Instance free = make({{"0", "1"}, {"1", "0"}});
    const auto z = cof_gap(free, Criterion::EQ);
    CHECK(*z.gap == 0);
    CHECK(*z.ratio == 1);
    CHECK_FALSE(z.ratio_infinite);
}

TEST_CASE("EQ and EF may be infeasible") {
    const Instance in = make({{"1"}, {"1"}});
    CHECK_FALSE(find_opt_fair(in, Criterion::EQ).has_value());
    CHECK_THROWS_AS(opt_fair(in, Criterion::EF), NoFairAllocation);
    const auto g = cof_gap(in, Criterion::EQ);
    CHECK_FALSE(g.opt_fair.has_value());
    CHECK_FALSE(g.gap.has_value());
    CHECK(find_opt_fair(in, Criterion::EF1).has_value());
}

TEST_CASE("search matches the brute-force oracle including tie-breaks") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 250; ++t) {
        const std::size_t n = 1 + rng() % 3;
        const std::size_t m = rng() % 7;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 1 + rng() % 5);
        for (Criterion c : kAllCriteria) {
            CAPTURE(t);
            CAPTURE(to_string(c));
            const auto ref = oracle_ref::brute_opt(in, c);
            const auto got = find_opt_fair(in, c);
            REQUIRE(ref.has_value() == got.has_value());
            if (!ref) continue;
            CHECK(got->social_cost == ref->sc);
            CHECK(got->assignment == ref->assignment);
            CHECK(got->allocation == Allocation::from_assignment(n, ref->assignment));
        }
    }
}

TEST_CASE("parallel search agrees with sequential search") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + rng() % 3;
        const std::size_t m = 1 + rng() % 6;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 1 + rng() % 4);
        for (Criterion c : kAllCriteria) {
            const auto one = find_opt_fair(in, c, {kDefaultBudget, 1});
            for (std::size_t w : {2, 3, 8}) {
                const auto many = find_opt_fair(in, c, {kDefaultBudget, w});
                REQUIRE(one.has_value() == many.has_value());
                if (one) {
                    CHECK(one->social_cost == many->social_cost);
                    CHECK(one->assignment == many->assignment);
                }
            }
        }
    }
}

TEST_CASE("ordering of optima and constructive upper bounds") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const std::size_t m = 1 + rng() % 6;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 1 + rng() % 12);
        const Rational opt = optimal_allocation(in).social_cost;
        const Rational eqx = opt_fair(in, Criterion::EQX).social_cost;
        const Rational eq1 = opt_fair(in, Criterion::EQ1).social_cost;
        const Rational ef1 = opt_fair(in, Criterion::EF1).social_cost;
        CHECK(eqx >= eq1);
        CHECK(eq1 >= opt);
        CHECK(ef1 >= opt);
        CHECK(eq1 - opt <= 1);
        CHECK(ef1 - opt <= 1);
        if (auto eq = find_opt_fair(in, Criterion::EQ)) CHECK(eq->social_cost >= eqx);
        if (auto ef = find_opt_fair(in, Criterion::EF)) CHECK(ef->social_cost >= ef1);
        const Rational a1 = eq1_bounded(in).social_cost;
        const Rational a2 = ef1_bounded(in).social_cost;
        CHECK(a1 >= eq1);
        CHECK(a1 <= 1);
        CHECK(a2 >= ef1);
        CHECK(a2 <= 1);
    }
}
