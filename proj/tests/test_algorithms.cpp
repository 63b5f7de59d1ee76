#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorefair/algorithms.hpp"
#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generators.hpp"
#include "oracles.hpp"

#include <algorithm>
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

Rational min_agent_cost(const Instance& in, const Allocation& a) {
    Rational best = agent_cost(in, a, 0);
    for (AgentId i = 1; i < in.agents(); ++i) best = std::min(best, agent_cost(in, a, i));
    return best;
}

// every n-th entry of the agent's ascending costs, starting at `position`
Rational bound_ref(const Instance& in, AgentId agent, std::size_t position) {
    std::vector<Rational> costs = in.row(agent);
    std::sort(costs.begin(), costs.end());
    Rational s = 0;
    for (std::size_t p = position; p < costs.size(); p += in.agents()) s += costs[p];
    return s;
}

} // namespace

TEST_CASE("optimal allocation examples") {
    const auto g = gen_eqx_cof(2, Rational(100));
    const auto s = optimal_allocation(g.instance);
    CHECK(s.allocation == Allocation({{1, 2}, {0}}));
    CHECK(s.social_cost == 4);

    const Instance same = make({{"1/3", "1/3", "1/3"}, {"1/3", "1/3", "1/3"}});
    CHECK(optimal_allocation(same).allocation == Allocation({{0, 1, 2}, {}}));
    CHECK(optimal_allocation(same).social_cost == 1);

    const auto c = gen_eq1_cof(2, make_rational(1, 100));
    CHECK(optimal_allocation(c.instance).allocation == Allocation({{0, 1}, {2}}));
    CHECK(optimal_allocation(c.instance).social_cost == make_rational(2, 100));
}

TEST_CASE("optimal allocation matches exhaustive search") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 3;
        const std::size_t m = 1 + rng() % 8;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 8);
        CHECK(optimal_allocation(in).social_cost == oracle_ref::brute_opt(in, std::nullopt)->sc);
    }
}

TEST_CASE("eq1_bounded hand example") {
    const Instance in = make({{"1/2", "1/2"}, {"1/2", "1/2"}});
    const auto r = eq1_bounded(in);
    CHECK(r.trace.initial == Allocation({{0, 1}, {}}));
    REQUIRE(r.trace.rounds.size() == 1);
    CHECK(r.trace.rounds[0].giver == 0);
    CHECK(r.trace.rounds[0].item == 0);
    CHECK(r.trace.rounds[0].receiver == 1);
    CHECK(r.allocation == Allocation({{1}, {0}}));
    CHECK(r.social_cost == 1);
    CHECK(satisfies(in, r.allocation, Criterion::EQ1));
}

TEST_CASE("eq1_bounded keeps an already fair optimum") {
    const Instance in = make({{"1/2", "1/2", "0"}, {"0", "1/2", "1/2"}});
    const auto r = eq1_bounded(in);
    CHECK(r.trace.rounds.empty());
    CHECK(r.allocation == optimal_allocation(in).allocation);
}

TEST_CASE("eq1_bounded requires normalization") {
    CHECK_THROWS_AS(eq1_bounded(make({{"1", "1"}, {"1", "1"}})), NotNormalized);
    CHECK_THROWS_AS(ef1_bounded(make({{"1", "1"}, {"1", "1"}})), NotNormalized);
}

TEST_CASE("eq1_bounded sweep with trace invariants") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t m = 1 + rng() % 12;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 1 + rng() % 30);
        const auto r = eq1_bounded(in);
        CAPTURE(t);
        CHECK(oracle_ref::holds(in, r.allocation, Criterion::EQ1));
        CHECK(r.social_cost <= 1);
        CHECK(r.social_cost == social_cost(in, r.allocation));
        CHECK(r.social_cost >= optimal_allocation(in).social_cost);
        CHECK(r.trace.rounds.size() <= 2 * n * m);
        CHECK(r.trace.initial == optimal_allocation(in).allocation);

        const auto g0 = build_violation_graph(in, r.trace.initial);
        std::vector<bool> in_n0(n, false);
        for (AgentId i : g0.n0) in_n0[i] = true;
        Rational prev = r.trace.initial_min_agent_cost;
        CHECK(prev == min_agent_cost(in, r.trace.initial));
        for (const auto& round : r.trace.rounds) {
            CHECK(round.min_agent_cost >= prev);
            CHECK(round.min_agent_cost == min_agent_cost(in, round.allocation));
            prev = round.min_agent_cost;
            const auto g = build_violation_graph(in, round.allocation);
            for (AgentId i = 0; i < n; ++i) {
                if (in_n0[i]) CHECK(std::find(g.n0.begin(), g.n0.end(), i) != g.n0.end());
                if (g0.in_degree(i) == 0) CHECK(g.in_degree(i) == 0);
            }
        }
        if (!r.trace.rounds.empty()) CHECK(r.trace.rounds.back().allocation == r.allocation);
    }
}

TEST_CASE("eq1_bounded move rule") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 4;
        const std::size_t m = 1 + rng() % 9;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 12);
        const auto r = eq1_bounded(in);
        Allocation cur = r.trace.initial;
        for (const auto& round : r.trace.rounds) {
            const auto g = build_violation_graph(in, cur);
            // giver: N1 agent with the largest c_i(A_i) - max item, lowest index on ties
            std::optional<AgentId> giver;
            Rational best;
            for (AgentId i : g.n1) {
                Rational top = 0;
                for (ItemId o : cur.bundle(i)) top = std::max(top, in.cost(i, o));
                const Rational v = agent_cost(in, cur, i) - top;
                if (!giver || v > best) {
                    giver = i;
                    best = v;
                }
            }
            REQUIRE(giver);
            CHECK(round.giver == *giver);
            CHECK(round.item == cur.bundle(*giver).front());
            AgentId recv = g.n2.front();
            for (AgentId j : g.n2)
                if (in.cost(j, round.item) < in.cost(recv, round.item)) recv = j;
            CHECK(round.receiver == recv);
            cur.move_item(round.item, round.giver, round.receiver);
            CHECK(cur == round.allocation);
        }
        CHECK(build_violation_graph(in, cur).n1.empty());
    }
}

TEST_CASE("round robin examples") {
    const Instance same = make({{"1/2", "1/2"}, {"1/2", "1/2"}});
    CHECK(round_robin(same, {0, 1}) == Allocation({{0}, {1}}));

    const Instance in = make({{"6/10", "4/10"}, {"3/10", "7/10"}});
    const Allocation a = round_robin(in, {0, 1});
    CHECK(a == Allocation({{1}, {0}}));
    CHECK(social_cost(in, a) == make_rational(7, 10));
    CHECK(satisfies(in, a, Criterion::EF1));

    const Instance few = make({{"1"}, {"1"}, {"1"}});
    const Allocation b = round_robin(few, {2, 0, 1});
    CHECK(b == Allocation({{}, {}, {0}}));
    CHECK(satisfies(few, b, Criterion::EF1));
}

TEST_CASE("round robin rejects bad orders") {
    const Instance in = make({{"1/2", "1/2"}, {"1/2", "1/2"}});
    CHECK_THROWS_AS(round_robin(in, {0, 0}), InvalidPermutation);
    CHECK_THROWS_AS(round_robin(in, {0}), InvalidPermutation);
    CHECK_THROWS_AS(round_robin(in, {0, 2}), InvalidPermutation);
}

TEST_CASE("cyclic shifts") {
    CHECK(cyclic_shift(3, 0) == std::vector<AgentId>{0, 1, 2});
    CHECK(cyclic_shift(3, 1) == std::vector<AgentId>{1, 2, 0});
    CHECK(cyclic_shift(3, 2) == std::vector<AgentId>{2, 0, 1});
}

TEST_CASE("ef1_bounded examples") {
    const Instance same = make({{"1/2", "1/2"}, {"1/2", "1/2"}});
    const auto r = ef1_bounded(same);
    CHECK(r.shift == 0);
    CHECK(r.social_cost == 1);
    CHECK(r.shifts.size() == 2);

    const auto g = gen_ef1_cof(2, 4, make_rational(1, 100));
    const auto e = ef1_bounded(g.instance);
    CHECK(satisfies(g.instance, e.allocation, Criterion::EF1));
    CHECK(e.social_cost <= 1);
    CHECK(e.social_cost == make_rational(7, 25));
}

TEST_CASE("round robin bounds and ef1_bounded sweep") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t m = 1 + rng() % 12;
        const Instance in = oracle_ref::random_normalized(n, m, rng(), 1 + rng() % 30);
        const auto r = ef1_bounded(in);
        CAPTURE(t);
        CHECK(oracle_ref::holds(in, r.allocation, Criterion::EF1));
        CHECK(r.social_cost <= 1);
        REQUIRE(r.shifts.size() == n);
        Rational total_bounds = 0;
        Rational best = r.shifts[0].social_cost;
        std::size_t best_shift = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const auto& out = r.shifts[s];
            CHECK(out.order == cyclic_shift(n, s));
            CHECK(out.allocation == round_robin(in, out.order));
            CHECK(oracle_ref::holds(in, out.allocation, Criterion::EF1));
            for (std::size_t k = 0; k < n; ++k) {
                const AgentId agent = out.order[k];
                const Rational bound = round_robin_bound(in, agent, k);
                CHECK(bound == bound_ref(in, agent, k));
                CHECK(agent_cost(in, out.allocation, agent) <= bound);
                total_bounds += bound;
            }
            if (out.social_cost < best) {
                best = out.social_cost;
                best_shift = s;
            }
        }
        if (m > 0) CHECK(total_bounds == n);
        CHECK(r.shift == best_shift);
        CHECK(r.social_cost == best);
    }
}
