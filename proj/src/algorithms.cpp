#include "chorefair/algorithms.hpp"

#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace chorefair {

namespace {

Rational min_agent_cost(const Instance& instance, const Allocation& allocation) {
    Rational best;
    for (AgentId i = 0; i < instance.agents(); ++i) {
        Rational c = agent_cost(instance, allocation, i);
        if (i == 0 || c < best) best = std::move(c);
    }
    return best;
}

} // namespace

Solution optimal_allocation(const Instance& instance) {
    const std::size_t n = instance.agents();
    std::vector<AgentId> owner(instance.items(), 0);
    Rational total = 0;
    for (ItemId o = 0; o < instance.items(); ++o) {
        AgentId best = 0;
        for (AgentId i = 1; i < n; ++i) {
            if (instance.cost(i, o) < instance.cost(best, o)) best = i;
        }
        owner[o] = best;
        if (n > 0) total += instance.cost(best, o);
    }
    return {Allocation::from_assignment(n, owner), total};
}

Eq1Result eq1_bounded(const Instance& instance) {
    require_normalized(instance);
    const std::size_t n = instance.agents();
    const std::size_t max_rounds = 2 * n * instance.items();

    Eq1Result result;
    result.allocation = optimal_allocation(instance).allocation;
    result.trace.initial = result.allocation;
    result.trace.initial_min_agent_cost = min_agent_cost(instance, result.allocation);

    Allocation& a = result.allocation;
    for (;;) {
        const BundleCostTable table(instance, a);
        const ViolationGraph graph = build_violation_graph(table);
        if (graph.n1.empty()) break;
        if (result.trace.rounds.size() >= max_rounds) {
            throw std::logic_error("EQ1 repair loop exceeded 2nm rounds");
        }

        AgentId giver = graph.n1.front();
        Rational giver_value = table.own_cost(giver) - table.own_max_item(giver);
        for (AgentId i : graph.n1) {
            Rational v = table.own_cost(i) - table.own_max_item(i);
            if (v > giver_value) {
                giver = i;
                giver_value = std::move(v);
            }
        }
        const ItemId item = a.bundle(giver).front();

        AgentId receiver = graph.n2.front();
        for (AgentId j : graph.n2) {
            if (instance.cost(j, item) < instance.cost(receiver, item)) receiver = j;
        }

        a.move_item(item, giver, receiver);
        result.trace.rounds.push_back({giver, item, receiver, a, min_agent_cost(instance, a)});
    }
    result.social_cost = social_cost(instance, a);
    return result;
}

Allocation round_robin(const Instance& instance, const std::vector<AgentId>& order) {
    const std::size_t n = instance.agents();
    std::vector<bool> seen(n, false);
    if (order.size() != n) {
        throw InvalidPermutation("order has " + std::to_string(order.size()) + " entries, expected " +
                                 std::to_string(n));
    }
    for (AgentId a : order) {
        if (a >= n || seen[a]) throw InvalidPermutation("order is not a permutation of the agents");
        seen[a] = true;
    }

    std::vector<bool> taken(instance.items(), false);
    std::vector<std::vector<ItemId>> bundles(n);
    std::size_t remaining = instance.items();
    for (std::size_t turn = 0; remaining > 0; ++turn) {
        const AgentId picker = order[turn % n];
        std::optional<ItemId> pick;
        for (ItemId o = 0; o < instance.items(); ++o) {
            if (taken[o]) continue;
            if (!pick || instance.cost(picker, o) < instance.cost(picker, *pick)) pick = o;
        }
        taken[*pick] = true;
        bundles[picker].push_back(*pick);
        --remaining;
    }
    return Allocation(std::move(bundles));
}

Rational round_robin_bound(const Instance& instance, AgentId agent, std::size_t position) {
    std::vector<ItemId> sorted(instance.items());
    std::iota(sorted.begin(), sorted.end(), 0);
    std::stable_sort(sorted.begin(), sorted.end(), [&](ItemId x, ItemId y) {
        return instance.cost(agent, x) < instance.cost(agent, y);
    });
    Rational total = 0;
    for (std::size_t k = position; k < sorted.size(); k += instance.agents()) {
        total += instance.cost(agent, sorted[k]);
    }
    return total;
}

std::vector<AgentId> cyclic_shift(std::size_t agents, std::size_t shift) {
    std::vector<AgentId> order(agents);
    for (std::size_t k = 0; k < agents; ++k) order[k] = (shift + k) % agents;
    return order;
}

Ef1Result ef1_bounded(const Instance& instance) {
    require_normalized(instance);
    Ef1Result result;
    for (std::size_t s = 0; s < instance.agents(); ++s) {
        ShiftOutcome outcome;
        outcome.order = cyclic_shift(instance.agents(), s);
        outcome.allocation = round_robin(instance, outcome.order);
        outcome.social_cost = social_cost(instance, outcome.allocation);
        if (s == 0 || outcome.social_cost < result.social_cost) {
            result.shift = s;
            result.allocation = outcome.allocation;
            result.social_cost = outcome.social_cost;
            result.order = outcome.order;
        }
        result.shifts.push_back(std::move(outcome));
    }
    return result;
}

} // namespace chorefair
