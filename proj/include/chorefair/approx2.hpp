#pragma once

#include "chorefair/algorithms.hpp"
#include "chorefair/core.hpp"
#include "chorefair/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace chorefair {

// ---------------------------------------------------------------------------
// SC-EQ1 for two agents: districts + box LP + rounding
// ---------------------------------------------------------------------------

// An item is BIG when some agent's cost for it exceeds eps.
struct ItemClass {
    std::vector<bool> big;
    std::vector<ItemId> big_items;
    std::vector<ItemId> small_items;
};

// Requires n = 2, a normalized instance and eps > 0. Throws WrongAgentCount,
// NotNormalized or ParameterError.
ItemClass classify_items(const Instance& instance, const Rational& eps);

// One cell of the allocation space: big items fixed by `big_mask` (bit k set
// means big_items[k] goes to agent 1, clear means agent 0), `removable` held
// by `designated`, small items free.
struct District {
    AgentId designated = 0;
    ItemId removable = 0;
    std::uint64_t big_mask = 0;
    std::vector<ItemId> big_items;
    std::vector<AgentId> big_owner;  // parallel to big_items
    Rational designated_fixed;       // a1: designated agent's big items, excluding `removable`
    Rational other_fixed;            // a2: other agent's big items
    std::vector<ItemId> smalls;      // small items other than `removable`

    AgentId other() const { return 1 - designated; }
};

// nullopt when `removable` is big and the mask hands it to the other agent.
std::optional<District> make_district(const Instance& instance, const ItemClass& classes,
                                      AgentId designated, ItemId removable, std::uint64_t big_mask);

// x[j] is the fraction of smalls[j] given to the designated agent.
struct DistrictLPSolution {
    std::vector<Rational> x;
    Rational objective;  // small-item cost
    std::optional<std::size_t> fractional_index;
};

// Exact optimal vertex of
//   min  sum c_d(s_j) x_j + sum c_t(s_j) (1 - x_j)
//   s.t. a1 + sum c_d(s_j) x_j <= a2 + sum c_t(s_j) (1 - x_j)
//        a2 + sum c_t(s_j) (1 - x_j) <= a1 + c_d(removable) + sum c_d(s_j) x_j
//        0 <= x_j <= 1
// where d is the designated agent and t the other one. Both constraints
// bound the single quantity sum (c_d + c_t)(s_j) x_j, so the LP is a
// fractional knapsack and the greedy optimum has at most one fractional
// coordinate. nullopt when infeasible.
std::optional<DistrictLPSolution> solve_district(const Instance& instance, const District& district);

// Honors integral coordinates and places the fractional item (if any) so
// that the completed allocation is EQ1.
Allocation round_district(const Instance& instance, const District& district,
                          const DistrictLPSolution& lp);

struct SchemeResult {
    Allocation allocation;
    Rational social_cost;
    std::size_t districts = 0;           // districts enumerated
    std::size_t feasible_districts = 0;  // with a feasible LP
    District best;
};

// Enumerates every (designated agent, removable item, big assignment) in
// that key order, rounds each feasible LP and keeps the cheapest
// representative (first in key order on ties). EQ1 with social cost at most
// OPT^EQ1 + eps. Throws BudgetExceeded when 2m * 2^|BIG| > budget.
SchemeResult eq1_scheme(const Instance& instance, const Rational& eps,
                        std::uint64_t budget = kDefaultBudget);

// ---------------------------------------------------------------------------
// SC-EF1 for two agents via the goods/chores mirror
// ---------------------------------------------------------------------------

// Goods valuations, equal entrywise to the chore costs they came from.
struct GoodsInstance {
    Instance valuations;
};

GoodsInstance dual_transform(const Instance& instance);
// Swaps the two bundles. Throws WrongAgentCount.
Allocation mirror(const Allocation& allocation);

Rational social_welfare(const GoodsInstance& goods, const Allocation& allocation);
// Goods EF1: v_i(A_i) >= v_i(A_j \ {o}) for some o in A_j, for all i, j.
bool goods_ef1(const GoodsInstance& goods, const Allocation& allocation);

struct GoodsSolution {
    Allocation allocation;
    Rational welfare;
};

// A SW-EF1 goods solver: must return a goods-EF1 allocation with welfare of
// at least (1 - eps_prime) times the best goods-EF1 welfare.
using GoodsSolver = std::function<Allocation(const GoodsInstance&, const Rational& eps_prime)>;

// Exhaustive maximum welfare over goods-EF1 allocations (2^m search;
// lexicographically smallest assignment on ties).
GoodsSolution sw_ef1_goods_exact(const GoodsInstance& goods, std::uint64_t budget = kDefaultBudget);

// Runs a plug-in solver and checks its output is a goods-EF1 partition.
// Throws PlugContractError otherwise.
GoodsSolution sw_ef1_goods(const GoodsInstance& goods, const Rational& eps_prime,
                           const GoodsSolver& solver);

// Mirrors the goods-EF1 welfare optimum back into a chores EF1 allocation.
// Without a plug solver the exact goods solver runs and the result is the
// chores EF1 optimum; with one, eps' = eps / 2 is passed through and the
// result is within eps of it.
Solution ef1_scheme(const Instance& instance, const Rational& eps = 0,
                    const GoodsSolver* plug = nullptr, std::uint64_t budget = kDefaultBudget);

} // namespace chorefair
