#pragma once

#include "chorefair/core.hpp"

#include <vector>

namespace chorefair {

struct Solution {
    Allocation allocation;
    Rational social_cost;
};

// Every item goes to an agent of minimum cost for it, lowest index on ties.
// The result minimizes social cost over all allocations.
Solution optimal_allocation(const Instance& instance);

// One reassignment of the EQ1 repair loop, recorded after the move.
struct RoundRecord {
    AgentId giver = 0;     // i*: source of the violation graph
    ItemId item = 0;       // o': lowest-index item of the giver
    AgentId receiver = 0;  // j*: cheapest agent for o' among positive in-degree agents
    Allocation allocation; // snapshot after the move
    Rational min_agent_cost;
};

struct RoundTrace {
    Allocation initial;
    Rational initial_min_agent_cost;
    std::vector<RoundRecord> rounds;
};

struct Eq1Result {
    Allocation allocation;
    Rational social_cost;
    RoundTrace trace;
};

// Starts from optimal_allocation and repeatedly moves one item from the
// violation-graph source with the largest best-case reduced cost to the
// cheapest receiver with positive in-degree, until the graph has no arcs.
// The output is EQ1 with social cost at most 1. Throws NotNormalized.
Eq1Result eq1_bounded(const Instance& instance);

// order[k] is the agent picking k-th in every cycle (0-based agents). Each
// pick takes the picker's cheapest remaining item, lowest index on ties.
// Throws InvalidPermutation.
Allocation round_robin(const Instance& instance, const std::vector<AgentId>& order);

// c_i(M^i_k): sort agent i's items by cost (index on ties) and sum every
// n-th one starting at 0-based position k. A picker at position k of a
// round-robin order never pays more than this.
Rational round_robin_bound(const Instance& instance, AgentId agent, std::size_t position);

struct ShiftOutcome {
    std::vector<AgentId> order;
    Allocation allocation;
    Rational social_cost;
};

struct Ef1Result {
    Allocation allocation;
    Rational social_cost;
    std::size_t shift = 0;  // index into `shifts` of the chosen order
    std::vector<AgentId> order;
    std::vector<ShiftOutcome> shifts;
};

// Cyclic shifts (k, k+1, ..., n-1, 0, ..., k-1) for k = 0..n-1.
std::vector<AgentId> cyclic_shift(std::size_t agents, std::size_t shift);

// Round-robin under all n cyclic shifts, keeping the cheapest (lowest shift
// on ties). EF1 with social cost at most 1. Throws NotNormalized.
Ef1Result ef1_bounded(const Instance& instance);

} // namespace chorefair
