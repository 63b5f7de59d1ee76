#pragma once

#include "chorefair/core.hpp"

#include <vector>

namespace chorefair {

// c_i(A_j) for every ordered pair plus the extreme own-item costs, which is
// all the fairness predicates need:
//   min_{o in A_i} c_i(A_i \ {o}) = c_i(A_i) - max_{o in A_i} c_i(o)
//   max_{o in A_i} c_i(A_i \ {o}) = c_i(A_i) - min_{o in A_i} c_i(o)
class BundleCostTable {
public:
    BundleCostTable(const Instance& instance, const Allocation& allocation);

    std::size_t agents() const { return own_max_.size(); }
    // c_viewer(A_owner)
    const Rational& cost(AgentId viewer, AgentId owner) const { return table_[viewer][owner]; }
    const Rational& own_cost(AgentId agent) const { return table_[agent][agent]; }
    bool empty_bundle(AgentId agent) const { return empty_[agent]; }
    // Most / least expensive item of the agent's own bundle (0 when empty).
    const Rational& own_max_item(AgentId agent) const { return own_max_[agent]; }
    const Rational& own_min_item(AgentId agent) const { return own_min_[agent]; }

    bool satisfies(Criterion criterion) const;

private:
    std::vector<std::vector<Rational>> table_;
    std::vector<Rational> own_max_;
    std::vector<Rational> own_min_;
    std::vector<bool> empty_;
};

// Throws StructureError when the allocation is not a partition of the items.
bool satisfies(const Instance& instance, const Allocation& allocation, Criterion criterion);

// Arc (i, j) iff A_i is non-empty and c_i(A_i \ {o}) > c_j(A_j) for every
// o in A_i. n0 / n1 / n2 classify agents by degree.
struct ViolationGraph {
    std::vector<std::vector<bool>> arcs;
    std::vector<AgentId> n0;  // no arcs in or out
    std::vector<AgentId> n1;  // sources: in-degree 0, out-degree > 0
    std::vector<AgentId> n2;  // positive in-degree

    std::size_t agents() const { return arcs.size(); }
    bool has_arc(AgentId from, AgentId to) const { return arcs[from][to]; }
    bool empty() const { return n1.empty() && n2.empty(); }
    std::size_t in_degree(AgentId agent) const;
    std::size_t out_degree(AgentId agent) const;
};

ViolationGraph build_violation_graph(const Instance& instance, const Allocation& allocation);
ViolationGraph build_violation_graph(const BundleCostTable& table);

// Structural properties every violation graph has.
bool is_acyclic(const ViolationGraph& graph);
bool is_transitive(const ViolationGraph& graph);
bool every_n2_has_n1_in_neighbor(const ViolationGraph& graph);

struct ImplicationReport {
    bool eq = false;
    bool ef = false;
    bool eqx = false;
    bool eq1 = false;
    bool ef1 = false;
    // EQ => EQX => EQ1 and EF => EF1
    bool implications_hold = false;

    bool value(Criterion criterion) const;
};

ImplicationReport implication_check(const Instance& instance, const Allocation& allocation);

} // namespace chorefair
