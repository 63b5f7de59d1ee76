#include "chorefair/fairness.hpp"

namespace chorefair {

BundleCostTable::BundleCostTable(const Instance& instance, const Allocation& allocation) {
    check_partition(instance, allocation);
    const std::size_t n = instance.agents();
    table_.assign(n, std::vector<Rational>(n));
    own_max_.assign(n, Rational(0));
    own_min_.assign(n, Rational(0));
    empty_.assign(n, true);
    for (AgentId owner = 0; owner < n; ++owner) {
        for (ItemId o : allocation.bundle(owner)) {
            for (AgentId viewer = 0; viewer < n; ++viewer) table_[viewer][owner] += instance.cost(viewer, o);
            const Rational& c = instance.cost(owner, o);
            if (empty_[owner]) {
                own_max_[owner] = c;
                own_min_[owner] = c;
                empty_[owner] = false;
            } else {
                if (c > own_max_[owner]) own_max_[owner] = c;
                if (c < own_min_[owner]) own_min_[owner] = c;
            }
        }
    }
}

bool BundleCostTable::satisfies(Criterion criterion) const {
    const std::size_t n = agents();
    switch (criterion) {
    case Criterion::EQ:
        for (AgentId i = 1; i < n; ++i) {
            if (own_cost(i) != own_cost(0)) return false;
        }
        return true;
    case Criterion::EF:
        for (AgentId i = 0; i < n; ++i) {
            for (AgentId j = 0; j < n; ++j) {
                if (own_cost(i) > cost(i, j)) return false;
            }
        }
        return true;
    case Criterion::EQX:
    case Criterion::EQ1:
    case Criterion::EF1:
        break;
    }
    for (AgentId i = 0; i < n; ++i) {
        if (empty_[i]) continue;
        const Rational reduced =
            own_cost(i) - (criterion == Criterion::EQX ? own_min_[i] : own_max_[i]);
        for (AgentId j = 0; j < n; ++j) {
            if (j == i) continue;
            const Rational& other = criterion == Criterion::EF1 ? cost(i, j) : own_cost(j);
            if (reduced > other) return false;
        }
    }
    return true;
}

bool satisfies(const Instance& instance, const Allocation& allocation, Criterion criterion) {
    return BundleCostTable(instance, allocation).satisfies(criterion);
}

std::size_t ViolationGraph::in_degree(AgentId agent) const {
    std::size_t d = 0;
    for (AgentId i = 0; i < agents(); ++i) d += arcs[i][agent] ? 1 : 0;
    return d;
}

std::size_t ViolationGraph::out_degree(AgentId agent) const {
    std::size_t d = 0;
    for (AgentId j = 0; j < agents(); ++j) d += arcs[agent][j] ? 1 : 0;
    return d;
}

ViolationGraph build_violation_graph(const BundleCostTable& table) {
    const std::size_t n = table.agents();
    ViolationGraph graph;
    graph.arcs.assign(n, std::vector<bool>(n, false));
    for (AgentId i = 0; i < n; ++i) {
        if (table.empty_bundle(i)) continue;
        const Rational best_reduced = table.own_cost(i) - table.own_max_item(i);
        for (AgentId j = 0; j < n; ++j) {
            if (j != i && best_reduced > table.own_cost(j)) graph.arcs[i][j] = true;
        }
    }
    for (AgentId a = 0; a < n; ++a) {
        if (graph.in_degree(a) > 0) {
            graph.n2.push_back(a);
        } else if (graph.out_degree(a) > 0) {
            graph.n1.push_back(a);
        } else {
            graph.n0.push_back(a);
        }
    }
    return graph;
}

ViolationGraph build_violation_graph(const Instance& instance, const Allocation& allocation) {
    return build_violation_graph(BundleCostTable(instance, allocation));
}

bool is_acyclic(const ViolationGraph& graph) {
    // Kahn's algorithm
    const std::size_t n = graph.agents();
    std::vector<std::size_t> indeg(n);
    std::vector<AgentId> ready;
    for (AgentId a = 0; a < n; ++a) {
        indeg[a] = graph.in_degree(a);
        if (indeg[a] == 0) ready.push_back(a);
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const AgentId a = ready.back();
        ready.pop_back();
        ++removed;
        for (AgentId b = 0; b < n; ++b) {
            if (graph.arcs[a][b] && --indeg[b] == 0) ready.push_back(b);
        }
    }
    return removed == n;
}

bool is_transitive(const ViolationGraph& graph) {
    const std::size_t n = graph.agents();
    for (AgentId x = 0; x < n; ++x) {
        for (AgentId y = 0; y < n; ++y) {
            if (!graph.arcs[x][y]) continue;
            for (AgentId z = 0; z < n; ++z) {
                if (z != x && graph.arcs[y][z] && !graph.arcs[x][z]) return false;
            }
        }
    }
    return true;
}

bool every_n2_has_n1_in_neighbor(const ViolationGraph& graph) {
    for (AgentId q : graph.n2) {
        bool found = false;
        for (AgentId p : graph.n1) found = found || graph.arcs[p][q];
        if (!found) return false;
    }
    return true;
}

bool ImplicationReport::value(Criterion criterion) const {
    switch (criterion) {
    case Criterion::EQ: return eq;
    case Criterion::EF: return ef;
    case Criterion::EQX: return eqx;
    case Criterion::EQ1: return eq1;
    case Criterion::EF1: return ef1;
    }
    return false;
}

ImplicationReport implication_check(const Instance& instance, const Allocation& allocation) {
    const BundleCostTable table(instance, allocation);
    ImplicationReport r;
    r.eq = table.satisfies(Criterion::EQ);
    r.ef = table.satisfies(Criterion::EF);
    r.eqx = table.satisfies(Criterion::EQX);
    r.eq1 = table.satisfies(Criterion::EQ1);
    r.ef1 = table.satisfies(Criterion::EF1);
    r.implications_hold = (!r.eq || r.eqx) && (!r.eqx || r.eq1) && (!r.ef || r.ef1);
    return r;
}

} // namespace chorefair
