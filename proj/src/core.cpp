#include "chorefair/core.hpp"

#include "chorefair/errors.hpp"

#include <algorithm>
#include <cctype>

namespace chorefair {

ValidationReport validate(std::size_t agents, const CostMatrix& costs) {
    ValidationReport report;
    if (costs.size() != agents) {
        report.errors.push_back("expected " + std::to_string(agents) + " cost rows, got " +
                                std::to_string(costs.size()));
    }
    const std::size_t items = costs.empty() ? 0 : costs.front().size();
    bool all_unit = true;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i].size() != items) {
            report.errors.push_back("agent " + std::to_string(i) + " has " +
                                    std::to_string(costs[i].size()) + " costs, expected " +
                                    std::to_string(items));
        }
        Rational total = 0;
        for (std::size_t o = 0; o < costs[i].size(); ++o) {
            if (sgn(costs[i][o]) < 0) {
                report.errors.push_back("negative cost " + to_string(costs[i][o]) + " for agent " +
                                        std::to_string(i) + " on item " + std::to_string(o));
            }
            total += costs[i][o];
        }
        if (total == 0) {
            report.zero_rows.push_back(i);
            report.warnings.push_back("agent " + std::to_string(i) +
                                      " has zero total cost; normalization impossible");
        }
        if (total != 1) all_unit = false;
    }
    report.normalized = report.ok() && all_unit;
    return report;
}

Instance::Instance(CostMatrix costs, std::vector<std::string> item_names)
    : agents_(costs.size()), items_(costs.empty() ? 0 : costs.front().size()),
      costs_(std::move(costs)), item_names_(std::move(item_names)) {
    const ValidationReport report = validate(agents_, costs_);
    if (!report.ok()) throw StructureError(report.errors.front());
    if (item_names_.empty()) {
        item_names_.reserve(items_);
        for (std::size_t o = 0; o < items_; ++o) item_names_.push_back("o" + std::to_string(o + 1));
    } else if (item_names_.size() != items_) {
        throw StructureError("expected " + std::to_string(items_) + " item names, got " +
                             std::to_string(item_names_.size()));
    }
}

Instance::Instance(std::size_t agents, std::size_t items)
    : Instance(CostMatrix(agents, std::vector<Rational>(items))) {
    // a matrix with no rows cannot carry the item count
    items_ = items;
    if (agents == 0) {
        item_names_.clear();
        for (std::size_t o = 0; o < items_; ++o) item_names_.push_back("o" + std::to_string(o + 1));
    }
}

Rational Instance::row_sum(AgentId agent) const {
    Rational total = 0;
    for (const auto& c : costs_[agent]) total += c;
    return total;
}

bool Instance::is_normalized() const {
    for (AgentId i = 0; i < agents_; ++i) {
        if (row_sum(i) != 1) return false;
    }
    return true;
}

ValidationReport validate(const Instance& instance) {
    return validate(instance.agents(), instance.costs());
}

Instance normalize(const Instance& instance) {
    CostMatrix costs = instance.costs();
    for (AgentId i = 0; i < instance.agents(); ++i) {
        const Rational total = instance.row_sum(i);
        if (total == 0) {
            throw NormalizationError("agent " + std::to_string(i) +
                                     " has zero total cost; normalization impossible");
        }
        for (auto& c : costs[i]) c /= total;
    }
    return Instance(std::move(costs), instance.item_names());
}

void require_normalized(const Instance& instance) {
    for (AgentId i = 0; i < instance.agents(); ++i) {
        const Rational total = instance.row_sum(i);
        if (total != 1) {
            throw NotNormalized("agent " + std::to_string(i) + " costs sum to " + to_string(total) +
                                ", expected 1");
        }
    }
}

Instance scale(const Instance& instance, const Rational& factor) {
    if (sgn(factor) <= 0) throw StructureError("scale factor must be positive");
    CostMatrix costs = instance.costs();
    for (auto& row : costs) {
        for (auto& c : row) c *= factor;
    }
    return Instance(std::move(costs), instance.item_names());
}

Allocation::Allocation(std::vector<std::vector<ItemId>> bundles) : bundles_(std::move(bundles)) {
    for (auto& b : bundles_) std::sort(b.begin(), b.end());
}

Allocation Allocation::from_assignment(std::size_t agents, const std::vector<AgentId>& assignment) {
    std::vector<std::vector<ItemId>> bundles(agents);
    for (ItemId o = 0; o < assignment.size(); ++o) {
        if (assignment[o] >= agents) {
            throw StructureError("item " + std::to_string(o) + " assigned to unknown agent " +
                                 std::to_string(assignment[o]));
        }
        bundles[assignment[o]].push_back(o);
    }
    Allocation a;
    a.bundles_ = std::move(bundles);
    return a;
}

std::size_t Allocation::item_count() const {
    std::size_t count = 0;
    for (const auto& b : bundles_) count += b.size();
    return count;
}

std::vector<AgentId> Allocation::assignment(std::size_t items) const {
    std::vector<AgentId> owner(items, agents());
    for (AgentId i = 0; i < bundles_.size(); ++i) {
        for (ItemId o : bundles_[i]) {
            if (o >= items) throw StructureError("item " + std::to_string(o) + " out of range");
            owner[o] = i;
        }
    }
    return owner;
}

void Allocation::move_item(ItemId item, AgentId from, AgentId to) {
    auto& src = bundles_.at(from);
    auto it = std::find(src.begin(), src.end(), item);
    if (it == src.end()) {
        throw StructureError("item " + std::to_string(item) + " is not held by agent " +
                             std::to_string(from));
    }
    src.erase(it);
    auto& dst = bundles_.at(to);
    dst.insert(std::upper_bound(dst.begin(), dst.end(), item), item);
}

void check_partition(const Instance& instance, const Allocation& allocation) {
    if (allocation.agents() != instance.agents()) {
        throw StructureError("allocation has " + std::to_string(allocation.agents()) +
                             " bundles, instance has " + std::to_string(instance.agents()) +
                             " agents");
    }
    std::vector<bool> seen(instance.items(), false);
    for (const auto& bundle : allocation.bundles()) {
        for (ItemId o : bundle) {
            if (o >= instance.items()) {
                throw StructureError("item " + std::to_string(o) + " out of range");
            }
            if (seen[o]) throw StructureError("item " + std::to_string(o) + " assigned twice");
            seen[o] = true;
        }
    }
    for (ItemId o = 0; o < seen.size(); ++o) {
        if (!seen[o]) throw StructureError("item " + std::to_string(o) + " is unassigned");
    }
}

Rational bundle_cost(const Instance& instance, AgentId agent, const std::vector<ItemId>& bundle) {
    Rational total = 0;
    for (ItemId o : bundle) total += instance.cost(agent, o);
    return total;
}

Rational agent_cost(const Instance& instance, const Allocation& allocation, AgentId agent) {
    return bundle_cost(instance, agent, allocation.bundle(agent));
}

Rational social_cost(const Instance& instance, const Allocation& allocation) {
    check_partition(instance, allocation);
    Rational total = 0;
    for (AgentId i = 0; i < instance.agents(); ++i) total += agent_cost(instance, allocation, i);
    return total;
}

std::string_view to_string(Criterion criterion) {
    switch (criterion) {
    case Criterion::EQ: return "EQ";
    case Criterion::EF: return "EF";
    case Criterion::EQX: return "EQX";
    case Criterion::EQ1: return "EQ1";
    case Criterion::EF1: return "EF1";
    }
    return "?";
}

Criterion parse_criterion(std::string_view text) {
    std::string upper(text);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Criterion c : kAllCriteria) {
        if (upper == to_string(c)) return c;
    }
    throw ParseError("unknown criterion \"" + std::string(text) + "\"");
}

} // namespace chorefair
