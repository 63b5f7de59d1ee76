#pragma once

#include "chorefair/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chorefair {

using AgentId = std::size_t;
using ItemId = std::size_t;
using CostMatrix = std::vector<std::vector<Rational>>;

// Findings about a raw cost matrix. `ok()` means an Instance can be built
// from it; normalization additionally needs `zero_rows` to be empty.
struct ValidationReport {
    std::vector<std::string> errors;    // dimension mismatches, negative entries
    std::vector<std::string> warnings;  // zero rows
    std::vector<AgentId> zero_rows;
    bool normalized = false;

    bool ok() const { return errors.empty(); }
};

ValidationReport validate(std::size_t agents, const CostMatrix& costs);

// n agents x m chores with additive non-negative exact costs.
class Instance {
public:
    Instance() = default;
    // Throws StructureError when `validate` reports errors. Item names
    // default to "o1".."om".
    explicit Instance(CostMatrix costs, std::vector<std::string> item_names = {});
    Instance(std::size_t agents, std::size_t items);  // all-zero matrix

    std::size_t agents() const { return agents_; }
    std::size_t items() const { return items_; }

    const Rational& cost(AgentId agent, ItemId item) const { return costs_[agent][item]; }
    const std::vector<Rational>& row(AgentId agent) const { return costs_[agent]; }
    const CostMatrix& costs() const { return costs_; }
    const std::vector<std::string>& item_names() const { return item_names_; }

    Rational row_sum(AgentId agent) const;
    bool is_normalized() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::size_t agents_ = 0;
    std::size_t items_ = 0;
    CostMatrix costs_;
    std::vector<std::string> item_names_;
};

ValidationReport validate(const Instance& instance);

// Scales every row to sum to exactly 1. Throws NormalizationError naming
// the first agent whose row sums to zero.
Instance normalize(const Instance& instance);

// Throws NotNormalized unless every row sums to exactly 1.
void require_normalized(const Instance& instance);

// Multiplies every entry by `factor` (> 0).
Instance scale(const Instance& instance, const Rational& factor);

// An ordered partition of the items into one bundle per agent. Bundles are
// kept sorted; empty bundles are allowed.
class Allocation {
public:
    Allocation() = default;
    explicit Allocation(std::vector<std::vector<ItemId>> bundles);

    // assignment[o] = agent receiving item o
    static Allocation from_assignment(std::size_t agents, const std::vector<AgentId>& assignment);

    std::size_t agents() const { return bundles_.size(); }
    const std::vector<ItemId>& bundle(AgentId agent) const { return bundles_[agent]; }
    const std::vector<std::vector<ItemId>>& bundles() const { return bundles_; }

    std::size_t item_count() const;
    // Item -> agent vector; requires a complete partition of m items.
    std::vector<AgentId> assignment(std::size_t items) const;

    void move_item(ItemId item, AgentId from, AgentId to);

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    std::vector<std::vector<ItemId>> bundles_;
};

// Throws StructureError unless `allocation` partitions the instance's items
// among exactly instance.agents() bundles.
void check_partition(const Instance& instance, const Allocation& allocation);

Rational agent_cost(const Instance& instance, const Allocation& allocation, AgentId agent);
// Cost of `bundle` evaluated by `agent`.
Rational bundle_cost(const Instance& instance, AgentId agent, const std::vector<ItemId>& bundle);
Rational social_cost(const Instance& instance, const Allocation& allocation);

enum class Criterion { EQ, EF, EQX, EQ1, EF1 };

inline constexpr Criterion kAllCriteria[] = {Criterion::EQ, Criterion::EF, Criterion::EQX,
                                             Criterion::EQ1, Criterion::EF1};

std::string_view to_string(Criterion criterion);
// Case-insensitive; throws ParseError.
Criterion parse_criterion(std::string_view text);

} // namespace chorefair
