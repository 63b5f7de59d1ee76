#pragma once

#include "chorefair/core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace chorefair {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct SearchOptions {
    std::uint64_t budget = kDefaultBudget;  // cap on n^m assignment vectors
    std::size_t workers = 1;
};

// n^m, or BudgetExceeded (carrying the required count) when above `budget`.
std::uint64_t allocation_count(std::size_t agents, std::size_t items,
                               std::uint64_t budget = kDefaultBudget);

// Streams every allocation of m items to n agents exactly once, in
// lexicographic order of the item -> agent vector.
//
//   AllocationEnumerator e(2, 3);
//   while (e.next()) use(e.allocation());
class AllocationEnumerator {
public:
    AllocationEnumerator(std::size_t agents, std::size_t items,
                         std::uint64_t budget = kDefaultBudget);

    bool next();
    const std::vector<AgentId>& assignment() const { return assignment_; }
    Allocation allocation() const { return Allocation::from_assignment(agents_, assignment_); }
    std::uint64_t count() const { return count_; }

private:
    std::size_t agents_;
    std::vector<AgentId> assignment_;
    std::uint64_t count_;
    bool started_ = false;
    bool done_ = false;
};

struct FairOptimum {
    Allocation allocation;
    std::vector<AgentId> assignment;
    Rational social_cost;
};

// Minimum social cost over allocations satisfying `criterion`; ties go to
// the lexicographically smallest assignment vector. Identical results for
// any worker count. nullopt only for EQ / EF.
std::optional<FairOptimum> find_opt_fair(const Instance& instance, Criterion criterion,
                                         const SearchOptions& options = {});

// As find_opt_fair, throwing NoFairAllocation instead of returning nullopt.
FairOptimum opt_fair(const Instance& instance, Criterion criterion,
                     const SearchOptions& options = {});

struct GapReport {
    Criterion criterion = Criterion::EQ1;
    Rational opt_unconstrained;
    std::optional<Rational> opt_fair;  // empty: no fair allocation exists
    std::optional<Rational> gap;       // opt_fair - opt_unconstrained
    std::optional<Rational> ratio;     // opt_fair / opt_unconstrained; 1 when both are 0
    bool ratio_infinite = false;       // opt_unconstrained = 0 < opt_fair
    std::optional<Allocation> witness;
};

GapReport cof_gap(const Instance& instance, Criterion criterion, const SearchOptions& options = {});

} // namespace chorefair
