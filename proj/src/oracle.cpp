#include "chorefair/oracle.hpp"

#include "chorefair/algorithms.hpp"
#include "chorefair/errors.hpp"

#include <algorithm>
#include <thread>

namespace chorefair {

std::uint64_t allocation_count(std::size_t agents, std::size_t items, std::uint64_t budget) {
    std::uint64_t count = 1;
    bool overflow = false;
    for (std::size_t k = 0; k < items; ++k) {
        if (agents != 0 && count > UINT64_MAX / agents) {
            overflow = true;
            break;
        }
        count *= agents;
    }
    if (overflow || count > budget) {
        Integer exact;
        mpz_ui_pow_ui(exact.get_mpz_t(), agents, items);
        throw BudgetExceeded("search needs " + exact.get_str() + " = " + std::to_string(agents) + "^" +
                             std::to_string(items) + " allocations, budget is " +
                             std::to_string(budget));
    }
    return count;
}

AllocationEnumerator::AllocationEnumerator(std::size_t agents, std::size_t items, std::uint64_t budget)
    : agents_(agents), assignment_(items, 0), count_(allocation_count(agents, items, budget)) {
    done_ = count_ == 0;
}

bool AllocationEnumerator::next() {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        return true;
    }
    // odometer increment, last item fastest
    for (std::size_t k = assignment_.size(); k-- > 0;) {
        if (++assignment_[k] < agents_) return true;
        assignment_[k] = 0;
    }
    done_ = true;
    return false;
}

namespace {

struct Candidate {
    Rational social_cost;
    std::vector<AgentId> assignment;
};

bool better(const Candidate& a, const std::optional<Candidate>& b) {
    if (!b) return true;
    if (a.social_cost != b->social_cost) return a.social_cost < b->social_cost;
    return a.assignment < b->assignment;
}

// Depth-first enumeration in lexicographic order with incremental bundle
// costs. The first item's agent is restricted to `first_agents`.
class Search {
public:
    Search(const Instance& instance, Criterion criterion)
        : instance_(instance), criterion_(criterion), n_(instance.agents()), m_(instance.items()),
          table_(n_, std::vector<Rational>(n_)), assignment_(m_), own_max_(n_), own_min_(n_) {}

    std::optional<Candidate> run(const std::vector<AgentId>& first_agents) {
        best_.reset();
        social_cost_ = 0;
        if (m_ == 0) {
            evaluate();
        } else {
            for (AgentId a : first_agents) descend(0, a);
        }
        return std::move(best_);
    }

private:
    void descend(ItemId item, AgentId agent) {
        assignment_[item] = agent;
        for (AgentId v = 0; v < n_; ++v) table_[v][agent] += instance_.cost(v, item);
        social_cost_ += instance_.cost(agent, item);
        if (item + 1 == m_) {
            evaluate();
        } else {
            for (AgentId next = 0; next < n_; ++next) descend(item + 1, next);
        }
        for (AgentId v = 0; v < n_; ++v) table_[v][agent] -= instance_.cost(v, item);
        social_cost_ -= instance_.cost(agent, item);
    }

    void evaluate() {
        // enumeration is lexicographic, so an equal cost never wins
        if (best_ && social_cost_ >= best_->social_cost) return;
        if (!fair()) return;
        best_ = Candidate{social_cost_, assignment_};
    }

    bool fair() {
        switch (criterion_) {
        case Criterion::EQ:
            for (AgentId i = 1; i < n_; ++i) {
                if (table_[i][i] != table_[0][0]) return false;
            }
            return true;
        case Criterion::EF:
            for (AgentId i = 0; i < n_; ++i) {
                for (AgentId j = 0; j < n_; ++j) {
                    if (table_[i][i] > table_[i][j]) return false;
                }
            }
            return true;
        default:
            break;
        }
        std::fill(own_max_.begin(), own_max_.end(), nullptr);
        std::fill(own_min_.begin(), own_min_.end(), nullptr);
        for (ItemId o = 0; o < m_; ++o) {
            const AgentId a = assignment_[o];
            const Rational& c = instance_.cost(a, o);
            if (!own_max_[a] || c > *own_max_[a]) own_max_[a] = &c;
            if (!own_min_[a] || c < *own_min_[a]) own_min_[a] = &c;
        }
        for (AgentId i = 0; i < n_; ++i) {
            if (!own_max_[i]) continue;
            reduced_ = table_[i][i];
            reduced_ -= criterion_ == Criterion::EQX ? *own_min_[i] : *own_max_[i];
            for (AgentId j = 0; j < n_; ++j) {
                if (j == i) continue;
                const Rational& other = criterion_ == Criterion::EF1 ? table_[i][j] : table_[j][j];
                if (reduced_ > other) return false;
            }
        }
        return true;
    }

    const Instance& instance_;
    Criterion criterion_;
    std::size_t n_;
    std::size_t m_;
    std::vector<std::vector<Rational>> table_;
    std::vector<AgentId> assignment_;
    std::vector<const Rational*> own_max_;
    std::vector<const Rational*> own_min_;
    Rational social_cost_;
    Rational reduced_;
    std::optional<Candidate> best_;
};

} // namespace

std::optional<FairOptimum> find_opt_fair(const Instance& instance, Criterion criterion,
                                         const SearchOptions& options) {
    const std::size_t n = instance.agents();
    const std::size_t m = instance.items();
    if (allocation_count(n, m, options.budget) == 0) return std::nullopt;

    const std::size_t workers = m == 0 ? 1 : std::clamp<std::size_t>(options.workers, 1, n);
    std::vector<std::vector<AgentId>> prefixes(workers);
    for (AgentId a = 0; a < (m == 0 ? 1 : n); ++a) prefixes[a % workers].push_back(a);

    std::vector<std::optional<Candidate>> partial(workers);
    if (workers == 1) {
        partial[0] = Search(instance, criterion).run(prefixes[0]);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] { partial[w] = Search(instance, criterion).run(prefixes[w]); });
        }
        for (auto& t : threads) t.join();
    }

    std::optional<Candidate> best;
    for (auto& p : partial) {
        if (p && better(*p, best)) best = std::move(p);
    }
    if (!best) return std::nullopt;
    return FairOptimum{Allocation::from_assignment(n, best->assignment), std::move(best->assignment),
                       std::move(best->social_cost)};
}

FairOptimum opt_fair(const Instance& instance, Criterion criterion, const SearchOptions& options) {
    auto result = find_opt_fair(instance, criterion, options);
    if (!result) {
        throw NoFairAllocation("no " + std::string(to_string(criterion)) + " allocation exists");
    }
    return std::move(*result);
}

GapReport cof_gap(const Instance& instance, Criterion criterion, const SearchOptions& options) {
    GapReport report;
    report.criterion = criterion;
    report.opt_unconstrained = optimal_allocation(instance).social_cost;
    auto fair = find_opt_fair(instance, criterion, options);
    if (!fair) return report;
    report.opt_fair = fair->social_cost;
    report.gap = fair->social_cost - report.opt_unconstrained;
    if (sgn(report.opt_unconstrained) > 0) {
        report.ratio = fair->social_cost / report.opt_unconstrained;
    } else if (sgn(fair->social_cost) == 0) {
        report.ratio = Rational(1);
    } else {
        report.ratio_infinite = true;
    }
    report.witness = std::move(fair->allocation);
    return report;
}

} // namespace chorefair
