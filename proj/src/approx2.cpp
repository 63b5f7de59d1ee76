#include "chorefair/approx2.hpp"

#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chorefair {

namespace {

void require_two_agents(const Instance& instance) {
    if (instance.agents() != 2) {
        throw WrongAgentCount("two-agent scheme called with " + std::to_string(instance.agents()) +
                              " agents");
    }
}

} // namespace

ItemClass classify_items(const Instance& instance, const Rational& eps) {
    require_two_agents(instance);
    require_normalized(instance);
    if (sgn(eps) <= 0) throw ParameterError("eps must be positive, got " + to_string(eps));

    ItemClass classes;
    classes.big.assign(instance.items(), false);
    for (ItemId o = 0; o < instance.items(); ++o) {
        if (instance.cost(0, o) > eps || instance.cost(1, o) > eps) {
            classes.big[o] = true;
            classes.big_items.push_back(o);
        } else {
            classes.small_items.push_back(o);
        }
    }
    // each agent has total cost 1, so fewer than 1/eps items exceed eps for her
    const Integer limit = Integer(eps.get_den() * 2) / Integer(eps.get_num());
    if (Integer(static_cast<unsigned long>(classes.big_items.size())) > limit) {
        throw std::logic_error("more than 2/eps big items on a normalized instance");
    }
    return classes;
}

std::optional<District> make_district(const Instance& instance, const ItemClass& classes,
                                      AgentId designated, ItemId removable, std::uint64_t big_mask) {
    District d;
    d.designated = designated;
    d.removable = removable;
    d.big_mask = big_mask;
    d.designated_fixed = 0;
    d.other_fixed = 0;
    d.big_items = classes.big_items;
    d.big_owner.resize(classes.big_items.size());
    for (std::size_t k = 0; k < classes.big_items.size(); ++k) {
        const ItemId o = classes.big_items[k];
        const AgentId owner = (big_mask >> k) & 1U;
        d.big_owner[k] = owner;
        if (o == removable) {
            if (owner != designated) return std::nullopt;
            continue;
        }
        if (owner == designated) {
            d.designated_fixed += instance.cost(owner, o);
        } else {
            d.other_fixed += instance.cost(owner, o);
        }
    }
    for (ItemId o : classes.small_items) {
        if (o != removable) d.smalls.push_back(o);
    }
    return d;
}

std::optional<DistrictLPSolution> solve_district(const Instance& instance, const District& district) {
    const AgentId des = district.designated;
    const AgentId oth = district.other();
    const std::size_t k = district.smalls.size();

    std::vector<Rational> weight(k);  // c_d + c_t: coefficient in both constraints
    std::vector<Rational> gain(k);    // c_d - c_t: objective slope
    Rational other_total = 0;
    Rational weight_total = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const ItemId s = district.smalls[j];
        weight[j] = instance.cost(des, s) + instance.cost(oth, s);
        gain[j] = instance.cost(des, s) - instance.cost(oth, s);
        other_total += instance.cost(oth, s);
        weight_total += weight[j];
    }
    // lo <= sum weight_j x_j <= hi
    const Rational hi = district.other_fixed - district.designated_fixed + other_total;
    const Rational lo = hi - instance.cost(des, district.removable);
    if (sgn(hi) < 0 || lo > weight_total) return std::nullopt;

    DistrictLPSolution sol;
    sol.x.assign(k, Rational(0));
    Rational load = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (sgn(gain[j]) < 0) {
            sol.x[j] = 1;
            load += weight[j];
        }
    }

    // Move `amount` of load through the candidates in order of cheapest
    // objective change per unit of load; stop with at most one split item.
    auto shift = [&](std::vector<std::size_t> candidates, Rational amount, int target) {
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t p, std::size_t q) {
            // |gain_p| / weight_p < |gain_q| / weight_q
            return abs(gain[p]) * weight[q] < abs(gain[q]) * weight[p];
        });
        for (std::size_t j : candidates) {
            if (sgn(amount) == 0) break;
            if (weight[j] <= amount) {
                sol.x[j] = target;
                amount -= weight[j];
            } else {
                const Rational part = amount / weight[j];
                sol.x[j] = target == 0 ? Rational(1 - part) : part;
                sol.fractional_index = j;
                amount = 0;
            }
        }
    };

    if (load > hi) {
        std::vector<std::size_t> held;
        for (std::size_t j = 0; j < k; ++j) {
            if (sol.x[j] == 1) held.push_back(j);
        }
        shift(std::move(held), load - hi, 0);
    } else if (load < lo) {
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < k; ++j) {
            if (sol.x[j] == 0 && sgn(weight[j]) > 0) free.push_back(j);
        }
        shift(std::move(free), lo - load, 1);
    }

    sol.objective = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const ItemId s = district.smalls[j];
        sol.objective += instance.cost(des, s) * sol.x[j] + instance.cost(oth, s) * (1 - sol.x[j]);
    }
    return sol;
}

Allocation round_district(const Instance& instance, const District& district,
                          const DistrictLPSolution& lp) {
    const AgentId des = district.designated;
    const AgentId oth = district.other();
    std::vector<std::vector<ItemId>> bundles(2);
    bundles[des].push_back(district.removable);
    for (std::size_t k = 0; k < district.big_items.size(); ++k) {
        if (district.big_items[k] != district.removable) {
            bundles[district.big_owner[k]].push_back(district.big_items[k]);
        }
    }

    Rational des_load = district.designated_fixed;  // a1 + c_d(E1)
    Rational oth_load = district.other_fixed;       // a2 + c_t(E2)
    for (std::size_t j = 0; j < district.smalls.size(); ++j) {
        if (lp.fractional_index && *lp.fractional_index == j) continue;
        const ItemId s = district.smalls[j];
        if (lp.x[j] == 1) {
            bundles[des].push_back(s);
            des_load += instance.cost(des, s);
        } else {
            bundles[oth].push_back(s);
            oth_load += instance.cost(oth, s);
        }
    }

    if (lp.fractional_index) {
        const ItemId split = district.smalls[*lp.fractional_index];
        AgentId receiver = oth;
        if (des_load < oth_load &&
            !(des_load + instance.cost(des, district.removable) > oth_load)) {
            receiver = des;
        }
        bundles[receiver].push_back(split);
    }
    return Allocation(std::move(bundles));
}

SchemeResult eq1_scheme(const Instance& instance, const Rational& eps, std::uint64_t budget) {
    const ItemClass classes = classify_items(instance, eps);
    const std::size_t m = instance.items();
    const std::size_t big = classes.big_items.size();
    if (big >= 63 || (std::uint64_t{2} * m) > budget >> big) {
        throw BudgetExceeded("district enumeration needs 2*" + std::to_string(m) + "*2^" +
                             std::to_string(big) + " cells, budget is " + std::to_string(budget));
    }

    std::optional<SchemeResult> best;
    std::size_t districts = 0;
    std::size_t feasible = 0;
    for (AgentId des = 0; des < 2; ++des) {
        for (ItemId removable = 0; removable < m; ++removable) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << big); ++mask) {
                auto district = make_district(instance, classes, des, removable, mask);
                if (!district) continue;
                ++districts;
                auto lp = solve_district(instance, *district);
                if (!lp) continue;
                ++feasible;
                Allocation rep = round_district(instance, *district, *lp);
                Rational sc = social_cost(instance, rep);
                if (!best || sc < best->social_cost) {
                    best = SchemeResult{std::move(rep), std::move(sc), 0, 0, std::move(*district)};
                }
            }
        }
    }
    if (!best) throw std::logic_error("no feasible district; an EQ1 allocation always induces one");
    if (!satisfies(instance, best->allocation, Criterion::EQ1)) {
        throw std::logic_error("district representative is not EQ1");
    }
    best->districts = districts;
    best->feasible_districts = feasible;
    return std::move(*best);
}

GoodsInstance dual_transform(const Instance& instance) {
    require_two_agents(instance);
    return GoodsInstance{instance};
}

Allocation mirror(const Allocation& allocation) {
    if (allocation.agents() != 2) {
        throw WrongAgentCount("mirror needs two bundles, got " + std::to_string(allocation.agents()));
    }
    return Allocation({allocation.bundle(1), allocation.bundle(0)});
}

Rational social_welfare(const GoodsInstance& goods, const Allocation& allocation) {
    check_partition(goods.valuations, allocation);
    Rational total = 0;
    for (AgentId i = 0; i < goods.valuations.agents(); ++i) {
        total += bundle_cost(goods.valuations, i, allocation.bundle(i));
    }
    return total;
}

bool goods_ef1(const GoodsInstance& goods, const Allocation& allocation) {
    const Instance& v = goods.valuations;
    check_partition(v, allocation);
    for (AgentId i = 0; i < v.agents(); ++i) {
        const Rational own = bundle_cost(v, i, allocation.bundle(i));
        for (AgentId j = 0; j < v.agents(); ++j) {
            if (j == i || allocation.bundle(j).empty()) continue;
            Rational best_drop = 0;
            for (ItemId o : allocation.bundle(j)) best_drop = std::max(best_drop, v.cost(i, o));
            if (own < bundle_cost(v, i, allocation.bundle(j)) - best_drop) return false;
        }
    }
    return true;
}

GoodsSolution sw_ef1_goods_exact(const GoodsInstance& goods, std::uint64_t budget) {
    const Instance& v = goods.valuations;
    if (v.agents() != 2) {
        throw WrongAgentCount("goods solver needs two agents, got " + std::to_string(v.agents()));
    }
    AllocationEnumerator e(2, v.items(), budget);
    std::optional<GoodsSolution> best;
    while (e.next()) {
        Allocation a = e.allocation();
        if (!goods_ef1(goods, a)) continue;
        Rational w = social_welfare(goods, a);
        if (!best || w > best->welfare) best = GoodsSolution{std::move(a), std::move(w)};
    }
    // two-agent goods EF1 allocations always exist (e.g. round-robin)
    if (!best) throw std::logic_error("no goods-EF1 allocation found");
    return std::move(*best);
}

GoodsSolution sw_ef1_goods(const GoodsInstance& goods, const Rational& eps_prime,
                           const GoodsSolver& solver) {
    Allocation a = solver(goods, eps_prime);
    try {
        check_partition(goods.valuations, a);
    } catch (const StructureError& e) {
        throw PlugContractError(std::string("goods solver returned a non-partition: ") + e.what());
    }
    if (!goods_ef1(goods, a)) throw PlugContractError("goods solver returned a non-EF1 allocation");
    Rational w = social_welfare(goods, a);
    return {std::move(a), std::move(w)};
}

Solution ef1_scheme(const Instance& instance, const Rational& eps, const GoodsSolver* plug,
                    std::uint64_t budget) {
    require_two_agents(instance);
    require_normalized(instance);
    if (sgn(eps) < 0) throw ParameterError("eps must be non-negative, got " + to_string(eps));
    const GoodsInstance goods = dual_transform(instance);
    GoodsSolution best = plug ? sw_ef1_goods(goods, eps / 2, *plug) : sw_ef1_goods_exact(goods, budget);
    Allocation chores = mirror(best.allocation);
    Rational sc = social_cost(instance, chores);
    return {std::move(chores), std::move(sc)};
}

} // namespace chorefair
