#include "chorefair/generators.hpp"

#include "chorefair/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace chorefair {

namespace {

Integer power(std::size_t base, std::size_t exponent) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
    return out;
}

Rational integer(std::int64_t v) { return make_rational(v); }

std::vector<std::string> item_names(std::initializer_list<std::pair<std::string, std::size_t>> groups) {
    std::vector<std::string> names;
    for (const auto& [prefix, count] : groups) {
        for (std::size_t j = 1; j <= count; ++j) names.push_back(prefix + std::to_string(j));
    }
    return names;
}

void check_agents(std::size_t n, std::size_t minimum) {
    if (n < minimum) {
        throw ParameterError("n must be at least " + std::to_string(minimum) + ", got " +
                             std::to_string(n));
    }
}

void check_kbound(const Rational& K, const Rational& bound, const std::string& text) {
    if (!(K > bound)) {
        throw ParameterError("K must exceed " + text + " = " + to_string(bound) + ", got " + to_string(K));
    }
}

// Part index of every value, validated against the target sum.
std::optional<std::vector<int>> certified_parts(const PartitionInput& p, int parts) {
    if (!p.labels) return std::nullopt;
    const auto& labels = *p.labels;
    if (labels.size() != p.values.size()) {
        throw ParameterError("certificate has " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(p.values.size()) + " values");
    }
    std::vector<Integer> sums(parts, Integer(0));
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] < 0 || labels[j] >= parts) {
            throw ParameterError("certificate label " + std::to_string(labels[j]) + " out of range");
        }
        sums[labels[j]] += Integer(static_cast<long>(p.values[j]));
    }
    const Integer total = std::accumulate(sums.begin(), sums.end(), Integer(0));
    for (int k = 0; k < parts; ++k) {
        if (sums[k] * parts != total) {
            throw ParameterError("certificate part " + std::to_string(k) + " sums to " +
                                 sums[k].get_str() + ", not " + Integer(total / parts).get_str());
        }
    }
    return labels;
}

io::Json values_json(const PartitionInput& p) {
    io::Json v = io::Json::array();
    for (auto x : p.values) v.push_back(x);
    return v;
}

void finish(GeneratedInstance& g) {
    for (AgentId i = 0; i < g.instance.agents(); ++i) {
        if (g.instance.row_sum(i) != g.row_sum) {
            throw std::logic_error(g.family + ": row " + std::to_string(i) + " sums to " +
                                   to_string(g.instance.row_sum(i)) + ", expected " + to_string(g.row_sum));
        }
    }
}

} // namespace

void check_partition_input(const PartitionInput& p) {
    if (p.values.empty()) throw ParameterError("partition input is empty");
    Integer total = 0;
    for (auto v : p.values) {
        if (v <= 0) throw ParameterError("partition values must be positive, got " + std::to_string(v));
        total += Integer(static_cast<long>(v));
    }
    if (total % 2 != 0) throw ParameterError("partition sum " + total.get_str() + " is odd");
}

Integer partition_target(const PartitionInput& p) {
    check_partition_input(p);
    Integer total = 0;
    for (auto v : p.values) total += Integer(static_cast<long>(v));
    return total / 2;
}

PartitionInput pad_partition(const PartitionInput& p, std::size_t k) {
    if (k < 2) throw ParameterError("pad_partition needs k >= 2, got " + std::to_string(k));
    const Integer half = partition_target(p);
    if (!half.fits_slong_p()) throw ParameterError("partition sum too large");
    PartitionInput out = p;
    for (std::size_t extra = 0; extra + 2 < k; ++extra) {
        out.values.push_back(half.get_si());
        if (out.labels) out.labels->push_back(static_cast<int>(extra + 2));
    }
    return out;
}

io::Json to_json(const GeneratedInstance& g) {
    io::Json j = io::to_json(g.instance);
    io::Json meta;
    meta["family"] = g.family;
    meta["params"] = g.params;
    meta["row_sum"] = to_string(g.row_sum);
    io::Json expected = io::Json::object();
    for (const auto& [key, value] : g.expected) expected[key] = to_string(value);
    meta["expected"] = expected;
    if (g.threshold) meta["threshold"] = to_string(*g.threshold);
    if (g.witness) meta["witness"] = io::to_json(*g.witness);
    j["meta"] = meta;
    return j;
}

GeneratedInstance gen_eqx_cof(std::size_t n, const Rational& K) {
    check_agents(n, 2);
    check_kbound(K, Rational(n * power(2, n)), "n*2^n");
    const Rational half = Rational(n * power(2, n - 1));

    CostMatrix c(n);
    for (AgentId i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c[i].push_back(i == j ? K : Rational(1));
        for (std::size_t j = 0; j + 1 < n; ++j) c[i].push_back(Rational(n * power(2, j)));
    }
    GeneratedInstance g{Instance(std::move(c), item_names({{"o1_", n}, {"o2_", n - 1}}))};
    g.family = "eqx-cof";
    g.params = {{"n", n}, {"K", to_string(K)}};
    g.row_sum = K + half - 1;
    g.expected["opt"] = half;
    g.expected["eqx_opt"] = n * K + half - n;
    g.expected["eqx_gap"] = n * K - n;
    g.expected["eqx_gap_normalized"] = (n * K - n) / g.row_sum;

    std::vector<std::vector<ItemId>> bundles(n);
    for (AgentId i = 0; i < n; ++i) {
        bundles[i].push_back(i);
        if (i + 1 < n) bundles[i].push_back(n + i);
    }
    g.witness = Allocation(std::move(bundles));
    finish(g);
    return g;
}

GeneratedInstance gen_eqx_hard(const PartitionInput& p, std::size_t n, const Rational& K) {
    check_agents(n, 2);
    const Rational T(partition_target(p));
    const std::size_t r = p.values.size();
    check_kbound(K, 10 * T * Rational(power(n, 2 * n) * power(r, n)), "10*T*n^(2n)*r^n");

    CostMatrix c(n, std::vector<Rational>(2 * n + r, Rational(0)));
    for (AgentId i = 0; i < n; ++i) {
        Rational rest = 0;
        for (std::size_t j = 0; j < r; ++j) {
            c[i][n + j] = i < 2 ? integer(p.values[j])
                                : 10 * T * Rational(power(r, i - 1) * power(n, n + i - 1));
            rest += c[i][n + j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            Rational own = i < 2 ? 4 * T : 5 * T;
            c[i][n + r + j] = i == j ? own : 10 * T * Rational(power(n, i));
            rest += c[i][n + r + j];
        }
        if (!(K > rest)) check_kbound(K, rest, "x_" + std::to_string(i + 1));
        c[i][i] = K - rest;
    }
    GeneratedInstance g{Instance(std::move(c), item_names({{"o1_", n}, {"o2_", r}, {"o3_", n}}))};
    g.family = "eqx-hard";
    g.params = {{"n", n}, {"K", to_string(K)}, {"partition", values_json(p)}, {"T", to_string(T)}};
    g.row_sum = K;
    g.expected["eqx_opt_yes"] = 5 * n * T;

    if (auto labels = certified_parts(p, 2)) {
        std::vector<std::vector<ItemId>> bundles(n);
        for (std::size_t j = 1; j < n; ++j) bundles[0].push_back(j);
        bundles[1].push_back(0);
        for (std::size_t j = 0; j < r; ++j) bundles[(*labels)[j]].push_back(n + j);
        for (AgentId i = 0; i < n; ++i) bundles[i].push_back(n + r + i);
        for (auto& b : bundles) std::sort(b.begin(), b.end());
        g.witness = Allocation(std::move(bundles));
    }
    finish(g);
    return g;
}

GeneratedInstance gen_eq1_cof(std::size_t n, const Rational& eps) {
    check_agents(n, 2);
    const Rational bound(1, n * n);
    if (sgn(eps) <= 0 || !(eps < bound)) {
        throw ParameterError("eps must lie in (0, 1/n^2) = (0, " + to_string(bound) + "), got " +
                             to_string(eps));
    }
    CostMatrix c(n);
    for (std::size_t j = 0; j < n; ++j) c[0].push_back(eps);
    c[0].push_back(1 - n * eps);
    for (AgentId i = 1; i < n; ++i) {
        c[i].assign(n, Rational(1, n));
        c[i].push_back(Rational(0));
    }
    GeneratedInstance g{Instance(std::move(c))};
    g.family = "eq1-cof";
    g.params = {{"n", n}, {"eps", to_string(eps)}};
    g.row_sum = 1;
    g.expected["opt"] = n * eps;
    g.expected["eq1_opt"] = Rational(n - 1, n) + eps;
    g.expected["eq1_gap"] = Rational(n - 1, n) - (n - 1) * eps;

    std::vector<std::vector<ItemId>> bundles(n);
    for (AgentId i = 0; i < n; ++i) bundles[i].push_back(i);
    bundles[n - 1].push_back(n);
    g.witness = Allocation(std::move(bundles));
    finish(g);
    return g;
}

GeneratedInstance gen_eq1_hard(const PartitionInput& p, std::size_t n, const Rational& K) {
    check_agents(n, 3);
    const Rational T(partition_target(p));
    const std::size_t r = p.values.size();
    check_kbound(K, 10 * r * T, "10*r*T");

    const std::size_t m = r + n - 1;
    CostMatrix c(n, std::vector<Rational>(m, T / K));
    for (AgentId i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) c[i][j] = integer(p.values[j]) / K;
        c[i][r] = c[i][r + 1] = r * T;
    }
    for (std::size_t j = 0; j < r; ++j) c[n - 1][j] = 2 * T;

    GeneratedInstance g{Instance(std::move(c))};
    g.family = "eq1-hard";
    g.params = {{"n", n}, {"K", to_string(K)}, {"partition", values_json(p)}, {"T", to_string(T)}};
    g.row_sum = (2 * r + Rational(n - 1) / K) * T;
    g.expected["eq1_opt_yes"] = (n + 1) * T / K;
    g.expected["eq1_opt_no_lower_bound"] = (r + Rational(n) / K) * T;

    if (auto labels = certified_parts(p, 2)) {
        std::vector<std::vector<ItemId>> bundles(n);
        for (std::size_t j = 0; j < r; ++j) bundles[(*labels)[j]].push_back(j);
        bundles[n - 1] = {r, r + 1};
        for (AgentId i = 2; i + 1 < n; ++i) bundles[i].push_back(r + i);
        g.witness = Allocation(std::move(bundles));
    }
    finish(g);
    return g;
}

GeneratedInstance gen_ef1_cof(std::size_t n, std::size_t K, const Rational& eps) {
    check_agents(n, 2);
    if (K == 0 || K % n != 0) {
        throw ParameterError("K must be a positive multiple of n = " + std::to_string(n) + ", got " +
                             std::to_string(K));
    }
    const Rational bound(1, Integer(static_cast<unsigned long>(K)) * Integer(static_cast<unsigned long>(K)));
    if (sgn(eps) <= 0 || !(eps < bound)) {
        throw ParameterError("eps must lie in (0, 1/K^2) = (0, " + to_string(bound) + "), got " +
                             to_string(eps));
    }
    const Rational k(static_cast<unsigned long>(K));
    CostMatrix c(n);
    c[0].assign(K, eps);
    c[0].push_back(1 - k * eps);
    for (AgentId i = 1; i < n; ++i) {
        c[i].assign(K, 1 / k);
        c[i].push_back(Rational(0));
    }
    GeneratedInstance g{Instance(std::move(c))};
    g.family = "ef1-cof";
    g.params = {{"n", n}, {"K", K}, {"eps", to_string(eps)}};
    g.row_sum = 1;
    g.expected["opt"] = k * eps;
    g.expected["ef1_opt_lower_bound"] = Rational(n - 1, n) - 1 / k;
    finish(g);
    return g;
}

GeneratedInstance gen_ef1_hard(const PartitionInput& p, std::size_t n, const Rational& K) {
    check_agents(n, 3);
    const Rational T(partition_target(p));
    const PartitionInput padded = pad_partition(p, n - 1);
    const std::size_t q = padded.values.size();
    check_kbound(K, 10 * q * T, "10*q*T");

    const Rational factor = (2 * K + (n - 1)) / (K * n + K);
    CostMatrix c(n);
    for (AgentId i = 0; i + 1 < n; ++i) {
        for (auto v : padded.values) c[i].push_back(integer(v) / K);
        c[i].push_back(T);
        c[i].push_back(T);
    }
    for (auto v : padded.values) c[n - 1].push_back(factor * integer(v));
    c[n - 1].push_back(factor * T);
    c[n - 1].push_back(factor * T);

    GeneratedInstance g{Instance(std::move(c))};
    g.family = "ef1-hard";
    io::Json pad = values_json(padded);
    g.params = {{"n", n}, {"K", to_string(K)}, {"partition", values_json(p)}, {"padded", pad},
                {"T", to_string(T)}};
    g.row_sum = (Rational(n - 1) / K + 2) * T;
    g.expected["ef1_opt_yes"] = Rational(n - 1) * T / K + (4 * K + (2 * n - 2)) * T / (K * n + K);
    g.expected["ef1_opt_no_lower_bound"] = Rational(n - 1) * T / K + factor * T + T;

    if (auto labels = certified_parts(padded, static_cast<int>(n - 1))) {
        std::vector<std::vector<ItemId>> bundles(n);
        for (std::size_t j = 0; j < q; ++j) bundles[(*labels)[j]].push_back(j);
        bundles[n - 1] = {q, q + 1};
        g.witness = Allocation(std::move(bundles));
    }
    finish(g);
    return g;
}

GeneratedInstance gen_ef1_two_agent_hard(const PartitionInput& p, const Rational& K) {
    const Rational T(partition_target(p));
    const std::size_t r = p.values.size();
    check_kbound(K, 10 * T, "10*T");

    CostMatrix c(2);
    for (auto v : p.values) {
        c[0].push_back(integer(v));
        c[1].push_back(integer(v) / 2);
    }
    c[0].insert(c[0].end(), {6 * K, 2 * K, Rational(0)});
    c[1].insert(c[1].end(), {5 * K, (3 * K + T) / 2, (3 * K + T) / 2});

    GeneratedInstance g{Instance(std::move(c))};
    g.family = "ef1-2hard";
    g.params = {{"K", to_string(K)}, {"partition", values_json(p)}, {"T", to_string(T)}};
    g.row_sum = 2 * T + 8 * K;
    g.threshold = Rational(13, 2) * K + 2 * T;
    g.expected["ef1_opt_yes"] = *g.threshold;

    if (auto labels = certified_parts(p, 2)) {
        std::vector<std::vector<ItemId>> bundles(2);
        for (std::size_t j = 0; j < r; ++j) bundles[(*labels)[j]].push_back(j);
        bundles[0].push_back(r + 2);
        bundles[1].push_back(r);
        bundles[1].push_back(r + 1);
        for (auto& b : bundles) std::sort(b.begin(), b.end());
        g.witness = Allocation(std::move(bundles));
    }
    finish(g);
    return g;
}

GeneratedInstance gen_ef1_mult_hard(const PartitionInput& p, std::size_t n, const Rational& K) {
    check_agents(n, 4);
    const Rational T(partition_target(p));
    const std::size_t r = p.values.size();
    check_kbound(K, 10 * T, "10*T");

    CostMatrix c(n);
    for (AgentId i = 0; i < 3; ++i) {
        for (auto v : p.values) c[i].push_back(integer(v));
    }
    c[0].insert(c[0].end(), {K, K, K});
    c[1].insert(c[1].end(), {K, K, K});
    c[2].insert(c[2].end(), {T, T, 3 * K - 2 * T});
    c[3].assign(r, (K + 2 * T) / r);
    c[3].insert(c[3].end(), {K, K, Rational(0)});
    for (AgentId i = 4; i < n; ++i) c[i] = c[3];

    GeneratedInstance g{Instance(std::move(c))};
    g.family = "ef1-mult";
    g.params = {{"n", n}, {"K", to_string(K)}, {"partition", values_json(p)}, {"T", to_string(T)}};
    g.row_sum = 3 * K + 2 * T;
    // with extra copies of agent 4 some agent holds nothing, and agent 3 then
    // breaks EF1 in the four-agent witness; the formula is stated for n = 4
    if (n == 4) g.expected["ef1_opt_yes"] = 4 * T;

    if (n == 4) {
        if (auto labels = certified_parts(p, 2)) {
            std::vector<std::vector<ItemId>> bundles(4);
            for (std::size_t j = 0; j < r; ++j) bundles[(*labels)[j]].push_back(j);
            bundles[2] = {r, r + 1};
            bundles[3] = {r + 2};
            g.witness = Allocation(std::move(bundles));
        }
    }
    finish(g);
    return g;
}

GeneratedInstance gen_random(std::size_t n, std::size_t m, std::uint64_t seed,
                             std::uint64_t granularity) {
    if (granularity == 0) throw ParameterError("granularity must be at least 1");
    std::mt19937_64 rng(seed);
    const std::uint64_t range = granularity + 1;  // 0 when granularity = 2^64 - 1
    auto draw = [&]() -> std::uint64_t {
        if (range == 0) return rng();
        const std::uint64_t reject_below = (0 - range) % range;  // 2^64 mod range
        std::uint64_t x;
        do {
            x = rng();
        } while (x < reject_below);
        return x % range;
    };

    const Integer g_int(std::to_string(granularity));
    CostMatrix c(n);
    for (AgentId i = 0; i < n; ++i) {
        bool zero = true;
        do {
            c[i].clear();
            zero = true;
            for (ItemId o = 0; o < m; ++o) {
                const std::uint64_t v = draw();
                if (v != 0) zero = false;
                Rational x(Integer(std::to_string(v)), g_int);
                x.canonicalize();
                c[i].push_back(x);
            }
        } while (zero && m > 0);
    }
    GeneratedInstance g;
    g.instance = n == 0 ? Instance(0, m) : Instance(std::move(c));
    g.family = "random";
    g.params = {{"n", n}, {"m", m}, {"seed", seed}, {"granularity", granularity}};
    g.row_sum = 0;  // rows differ; normalize downstream
    return g;
}

} // namespace chorefair
