#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorefair/core.hpp"
#include "chorefair/errors.hpp"
#include "chorefair/generators.hpp"
#include "chorefair/io.hpp"
#include "oracles.hpp"

#include <random>

using namespace chorefair;

namespace {

Rational q(const char* s) { return parse_rational(s); }

Instance make(std::initializer_list<std::initializer_list<const char*>> rows) {
    CostMatrix c;
    for (auto row : rows) {
        c.emplace_back();
        for (auto s : row) c.back().push_back(q(s));
    }
    return Instance(std::move(c));
}

} // namespace

TEST_CASE("rational text round trip") {
    CHECK(to_string(q("3/1000")) == "3/1000");
    CHECK(q("3/1000") == make_rational(3, 1000));
    CHECK(to_string(q("7")) == "7");
    CHECK(to_string(q("-2/3")) == "-2/3");
    CHECK(to_string(q("0")) == "0");
}

TEST_CASE("rational parser rejects non-canonical text") {
    for (const char* bad : {"", "+1", "01", "-0", "1/0", "2/4", "1/-2", " 1", "1 ", "1.5", "1/", "/2", "a"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_rational(bad), ParseError);
    }
}

TEST_CASE("decimal rendering is exact with half-up rounding") {
    CHECK(to_decimal(q("1/3"), 12) == "0.333333333333");
    CHECK(to_decimal(q("2/3"), 12) == "0.666666666667");
    CHECK(to_decimal(q("49/100"), 12) == "0.490000000000");
    CHECK(to_decimal(q("-1/8"), 2) == "-0.13");
    CHECK(to_decimal(q("202"), 3) == "202.000");
}

TEST_CASE("validate reports normalization and zero rows") {
    auto r1 = validate(make({{"1/2", "1/2"}, {"1/2", "1/2"}}));
    CHECK(r1.ok());
    CHECK(r1.normalized);

    auto r2 = validate(make({{"1", "1"}, {"1", "2"}}));
    CHECK(r2.ok());
    CHECK_FALSE(r2.normalized);

    auto r3 = validate(1, CostMatrix{{Rational(0), Rational(0)}});
    CHECK(r3.ok());
    REQUIRE(r3.warnings.size() == 1);
    CHECK(r3.warnings[0] == "agent 0 has zero total cost; normalization impossible");
    CHECK(r3.zero_rows == std::vector<AgentId>{0});
}

TEST_CASE("validate flags dimension and sign errors") {
    CHECK_FALSE(validate(2, CostMatrix{{Rational(1)}}).ok());
    CHECK_FALSE(validate(2, CostMatrix{{Rational(1)}, {Rational(1), Rational(2)}}).ok());
    CHECK_FALSE(validate(1, CostMatrix{{Rational(-1)}}).ok());
    CHECK_THROWS_AS(Instance(CostMatrix{{Rational(-1)}}), StructureError);
}

TEST_CASE("normalize divides each row exactly") {
    const Instance n = normalize(make({{"1", "1"}, {"1", "3"}}));
    CHECK(n == make({{"1/2", "1/2"}, {"1/4", "3/4"}}));
    CHECK(normalize(n) == n);
    CHECK_THROWS_AS(normalize(make({{"0", "0"}})), NormalizationError);
    try {
        normalize(make({{"1", "0"}, {"0", "0"}}));
    } catch (const NormalizationError& e) {
        CHECK(std::string(e.what()).find("agent 1") != std::string::npos);
    }

    const auto g = gen_eqx_cof(2, Rational(100));
    CHECK(g.instance.row_sum(0) == 103);
    const Instance gn = normalize(g.instance);
    for (AgentId i = 0; i < 2; ++i) CHECK(gn.row_sum(i) == 1);
    CHECK(gn.is_normalized());
}

TEST_CASE("social cost") {
    const Instance half = make({{"1/2", "1/2"}, {"1/2", "1/2"}});
    CHECK(social_cost(half, Allocation({{0}, {1}})) == 1);
    CHECK(agent_cost(half, Allocation({{0}, {1}}), 1) == make_rational(1, 2));
    CHECK(social_cost(Instance(2, 0), Allocation({{}, {}})) == 0);

    // o^1_1, o^1_2, o^2_1: each agent takes her own big item, agent 1 also o^2_1
    const auto g = gen_eqx_cof(2, Rational(100));
    CHECK(social_cost(g.instance, Allocation({{0, 2}, {1}})) == 202);

    CHECK_THROWS_AS(social_cost(half, Allocation({{0}, {}})), StructureError);
    CHECK_THROWS_AS(social_cost(half, Allocation({{0}, {0, 1}})), StructureError);
    CHECK_THROWS_AS(social_cost(half, Allocation({{0, 1}})), StructureError);
}

TEST_CASE("degenerate instances") {
    const Instance single = make({{"1/3", "2/3"}});
    const Allocation all({{0, 1}});
    CHECK(social_cost(single, all) == 1);
    CHECK(normalize(single) == single);
}

TEST_CASE("scale multiplies every social cost") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const std::size_t m = rng() % 7;
        const Instance in = gen_random(n, m, rng(), 50).instance;
        const Rational lambda(Integer(static_cast<unsigned long>(1 + rng() % 9)),
                              Integer(static_cast<unsigned long>(1 + rng() % 9)));
        Rational l = lambda;
        l.canonicalize();
        const Instance scaled = scale(in, l);
        const Allocation a = oracle_ref::random_allocation(n, m, rng);
        CHECK(social_cost(scaled, a) == l * social_cost(in, a));
    }
}

TEST_CASE("normalize preserves cost ratios when row sums agree") {
    const auto g = gen_eqx_cof(3, Rational(1000));
    const Instance n = normalize(g.instance);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const Allocation a = oracle_ref::random_allocation(3, g.instance.items(), rng);
        const Allocation b = oracle_ref::random_allocation(3, g.instance.items(), rng);
        CHECK(social_cost(n, a) * social_cost(g.instance, b) ==
              social_cost(n, b) * social_cost(g.instance, a));
    }
}

TEST_CASE("allocation helpers") {
    const Allocation a = Allocation::from_assignment(2, {1, 0, 1});
    CHECK(a.bundle(0) == std::vector<ItemId>{1});
    CHECK(a.bundle(1) == std::vector<ItemId>{0, 2});
    CHECK(a.assignment(3) == std::vector<AgentId>{1, 0, 1});
    Allocation b = a;
    b.move_item(2, 1, 0);
    CHECK(b.bundle(0) == std::vector<ItemId>{1, 2});
    CHECK_THROWS_AS(b.move_item(2, 1, 0), StructureError);
    CHECK(Allocation({{2, 0}, {1}}).bundle(0) == std::vector<ItemId>{0, 2});
}

TEST_CASE("criterion names") {
    CHECK(parse_criterion("eq1") == Criterion::EQ1);
    CHECK(parse_criterion("EQX") == Criterion::EQX);
    CHECK(to_string(Criterion::EF1) == "EF1");
    CHECK_THROWS_AS(parse_criterion("efx"), ParseError);
}

TEST_CASE("allocation JSON") {
    const Allocation a = io::decode_allocation(R"({"bundles":[[0,2],[1]]})", 3);
    CHECK(a == Allocation({{0, 2}, {1}}));
    CHECK(io::encode_allocation(a) == R"({"bundles":[[0,2],[1]]})");
    try {
        io::decode_allocation(R"({"bundles":[[0],[0,1]]})", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("item 0 assigned twice") != std::string::npos);
    }
    CHECK_THROWS_AS(io::decode_allocation(R"({"bundles":[[0],[5]]})", 2), ParseError);
    CHECK_THROWS_AS(io::decode_allocation(R"({"bundles":[[0]]})", 2), ParseError);
    CHECK_THROWS_AS(io::decode_allocation(R"({"bundles":[[0],[1]])", 2), ParseError);
    CHECK_THROWS_AS(io::decode_allocation(R"({"bundles":[[-1],[1]]})", 2), ParseError);
}

TEST_CASE("instance JSON") {
    const Instance in = make({{"1/2", "1/2"}, {"1/4", "3/4"}});
    const std::string bytes = io::encode_instance(in);
    CHECK(bytes ==
          R"({"agents":2,"costs":[["1/2","1/2"],["1/4","3/4"]],"items":["o1","o2"],"normalized":true})");
    CHECK(io::decode_instance(bytes) == in);

    CHECK(io::decode_instance(R"({"agents":1,"costs":[["1","2"]]})") == make({{"1", "2"}}));
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":1,"costs":[["1","2"]],"normalized":true})"), ParseError);
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":2,"costs":[["1","2"]]})"), ParseError);
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":1,"costs":[["1","-2"]]})"), ParseError);
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":1,"costs":[["1","2/4"]]})"), ParseError);
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":1,"costs":[[1,2]]})"), ParseError);
    CHECK_THROWS_AS(io::decode_instance(R"({"agents":1,"costs":[["1","2"]])"), ParseError);
    try {
        io::decode_instance(R"({"agents":2,"costs":[["1","2"],["3","x"]]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("/costs/1/1") != std::string::npos);
    }
    // metadata is carried but ignored
    CHECK(io::decode_instance(R"({"agents":1,"costs":[["1"]],"meta":{"x":1}})") == make({{"1"}}));
}

TEST_CASE("encode and decode are inverse on random instances") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 5;
        const std::size_t m = rng() % 8;
        Instance in = gen_random(n, m, rng(), 1 + rng() % 1000).instance;
        if (rng() % 2 && m > 0) in = normalize(in);
        CHECK(io::decode_instance(io::encode_instance(in)) == in);
        const Allocation a = oracle_ref::random_allocation(n, m, rng);
        CHECK(io::decode_allocation(io::encode_allocation(a), m) == a);
    }
}
