#include <doctest.h>

#include "fairmatch/io.hpp"
#include "test_support.hpp"

using namespace fairmatch;
namespace ft = fairmatch::testing;

TEST_CASE("instance documents parse exactly") {
    std::string text = R"({
      "agents": ["alice", "bob"],
      "items": ["mop", "rake"],
      "utilities": [[-1, "-10/3"], [0, "1/2"]],
      "demands": [1, 1]
    })";
    io::ParsedInstance parsed = io::parse_instance(text);
    CHECK(parsed.labels.agents == std::vector<std::string>{"alice", "bob"});
    CHECK(parsed.instance.utilities[0][1] == Rational(-10, 3));
    CHECK(parsed.instance.utilities[1][0] == Rational(0));
    CHECK(parsed.instance.demands == rat_vec({1, 1}));
}

TEST_CASE("round trip through serialize and parse is exact") {
    ft::Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        Instance inst = trial % 2 ? ft::random_unit_instance(rng, 1 + trial % 4)
                                  : ft::random_typed_instance(rng, 2, 3);
        for (auto& row : inst.utilities)
            for (auto& u : row) u += ft::rand_rational(rng, -2, 2, 7);
        io::Labels labels = io::default_labels(inst.n_agents(), inst.n_items());
        io::ParsedInstance back = io::parse_instance(io::serialize_instance(inst, labels));
        CHECK(back.instance.utilities == inst.utilities);
        CHECK(back.instance.demands == inst.demands);
        CHECK(io::instance_digest(back.instance) == io::instance_digest(inst));
    }
}

TEST_CASE("floats and malformed rationals are rejected") {
    std::string float_doc = R"({"agents":["a"],"items":["x"],"utilities":[[1.5]]})";
    CHECK_THROWS_AS(io::parse_instance(float_doc), ParseError);

    std::string bad_rat = R"({"agents":["a"],"items":["x"],"utilities":[["1/0"]]})";
    CHECK_THROWS_AS(io::parse_instance(bad_rat), ParseError);

    std::string missing = R"({"agents":["a"],"utilities":[[1]]})";
    CHECK_THROWS_AS(io::parse_instance(missing), ParseError);

    std::string ragged = R"({"agents":["a","b"],"items":["x","y"],"utilities":[[1,2],[3]]})";
    CHECK_THROWS_AS(io::parse_instance(ragged), ParseError);
}

TEST_CASE("json syntax errors carry line and column") {
    std::string broken = "{\n  \"agents\": [\"a\"],\n  \"items\": [\"x\"\n";
    try {
        io::parse_instance(broken, "broken.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line >= 3);
        CHECK(std::string(e.what()).find("broken.json:") != std::string::npos);
    }
}

TEST_CASE("allocation and money vector round trips") {
    Allocation x;
    x.x = {{Rational(1, 3), Rational(2, 3)}, {Rational(2, 3), Rational(1, 3)}};
    Allocation back = io::parse_allocation(io::serialize_allocation(x));
    CHECK(back.x == x.x);

    PriceVector p{RatVec{Rational(3, 2), Rational(0)}};
    RatVec p_back = io::parse_rational_vector(io::serialize_prices(p), "prices");
    CHECK(p_back == p.p);

    EarningsVector q{RatVec{Rational(0), Rational(2)}};
    RatVec q_back = io::parse_rational_vector(io::serialize_earnings(q), "earnings");
    CHECK(q_back == q.q);
}

TEST_CASE("digest changes when the instance changes") {
    Instance a = unit_instance(rat_mat({{1, 0}, {0, 1}}));
    Instance b = unit_instance(rat_mat({{1, 0}, {0, 2}}));
    CHECK(io::instance_digest(a) != io::instance_digest(b));
    CHECK(io::instance_digest(a).size() == 16);
}

TEST_CASE("serialization always spells denominators") {
    Instance inst = unit_instance(rat_mat({{1, -2}, {0, 5}}));
    std::string text = io::serialize_instance(inst, io::default_labels(2, 2));
    CHECK(text.find("\"1/1\"") != std::string::npos);
    CHECK(text.find("\"-2/1\"") != std::string::npos);
    CHECK(text.find('.') == std::string::npos);  // no floating point anywhere
}
