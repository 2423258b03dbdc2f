#include <doctest.h>

#include "ra/fixtures.hpp"
#include "ra/model.hpp"
#include "oracle.hpp"

#include <random>

using namespace ra;

namespace {

// The parallel queueing example: L = 2, C = (3, 3), w1 = (1,1), w3 = (2,0),
// w4 = (0,2); patterns 2 and 5 are the dummies.
SystemModel queueing_example() {
    return load_scenario(R"({
      "pools": [{"capacity": 3, "cost_rate": 1.0}, {"capacity": 3, "cost_rate": 1.0}],
      "request_types": [{"arrival_rate": 1.0, "reward": 10.0},
                        {"arrival_rate": 1.0, "reward": 8.0}],
      "patterns": [
        {"request_type": 1, "service_rate": 1.0, "weights": [[1,1],[2,1]]},
        {"request_type": 2, "service_rate": 1.0, "weights": [[1,2]]},
        {"request_type": 2, "service_rate": 1.0, "weights": [[2,2]]}
      ]
    })");
}

}  // namespace

TEST_CASE("queueing example loads with synthesized dummies") {
    const SystemModel m = queueing_example();
    CHECK(m.num_patterns() == 5);
    CHECK(m.num_request_types() == 2);
    CHECK(m.patterns[3].dummy);
    CHECK(m.patterns[4].dummy);
    CHECK(m.dummy_of[0] == 3);
    CHECK(m.dummy_of[1] == 4);
    CHECK(m.patterns_of[0] == std::vector<int>{0, 3});
    CHECK(m.patterns_of[1] == std::vector<int>{1, 2, 4});
}

TEST_CASE("appendix tables load: fig1a has J=14 L=4 I=41") {
    const SystemModel m = fixture_fig1a();
    CHECK(m.num_pools() == 14);
    CHECK(m.num_request_types() == 4);
    CHECK(m.num_patterns() == 41);
    int dummies = 0;
    for (const Pattern& p : m.patterns) dummies += p.dummy;
    CHECK(dummies == 4);

    const SystemModel b = fixture_fig1b();
    CHECK(b.num_pools() == 6);
    CHECK(b.num_patterns() == 8);
    const SystemModel f2 = fixture_fig2();
    CHECK(f2.num_pools() == 15);
    CHECK(f2.num_patterns() == 42);
}

TEST_CASE("all-zero weights without dummy flag is rejected") {
    CHECK_THROWS_WITH_AS(load_scenario(R"({
      "pools": [{"capacity": 1, "cost_rate": 0.0}],
      "request_types": [{"arrival_rate": 1.0, "reward": 1.0}],
      "patterns": [{"request_type": 1, "service_rate": 1.0, "weights": []}]
    })"),
                         doctest::Contains("non_dummy_pattern_has_positive_weight"),
                         ScenarioError);
}

TEST_CASE("schema and invariant errors carry names") {
    CHECK_THROWS_AS(load_scenario("not json"), ScenarioError);
    // unused pool
    CHECK_THROWS_WITH_AS(load_scenario(R"({
      "pools": [{"capacity": 1, "cost_rate": 0.0}, {"capacity": 2, "cost_rate": 0.0}],
      "request_types": [{"arrival_rate": 1.0, "reward": 1.0}],
      "patterns": [{"request_type": 1, "service_rate": 1.0, "weights": [[1,1]]}]
    })"),
                         doctest::Contains("every_pool_used"), ScenarioError);
    // fractional weight
    CHECK_THROWS_AS(load_scenario(R"({
      "pools": [{"capacity": 1, "cost_rate": 0.0}],
      "request_types": [{"arrival_rate": 1.0, "reward": 1.0}],
      "patterns": [{"request_type": 1, "service_rate": 1.0, "weights": [[1,0.5]]}]
    })"),
                    ScenarioError);
    // nonpositive rate
    CHECK_THROWS_WITH_AS(load_scenario(R"({
      "pools": [{"capacity": 1, "cost_rate": 0.0}],
      "request_types": [{"arrival_rate": 0.0, "reward": 1.0}],
      "patterns": [{"request_type": 1, "service_rate": 1.0, "weights": [[1,1]]}]
    })"),
                         doctest::Contains("arrival_rate_positive"), ScenarioError);
}

TEST_CASE("state space sizes match the capacity bound") {
    const SystemModel m = queueing_example();
    CHECK(m.state_space_size(1) == 3);  // w=(2,0), C=(3,3): ceil(3/2)+1
    CHECK(m.state_space_size(0) == 4);  // w=(1,1): min(3,3)+1
    CHECK(m.state_space_size(3) == 1);  // dummy
    CHECK(m.state_space_size(4) == 1);
    for (int i = 0; i < m.num_patterns(); ++i)
        if (!m.patterns[i].dummy) CHECK(m.state_space_size(i) >= 2);
}

TEST_CASE("row classification and weak coupling on the queueing example") {
    const SystemModel m = queueing_example();
    const auto rows = classify_rows(m);
    CHECK(rows[0] == RowType::type2);  // used by patterns 1 and 3
    CHECK(rows[1] == RowType::type2);
    const auto rep = weak_coupling_check(m);
    CHECK_FALSE(rep.weakly_coupled);
    CHECK(rep.offending == std::vector<int>{0});  // pattern 1 touches both shared pools
}

TEST_CASE("loss network reading of the introduction example") {
    // links a, b, c with capacities 1, 3, 3; type-I served by {a} or {b,c},
    // type-II by {b,c} with two channels on each
    const SystemModel m = load_scenario(R"({
      "pools": [{"capacity": 1, "cost_rate": 0.0}, {"capacity": 3, "cost_rate": 0.0},
                {"capacity": 3, "cost_rate": 0.0}],
      "request_types": [{"arrival_rate": 1.0, "reward": 1.0},
                        {"arrival_rate": 1.0, "reward": 2.0}],
      "patterns": [
        {"request_type": 1, "service_rate": 1.0, "weights": [[1,1]]},
        {"request_type": 1, "service_rate": 1.0, "weights": [[2,1],[3,1]]},
        {"request_type": 2, "service_rate": 1.0, "weights": [[2,2],[3,2]]}
      ]
    })");
    const auto rows = classify_rows(m);
    CHECK(rows[0] == RowType::type1);
    CHECK(rows[1] == RowType::type2);
    CHECK(rows[2] == RowType::type2);
}

TEST_CASE("single-pool model is weakly coupled") {
    const SystemModel m = load_scenario(R"({
      "pools": [{"capacity": 4, "cost_rate": 0.1}],
      "request_types": [{"arrival_rate": 1.0, "reward": 5.0}],
      "patterns": [{"request_type": 1, "service_rate": 1.0, "weights": [[1,1]]}]
    })");
    CHECK(weak_coupling_check(m).weakly_coupled);
}

TEST_CASE("classification depends only on the sparsity pattern") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 25; ++rep) {
        SystemModel m = oracle::random_model(rng);
        const auto rows = classify_rows(m);
        const auto wc = weak_coupling_check(m);
        SystemModel scaled = m;
        for (Pattern& p : scaled.patterns)
            for (int& w : p.weights) w *= 3;
        scaled.patterns_of.clear();
        scaled.dummy_of.clear();
        scaled.finalize();
        CHECK(classify_rows(scaled) == rows);
        CHECK(weak_coupling_check(scaled).offending == wc.offending);
    }
}

TEST_CASE("scenario round-trip is the identity") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 25; ++rep) {
        const SystemModel m = oracle::random_model(rng);
        const SystemModel back = load_scenario(serialize_scenario(m));
        CHECK(back == m);
    }
    const SystemModel f = fixture_fig1a();
    CHECK(load_scenario(serialize_scenario(f)) == f);
}
