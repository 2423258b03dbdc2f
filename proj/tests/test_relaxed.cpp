#include <doctest.h>

#include <numeric>
#include <random>

#include "ra/fixtures.hpp"
#include "ra/relaxed.hpp"
#include "oracle.hpp"

using namespace ra;

namespace {

SystemModel tiny(double lambda, double reward, double mu, int capacity, int weight, double cost) {
    SystemModel m;
    m.capacities = {capacity};
    m.cost_rates = {cost};
    m.request_types = {{lambda, reward}};
    Pattern p;
    p.request_type = 0;
    p.service_rate = mu;
    p.weights = {weight};
    m.patterns = {p};
    m.finalize();
    return m;
}

void check_solution_invariants(const SystemModel& m, const RelaxedSolution& sol) {
    // simplex
    double total = 0.0;
    for (double z : sol.z) {
        CHECK(z >= -1e-15);
        total += z;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    // capacity: I sum w n z <= C0
    for (int j = 0; j < m.num_pools(); ++j) {
        double used = 0.0;
        for (int pos = 0; pos < sol.ranking.size(); ++pos) {
            const auto [i, n] = sol.ranking.order[pos];
            used += m.patterns[i].weights[j] * static_cast<double>(n) * sol.z[pos];
        }
        CHECK(used * m.num_patterns() <= m.capacities[j] + 1e-9);
    }
    // throughput cannot exceed arrivals
    for (int l = 0; l < m.num_request_types(); ++l) {
        double served = 0.0;
        for (int pos = 0; pos < sol.ranking.size(); ++pos) {
            const auto [i, n] = sol.ranking.order[pos];
            if (m.patterns[i].request_type == l)
                served += m.patterns[i].service_rate * static_cast<double>(n) * sol.z[pos];
        }
        CHECK(served * m.num_patterns() <= m.request_types[l].arrival_rate + 1e-9);
        // complementary slackness for the action constraint
        if (sol.nu[l] > 1e-9)
            CHECK(served * m.num_patterns() ==
                  doctest::Approx(m.request_types[l].arrival_rate).epsilon(1e-8));
    }
    // Lemma 1: critical pairs have distinct patterns (and distinct pools)
    for (size_t a = 0; a < sol.critical_positions.size(); ++a)
        for (size_t b = a + 1; b < sol.critical_positions.size(); ++b) {
            CHECK(sol.ranking.order[sol.critical_positions[a]].pattern !=
                  sol.ranking.order[sol.critical_positions[b]].pattern);
            CHECK(sol.critical_pools[a] != sol.critical_pools[b]);
        }
    // critical pools are exactly full
    for (size_t k = 0; k < sol.critical_pools.size(); ++k) {
        const int j = sol.critical_pools[k];
        double used = 0.0;
        for (int pos = 0; pos < sol.ranking.size(); ++pos) {
            const auto [i, n] = sol.ranking.order[pos];
            used += m.patterns[i].weights[j] * static_cast<double>(n) * sol.z[pos];
        }
        CHECK(used * m.num_patterns() == doctest::Approx(m.capacities[j]).epsilon(1e-8));
    }
}

}  // namespace

TEST_CASE("rank_pairs sorts by index and keeps boundary pairs last") {
    SystemModel m;
    m.capacities = {4, 4};
    m.cost_rates = {0.0, 0.0};
    m.request_types = {{1.0, 8.0}, {1.0, 6.0}};
    Pattern a, b;
    a.request_type = 0;
    a.service_rate = 1.0;
    a.weights = {1, 0};
    b.request_type = 1;
    b.service_rate = 1.0;
    b.weights = {0, 1};
    m.patterns = {a, b};
    m.finalize();

    const std::vector<double> g(2, 0.0), nu(2, 0.0);
    const Ranking o = rank_pairs(m, g, nu);
    // Xi = (8, 6): all of pattern 0's non-boundary pairs first
    for (int pos = 0; pos < 4; ++pos) CHECK(o.order[pos].pattern == 0);
    for (int pos = 4; pos < 8; ++pos) CHECK(o.order[pos].pattern == 1);
    // dummies (index 0) follow, then the two boundary pairs
    CHECK(m.patterns[o.order[8].pattern].dummy);
    CHECK(m.patterns[o.order[9].pattern].dummy);
    CHECK(o.order[10].state == m.boundary_state(o.order[10].pattern));
    CHECK(o.order[11].state == m.boundary_state(o.order[11].pattern));
    CHECK(ranking_consistent(m, o, g, nu));

    // negative index ranks below the dummies
    std::vector<double> g2{9.0, 0.0};  // Xi_a = 8 - 2*9 < 0
    const Ranking o2 = rank_pairs(m, g2, nu);
    CHECK(m.patterns[o2.order[4].pattern].dummy);
    CHECK(ranking_consistent(m, o2, g2, nu));
    CHECK_FALSE(ranking_consistent(m, o2, g, nu));
}

TEST_CASE("rank_pairs tie inheritance") {
    SystemModel m;
    m.capacities = {2, 2};
    m.cost_rates = {0.0, 0.0};
    m.request_types = {{1.0, 5.0}, {1.0, 5.0}};
    Pattern a, b;
    a.request_type = 0;
    a.service_rate = 1.0;
    a.weights = {1, 0};
    b.request_type = 1;
    b.service_rate = 1.0;
    b.weights = {0, 1};
    m.patterns = {a, b};
    m.finalize();
    const std::vector<double> g(2, 0.0), nu(2, 0.0);

    // canonical: pattern 0 first on an exact tie
    const Ranking o1 = rank_pairs(m, g, nu);
    CHECK(o1.order[0].pattern == 0);

    // previous ranking placing pattern 1 first is preserved
    Ranking prev;
    prev.order = {{1, 0}, {1, 1}, {0, 0}, {0, 1}, {2, 0}, {3, 0}, {0, 2}, {1, 2}};
    const Ranking o2 = rank_pairs(m, g, nu, &prev);
    CHECK(o2.order[0].pattern == 1);
    CHECK(ranking_consistent(m, o2, g, nu));
}

TEST_CASE("water-filling: arrival budget binds first on a light instance") {
    // lambda0 = 0.6, mu = 1: balance at mean 0.6 inside state 1
    const SystemModel m = tiny(0.6, 10.0, 1.0, 3, 1, 1.0);
    const std::vector<double> g(1, 0.0), nu0(1, 0.0);
    const Ranking o = rank_pairs(m, g, nu0);
    const RelaxedSolution sol = priority_policy(m, o, g);

    CHECK(sol.critical_positions.empty());
    CHECK(sol.nu[0] == doctest::Approx(index_value(m, 0, g, nu0)));
    // z: pattern mass splits between states 0 and 1 to serve exactly lambda0
    double served = 0.0;
    for (int pos = 0; pos < o.size(); ++pos)
        served += m.patterns[o.order[pos].pattern].service_rate * o.order[pos].state * sol.z[pos];
    CHECK(served * m.num_patterns() == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(sol.blocking[0] == doctest::Approx(0.0));
    check_solution_invariants(m, sol);
}

TEST_CASE("water-filling: capacity binds on a heavy instance") {
    // lambda0 huge: all pattern mass parks at the capacity-limited state
    const SystemModel m = tiny(50.0, 10.0, 1.0, 3, 2, 1.0);
    const std::vector<double> g(1, 0.0);
    const Ranking o = rank_pairs(m, g, std::vector<double>{0.0});
    const RelaxedSolution sol = priority_policy(m, o, g);

    REQUIRE(sol.critical_positions.size() == 1);
    CHECK(sol.critical_pools[0] == 0);
    CHECK(sol.nu[0] == doctest::Approx(0.0));
    CHECK(sol.blocking[0] > 0.0);
    // revenue equals the capacity-limited value (C0/w) (r mu - w eps)
    CHECK(sol.revenue == doctest::Approx(1.5 * (10.0 * 1.0 - 2.0)).epsilon(1e-10));
    check_solution_invariants(m, sol);
}

TEST_CASE("water-filling: a pattern parking exactly at capacity leaves no event") {
    // C0/w integral: the pattern rests at its ceiling with the pool exactly
    // full; the next pattern needing the pool is cut at zero and becomes the
    // critical pair (finite-h runs never see the first pattern's equality)
    SystemModel m;
    m.capacities = {4};
    m.cost_rates = {0.1};
    m.request_types = {{9.0, 10.0}, {9.0, 8.0}};
    Pattern a, b;
    a.request_type = 0;
    a.service_rate = 1.0;
    a.weights = {1};
    b.request_type = 1;
    b.service_rate = 1.0;
    b.weights = {1};
    m.patterns = {a, b};
    m.finalize();
    const std::vector<double> g(1, 0.0), nu0(2, 0.0);
    const Ranking o = rank_pairs(m, g, nu0);
    const RelaxedSolution sol = priority_policy(m, o, g);
    REQUIRE(sol.critical_positions.size() == 1);
    CHECK(sol.ranking.order[sol.critical_positions[0]].pattern == 1);  // the zero-cut pattern
    CHECK(sol.critical_pools[0] == 0);
    check_solution_invariants(m, sol);
}

TEST_CASE("water-filling: everything blocked when dummies outrank patterns") {
    const SystemModel m = tiny(1.0, 10.0, 1.0, 3, 1, 1.0);
    std::vector<double> g{20.0};  // Xi < 0 < dummy's 0
    const Ranking o = rank_pairs(m, g, std::vector<double>{0.0});
    const RelaxedSolution sol = priority_policy(m, o, g);
    CHECK(sol.revenue == doctest::Approx(0.0));
    CHECK(sol.blocking[0] == doctest::Approx(1.0));
    CHECK(sol.nu[0] == doctest::Approx(0.0));
    check_solution_invariants(m, sol);
}

TEST_CASE("asymptotic revenue: frozen cases") {
    const SystemModel m = tiny(1.0, 10.0, 1.0, 4, 2, 0.5);  // I = 2 with dummy
    const Ranking o = rank_pairs(m, std::vector<double>{0.0}, std::vector<double>{0.0});
    // all mass at state-0 pairs: zero
    std::vector<double> z(o.size(), 0.0);
    for (int pos = 0; pos < o.size(); ++pos)
        if (o.order[pos].state == 0) z[pos] = 0.5;
    CHECK(asymptotic_revenue(m, o, z) == doctest::Approx(0.0));
    // mass m_z at state n: I m_z n (r mu - w eps)
    std::fill(z.begin(), z.end(), 0.0);
    for (int pos = 0; pos < o.size(); ++pos) {
        if (o.order[pos].pattern == 0 && o.order[pos].state == 2) z[pos] = 0.25;
        if (m.patterns[o.order[pos].pattern].dummy) z[pos] = 0.5;
        if (o.order[pos].pattern == 0 && o.order[pos].state == 0) z[pos] = 0.25;
    }
    CHECK(asymptotic_revenue(m, o, z) ==
          doctest::Approx(2.0 * 0.25 * 2.0 * (10.0 - 1.0)).epsilon(1e-12));
}

TEST_CASE("fig1b at gamma = 0 is in heavy traffic (nu = 0)") {
    const SystemModel m = fixture_fig1b();
    const std::vector<double> g(m.num_pools(), 0.0), nu0(m.num_request_types(), 0.0);
    const Ranking o = rank_pairs(m, g, nu0);
    const RelaxedSolution sol = priority_policy(m, o, g);
    for (int l = 0; l < m.num_request_types(); ++l)
        CHECK(sol.nu[l] == doctest::Approx(0.0).epsilon(1e-12));
    check_solution_invariants(m, sol);
}

TEST_CASE("relaxed solution invariants hold on random instances") {
    std::mt19937 rng(57);
    std::uniform_real_distribution<double> d01(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const SystemModel m = oracle::random_model(rng);
        std::vector<double> g(m.num_pools(), 0.0), nu0(m.num_request_types(), 0.0);
        for (double& v : g)
            if (d01(rng) < 0.5) v = 3.0 * d01(rng);
        const Ranking o = rank_pairs(m, g, nu0);
        const RelaxedSolution sol = priority_policy(m, o, g);
        check_solution_invariants(m, sol);
    }
}

TEST_CASE("prefix independence: lower-ranked patterns cannot affect the prefix") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> d01(0.0, 1.0);
    int done = 0;
    while (done < 40) {
        SystemModel m = oracle::random_model(rng);
        const std::vector<double> g(m.num_pools(), 0.0), nu0(m.num_request_types(), 0.0);
        const Ranking o = rank_pairs(m, g, nu0);
        // pick a non-dummy pattern whose pairs all rank below some cut
        int victim = -1, cut = -1;
        for (int i = 0; i < m.num_patterns() && victim < 0; ++i) {
            if (m.patterns[i].dummy) continue;
            int first = o.size();
            for (int pos = 0; pos < o.size(); ++pos)
                if (o.order[pos].pattern == i) {
                    first = pos;
                    break;
                }
            if (first >= 2 && first < o.size()) {
                victim = i;
                cut = first;
            }
        }
        if (victim < 0) continue;
        const RelaxedSolution before = priority_policy(m, o, g);
        m.patterns[victim].service_rate *= 0.25 + d01(rng);  // perturb a low-priority pattern
        const RelaxedSolution after = priority_policy(m, o, g);
        for (int pos = 0; pos < cut; ++pos) {
            CHECK(after.activation[pos] == doctest::Approx(before.activation[pos]).epsilon(1e-12));
            CHECK(after.z[pos] == doctest::Approx(before.z[pos]).epsilon(1e-12));
        }
        ++done;
    }
}
