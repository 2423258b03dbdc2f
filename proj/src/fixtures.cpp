#include "ra/fixtures.hpp"

namespace ra {

namespace {

struct PatternSpec {
    int rt;                                  // 1-based request type
    std::vector<std::pair<int, int>> w;      // (1-based pool, count)
};

SystemModel build(const char* name, std::vector<int> caps, std::vector<double> costs,
                  std::vector<std::pair<double, double>> rts,  // (lambda0, reward)
                  std::vector<double> mu_of_rt, const std::vector<PatternSpec>& specs) {
    SystemModel m;
    m.name = name;
    m.capacities = std::move(caps);
    m.cost_rates = std::move(costs);
    for (auto [lambda, reward] : rts) m.request_types.push_back({lambda, reward});
    for (const PatternSpec& s : specs) {
        Pattern p;
        p.request_type = s.rt - 1;
        p.service_rate = mu_of_rt[s.rt - 1];
        p.weights.assign(m.capacities.size(), 0);
        for (auto [pool, count] : s.w) p.weights[pool - 1] = count;
        m.patterns.push_back(std::move(p));
    }
    m.finalize();
    return m;
}

}  // namespace

SystemModel fixture_fig1a() {
    return build(
        "fig1a", {5, 7, 6, 8, 6, 7, 6, 6, 9, 8, 8, 5, 8, 5},
        {9.046, 4.995, 0.679, 2.761, 9.010, 4.775, 3.033, 5.033, 3.318, 4.686, 3.302, 0.938,
         6.770, 7.775},
        {{1.275, 4026.22}, {1.203, 3871.33}, {1.134, 3731.69}, {1.314, 3242.58}},
        {0.255, 0.241, 0.227, 0.263},
        {
            // request type 1
            {1, {{12, 2}, {6, 3}, {13, 4}}},
            {1, {{12, 2}, {1, 3}, {13, 4}}},
            {1, {{7, 2}, {6, 3}, {13, 4}}},
            {1, {{7, 2}, {1, 3}, {13, 4}}},
            {1, {{11, 2}, {6, 3}, {13, 4}}},
            {1, {{11, 2}, {1, 3}, {13, 4}}},
            {1, {{2, 2}, {6, 3}, {13, 4}}},
            {1, {{2, 2}, {1, 3}, {13, 4}}},
            {1, {{14, 2}, {6, 3}, {13, 4}}},
            {1, {{14, 2}, {1, 3}, {13, 4}}},
            {1, {{5, 2}, {6, 3}, {13, 4}}},
            {1, {{5, 2}, {1, 3}, {13, 4}}},
            // request type 2
            {2, {{4, 1}, {8, 3}, {12, 1}}},
            {2, {{4, 1}, {8, 3}, {7, 1}}},
            {2, {{4, 1}, {8, 3}, {11, 1}}},
            {2, {{4, 1}, {8, 3}, {9, 1}}},
            {2, {{4, 1}, {8, 3}, {10, 1}}},
            {2, {{4, 1}, {8, 3}, {2, 1}}},
            {2, {{4, 1}, {8, 3}, {14, 1}}},
            {2, {{4, 1}, {8, 3}, {5, 1}}},
            // request type 3
            {3, {{11, 1}, {13, 1}, {6, 2}}},
            {3, {{11, 1}, {13, 1}, {1, 2}}},
            {3, {{9, 1}, {13, 1}, {6, 2}}},
            {3, {{11, 1}, {13, 1}, {1, 2}}},
            {3, {{10, 1}, {13, 1}, {6, 2}}},
            {3, {{10, 1}, {13, 1}, {1, 2}}},
            {3, {{2, 1}, {13, 1}, {6, 2}}},
            {3, {{2, 1}, {13, 1}, {1, 2}}},
            {3, {{5, 1}, {13, 1}, {6, 2}}},
            {3, {{5, 1}, {13, 1}, {1, 2}}},
            // request type 4
            {4, {{8, 2}, {4, 2}, {3, 2}}},
            {4, {{8, 2}, {4, 2}, {12, 2}}},
            {4, {{8, 2}, {4, 2}, {7, 2}}},
            {4, {{8, 2}, {4, 2}, {11, 2}}},
            {4, {{8, 2}, {4, 2}, {2, 2}}},
            {4, {{8, 2}, {4, 2}, {14, 2}}},
            {4, {{8, 2}, {4, 2}, {5, 2}}},
        });
}

SystemModel fixture_fig1b() {
    return build("fig1b", {8, 8, 9, 9, 9, 6}, {5.684, 7.249, 0.224, 4.969, 6.874, 8.539},
                 {{1.385, 3635.69}, {1.317, 3758.85}}, {0.277, 0.263},
                 {
                     {1, {{1, 1}, {4, 1}, {3, 1}}},
                     {1, {{1, 1}, {5, 1}, {3, 1}}},
                     {2, {{4, 2}, {6, 2}, {1, 4}}},
                     {2, {{5, 2}, {6, 2}, {1, 4}}},
                     {2, {{4, 2}, {6, 2}, {2, 4}}},
                     {2, {{5, 2}, {6, 2}, {2, 4}}},
                 });
}

SystemModel fixture_fig2() {
    return build(
        "fig2", {9, 7, 6, 7, 8, 7, 7, 6, 9, 7, 5, 6, 6, 5, 6},
        {9.995, 2.707, 2.237, 4.656, 0.624, 5.705, 0.385, 6.065, 7.492, 6.584, 1.085, 7.332,
         5.862, 1.938, 8.411},
        {{1.177, 3710.05}, {1.108, 3712.66}, {1.286, 3821.33}}, {0.235, 0.222, 0.257},
        {
            // request type 1
            {1, {{3, 4}, {7, 3}, {14, 1}}},
            {1, {{6, 4}, {7, 3}, {14, 1}}},
            {1, {{6, 4}, {1, 3}, {14, 1}}},
            {1, {{6, 4}, {1, 3}, {2, 1}}},
            {1, {{12, 4}, {1, 3}, {14, 1}}},
            {1, {{12, 4}, {1, 3}, {2, 1}}},
            {1, {{3, 4}, {7, 3}, {2, 1}}},
            {1, {{6, 4}, {7, 3}, {2, 1}}},
            {1, {{12, 4}, {7, 3}, {14, 1}}},
            {1, {{12, 4}, {7, 3}, {2, 1}}},
            {1, {{3, 4}, {1, 3}, {14, 1}}},
            {1, {{3, 4}, {1, 3}, {2, 1}}},
            {1, {{12, 4}, {7, 3}, {8, 1}}},
            {1, {{3, 4}, {7, 3}, {8, 1}}},
            {1, {{3, 4}, {1, 3}, {8, 1}}},
            {1, {{6, 4}, {1, 3}, {8, 1}}},
            {1, {{12, 4}, {1, 3}, {8, 1}}},
            {1, {{6, 4}, {7, 3}, {8, 1}}},
            {1, {{12, 4}, {7, 3}, {9, 1}}},
            {1, {{12, 4}, {1, 3}, {9, 1}}},
            {1, {{2, 4}, {7, 3}, {9, 1}}},
            {1, {{6, 4}, {7, 3}, {9, 1}}},
            {1, {{3, 4}, {1, 3}, {9, 1}}},
            {1, {{6, 4}, {1, 3}, {9, 1}}},
            {1, {{3, 4}, {7, 3}, {5, 1}}},
            {1, {{6, 4}, {7, 3}, {5, 1}}},
            {1, {{12, 4}, {7, 3}, {5, 1}}},
            {1, {{3, 4}, {1, 3}, {5, 1}}},
            {1, {{6, 4}, {1, 3}, {5, 1}}},
            {1, {{12, 4}, {1, 3}, {5, 1}}},
            // request type 2
            {2, {{10, 1}, {5, 3}, {14, 2}}},
            {2, {{10, 1}, {5, 3}, {2, 2}}},
            {2, {{10, 1}, {5, 3}, {8, 2}}},
            // request type 3
            {3, {{15, 2}, {11, 1}, {3, 3}}},
            {3, {{15, 2}, {11, 1}, {12, 3}}},
            {3, {{15, 2}, {4, 1}, {3, 3}}},
            {3, {{15, 2}, {4, 1}, {12, 3}}},
            {3, {{15, 2}, {13, 1}, {3, 3}}},
            {3, {{15, 2}, {13, 1}, {12, 3}}},
        });
}

std::optional<SystemModel> fixture_by_name(std::string_view name) {
    if (name == "fig1a") return fixture_fig1a();
    if (name == "fig1b") return fixture_fig1b();
    if (name == "fig2") return fixture_fig2();
    return std::nullopt;
}

std::vector<std::string_view> fixture_names() { return {"fig1a", "fig1b", "fig2"}; }

}  // namespace ra
