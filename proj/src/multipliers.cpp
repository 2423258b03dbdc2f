#include "ra/multipliers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ra {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double fixed_point_tol(std::span<const double> gamma) { return 1e-6 * (1.0 + inf_norm(gamma)); }

}  // namespace

std::vector<double> solve_T(const SystemModel& m, const Ranking& o,
                            std::span<const double> gamma0) {
    const RelaxedSolution sol = priority_policy(m, o, gamma0);
    const std::vector<double> zeros(m.num_request_types(), 0.0);

    std::vector<double> gamma(m.num_pools(), 0.0);
    std::vector<char> solved(m.num_pools(), 0);
    // reverse ranking order: each equation's unsolved pools are all later
    for (int k = static_cast<int>(sol.critical_positions.size()) - 1; k >= 0; --k) {
        const int pos = sol.critical_positions[k];
        const int j = sol.critical_pools[k];
        const auto [i, n] = o.order[pos];
        const Pattern& p = m.patterns[i];
        const double lambda = m.request_types[p.request_type].arrival_rate;
        const double coef = 1.0 + lambda / p.service_rate;
        const double xi0 = index_value(m, i, gamma, zeros);  // gamma holds solved entries
        // xi0 = Xi_i(0,0) - coef * sum_{j' solved} w_{j'} gamma_{j'}; the rest are zero
        assert(p.weights[j] > 0 && !solved[j]);
        gamma[j] = (xi0 - sol.nu[p.request_type]) / (coef * p.weights[j]);
        solved[j] = 1;
    }
    return gamma;
}

bool check_decomposable(const SystemModel& m, std::span<const double> gamma, const Ranking& o) {
    const std::vector<double> zeros(m.num_request_types(), 0.0);
    if (!ranking_consistent(m, o, gamma, zeros)) return false;
    const std::vector<double> t = solve_T(m, o, gamma);
    double diff = 0.0;
    for (int j = 0; j < m.num_pools(); ++j) diff = std::max(diff, std::abs(t[j] - gamma[j]));
    return diff <= fixed_point_tol(gamma);
}

std::optional<std::vector<double>> decomposable_candidate(const SystemModel& m,
                                                          std::span<const double> gamma,
                                                          const Ranking& o) {
    const std::vector<double> t = solve_T(m, o, gamma);
    double diff = 0.0;
    for (int j = 0; j < m.num_pools(); ++j) diff = std::max(diff, std::abs(t[j] - gamma[j]));
    if (diff <= fixed_point_tol(gamma)) return std::nullopt;  // already a fixed point
    for (double v : t)
        if (v < 0.0) return std::nullopt;
    const std::vector<double> zeros(m.num_request_types(), 0.0);
    if (!ranking_consistent(m, o, t, zeros)) return std::nullopt;
    return t;
}

FixedPointTrace fixed_point_iteration(const SystemModel& m, std::span<const double> gamma0,
                                      double c, int max_iterations) {
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("damping must lie in [0,1]");
    if (max_iterations < 1) throw std::invalid_argument("need at least one iteration");
    const std::vector<double> zeros(m.num_request_types(), 0.0);

    FixedPointTrace tr;
    tr.gammas.emplace_back(gamma0.begin(), gamma0.end());
    tr.rankings.push_back(rank_pairs(m, gamma0, zeros, nullptr));

    for (int k = 0; k < max_iterations; ++k) {
        const std::vector<double>& g = tr.gammas.back();
        const std::vector<double> t = solve_T(m, tr.rankings.back(), g);
        std::vector<double> next(m.num_pools());
        bool clip = false;
        for (int j = 0; j < m.num_pools(); ++j) {
            const double v = c * t[j] + (1.0 - c) * g[j];
            next[j] = std::max(0.0, v);
            clip = clip || v < 0.0;
        }
        double res = 0.0;
        for (int j = 0; j < m.num_pools(); ++j) res += (next[j] - g[j]) * (next[j] - g[j]);
        tr.residuals.push_back(std::sqrt(res));
        tr.clipped.push_back(clip);
        tr.rankings.push_back(rank_pairs(m, next, zeros, &tr.rankings.back()));
        tr.gammas.push_back(std::move(next));
    }

    tr.k_star = 1 + static_cast<int>(std::min_element(tr.residuals.begin(), tr.residuals.end()) -
                                     tr.residuals.begin());
    tr.decomposable = check_decomposable(m, tr.gamma_star(), tr.ranking_star());
    return tr;
}

int w_star(const SystemModel& m, int i) {
    const WeakCouplingReport rep = weak_coupling_check(m);
    if (!rep.weakly_coupled) throw std::invalid_argument("w_star: model is not weakly coupled");
    const Pattern& p = m.patterns[i];
    if (p.dummy) throw std::invalid_argument("w_star: dummy pattern");

    const std::vector<RowType> rows = classify_rows(m);
    for (int j : p.pools)
        if (rows[j] == RowType::type2) return p.weights[j];
    int best = p.pools.front();
    for (int j : p.pools) {
        const double cur = static_cast<double>(m.capacities[j]) / p.weights[j];
        const double bst = static_cast<double>(m.capacities[best]) / p.weights[best];
        if (cur < bst) best = j;
    }
    return p.weights[best];
}

Ranking xi_star_ranking(const SystemModel& m, std::span<const double> nu) {
    if (!weak_coupling_check(m).weakly_coupled)
        throw std::invalid_argument("xi_star_ranking: model is not weakly coupled");
    const int I = m.num_patterns();
    const std::vector<double> zeros_g(m.num_pools(), 0.0);
    const std::vector<double> zeros_n(m.num_request_types(), 0.0);

    std::vector<double> score(I, 0.0), tol(I, 1e-12);
    for (int i = 0; i < I; ++i) {
        const Pattern& p = m.patterns[i];
        if (p.dummy) continue;
        const double lambda = m.request_types[p.request_type].arrival_rate;
        const double denom = w_star(m, i) * (1.0 + lambda / p.service_rate);
        score[i] = (index_value(m, i, zeros_g, zeros_n) - nu[p.request_type]) / denom;
        tol[i] = tie_tolerance(m, i) / denom;
    }

    std::vector<int> pats(I);
    std::iota(pats.begin(), pats.end(), 0);
    std::sort(pats.begin(), pats.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    for (size_t s = 0; s < pats.size();) {
        size_t e = s + 1;
        while (e < pats.size() &&
               score[pats[e - 1]] - score[pats[e]] <= std::max(tol[pats[e - 1]], tol[pats[e]]))
            ++e;
        if (e - s > 1) std::sort(pats.begin() + s, pats.begin() + e);
        s = e;
    }

    Ranking o;
    for (int i : pats) {
        if (m.patterns[i].dummy) {
            o.order.push_back({i, 0});
        } else {
            for (int n = 0; n < m.boundary_state(i); ++n) o.order.push_back({i, n});
        }
    }
    for (int i = 0; i < I; ++i)
        if (!m.patterns[i].dummy) o.order.push_back({i, m.boundary_state(i)});
    return o;
}

ClosedFormResult closed_form_gamma(const SystemModel& m, const Ranking& o) {
    if (!weak_coupling_check(m).weakly_coupled)
        throw std::invalid_argument("closed_form_gamma: model is not weakly coupled");
    const std::vector<double> zeros_g(m.num_pools(), 0.0);
    const std::vector<double> zeros_n(m.num_request_types(), 0.0);

    ClosedFormResult res;
    const RelaxedSolution sol = priority_policy(m, o, zeros_g);
    res.nu = sol.nu;
    for (int l = 0; l < m.num_request_types(); ++l) {
        const RequestType& rt = m.request_types[l];
        if (sol.nu[l] > 1e-9 * (1.0 + std::abs(rt.arrival_rate * rt.reward))) {
            res.heavy_traffic = false;
            return res;
        }
    }
    res.heavy_traffic = true;
    res.gamma.assign(m.num_pools(), 0.0);

    auto xi0 = [&](int i) { return index_value(m, i, zeros_g, zeros_n); };
    auto coef = [&](int i) {
        return 1.0 + m.request_types[m.patterns[i].request_type].arrival_rate /
                         m.patterns[i].service_rate;
    };

    const int K = static_cast<int>(sol.critical_positions.size());
    for (int k = 0; k < K; ++k) {
        const int j = sol.critical_pools[k];
        const int i = o.order[sol.critical_positions[k]].pattern;
        // another critical pool inside J_i selects the Eq. (26) case
        int other_pool = -1, other_pattern = -1;
        for (int k2 = 0; k2 < K; ++k2) {
            if (k2 == k) continue;
            const int j2 = sol.critical_pools[k2];
            if (m.patterns[i].weights[j2] > 0) {
                other_pool = j2;
                other_pattern = o.order[sol.critical_positions[k2]].pattern;
                break;
            }
        }
        if (other_pool < 0) {
            res.gamma[j] = xi0(i) / (m.patterns[i].weights[j] * coef(i));
        } else {
            const double a = xi0(i) / (m.patterns[i].weights[other_pool] * coef(i));
            const double b =
                xi0(other_pattern) / (m.patterns[other_pattern].weights[other_pool] * coef(other_pattern));
            res.gamma[j] = static_cast<double>(m.patterns[i].weights[other_pool]) /
                           m.patterns[i].weights[j] * (a - b);
        }
    }
    return res;
}

}  // namespace ra
