#include "ra/relaxed.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "ra/policy.hpp"

namespace ra {

namespace {
constexpr double kResidualTol = 1e-9;  // absolute, on budget/capacity residuals

double pair_tie_tol(const SystemModel& m, int a, int b) {
    return std::max(tie_tolerance(m, a), tie_tolerance(m, b));
}
}  // namespace

std::vector<int> Ranking::pattern_priority(const SystemModel& m) const {
    std::vector<int> out;
    out.reserve(m.num_patterns());
    std::vector<char> seen(m.num_patterns(), 0);
    for (const PSPair& p : order)
        if (!seen[p.pattern]) {
            seen[p.pattern] = 1;
            out.push_back(p.pattern);
        }
    return out;
}

Ranking rank_pairs(const SystemModel& m, std::span<const double> gamma,
                   std::span<const double> nu, const Ranking* tie_break) {
    const int I = m.num_patterns();
    std::vector<double> xi(I);
    for (int i = 0; i < I; ++i) xi[i] = index_value(m, i, gamma, nu);

    std::vector<int> prev_pos(I);
    std::iota(prev_pos.begin(), prev_pos.end(), 0);
    if (tie_break) {
        const std::vector<int> prio = tie_break->pattern_priority(m);
        for (int pos = 0; pos < static_cast<int>(prio.size()); ++pos) prev_pos[prio[pos]] = pos;
    }

    std::vector<int> pats(I);
    std::iota(pats.begin(), pats.end(), 0);
    std::sort(pats.begin(), pats.end(), [&](int a, int b) {
        if (xi[a] != xi[b]) return xi[a] > xi[b];
        return prev_pos[a] < prev_pos[b];
    });
    // re-run tie-break inside chained near-tie groups
    for (size_t s = 0; s < pats.size();) {
        size_t e = s + 1;
        while (e < pats.size() &&
               xi[pats[e - 1]] - xi[pats[e]] <= pair_tie_tol(m, pats[e - 1], pats[e]))
            ++e;
        if (e - s > 1)
            std::sort(pats.begin() + s, pats.begin() + e,
                      [&](int a, int b) { return prev_pos[a] < prev_pos[b]; });
        s = e;
    }

    Ranking o;
    for (int i : pats) {
        const int boundary = m.boundary_state(i);
        if (m.patterns[i].dummy) {
            o.order.push_back({i, 0});
        } else {
            for (int n = 0; n < boundary; ++n) o.order.push_back({i, n});
        }
    }
    for (int i = 0; i < I; ++i)
        if (!m.patterns[i].dummy) o.order.push_back({i, m.boundary_state(i)});
    return o;
}

bool ranking_consistent(const SystemModel& m, const Ranking& o, std::span<const double> gamma,
                        std::span<const double> nu) {
    const int I = m.num_patterns();
    int total_pairs = 0;
    for (int i = 0; i < I; ++i) total_pairs += m.state_space_size(i);
    if (o.size() != total_pairs) return false;

    std::vector<double> xi(I);
    for (int i = 0; i < I; ++i) xi[i] = index_value(m, i, gamma, nu);

    std::vector<int> next_state(I, 0);
    int prev_pattern = -1;
    bool in_boundary_block = false;
    for (const PSPair& p : o.order) {
        const bool boundary = !m.patterns[p.pattern].dummy && p.state == m.boundary_state(p.pattern);
        if (boundary) {
            in_boundary_block = true;
        } else {
            if (in_boundary_block) return false;  // non-boundary pair after boundary block
            if (p.state != next_state[p.pattern]) return false;
            if (prev_pattern >= 0 && prev_pattern != p.pattern) {
                if (xi[prev_pattern] < xi[p.pattern] - pair_tie_tol(m, prev_pattern, p.pattern))
                    return false;
            }
            prev_pattern = p.pattern;
        }
        if (p.state != next_state[p.pattern]) return false;
        ++next_state[p.pattern];
    }
    for (int i = 0; i < I; ++i)
        if (next_state[i] != m.state_space_size(i)) return false;
    return true;
}

bool RelaxedSolution::is_critical_pattern(int i) const {
    for (int pos : critical_positions)
        if (ranking.order[pos].pattern == i) return true;
    return false;
}

RelaxedSolution priority_policy(const SystemModel& m, const Ranking& o,
                                std::span<const double> gamma, const EpsilonSchedule* eps) {
    const int I = m.num_patterns();
    const int J = m.num_pools();
    const int L = m.num_request_types();
    {
        int total_pairs = 0;
        for (int i = 0; i < I; ++i) total_pairs += m.state_space_size(i);
        if (o.size() != total_pairs)
            throw std::invalid_argument("priority_policy: ranking does not cover all pairs");
        for (int j = 0; j < J; ++j)
            if (gamma[j] < 0.0) throw std::invalid_argument("priority_policy: negative gamma");
    }

    const std::vector<double> nu0(L, 0.0);

    std::vector<std::vector<double>> x(I);  // resting mass per pattern state
    for (int i = 0; i < I; ++i) {
        x[i].assign(m.state_space_size(i), 0.0);
        x[i][0] = 1.0;
    }
    std::vector<double> throughput(L, 0.0);
    std::vector<double> usage(J, 0.0);
    std::vector<char> rt_dead(L, 0), pat_dead(I, 0);

    RelaxedSolution sol;
    sol.ranking = o;
    sol.activation.assign(o.size(), 0.0);
    sol.nu.assign(L, 0.0);
    sol.blocking.assign(L, 0.0);
    std::vector<char> nu_set(L, 0);

    auto kill_pool_users = [&](int j) {
        for (int i = 0; i < I; ++i)
            if (m.patterns[i].weights[j] > 0) pat_dead[i] = 1;
    };

    // Event rules mirror the h -> infinity limit of the finite-h algorithm:
    // a constraint produces an event only when it strictly cuts the move
    // (delta below the available mass). A pattern that parks exactly at a
    // pool's capacity leaves no event behind; the next pattern needing that
    // pool is cut at zero and becomes the critical pair there. Likewise an
    // arrival budget that balances exactly at a full move never binds.
    for (int pos = 0; pos < o.size(); ++pos) {
        const auto [i, n] = o.order[pos];
        const Pattern& p = m.patterns[i];
        const int l = p.request_type;
        if (rt_dead[l] || pat_dead[i]) continue;

        if (p.dummy) {
            // the dummy absorbs whatever is left of the action budget
            const double lambda = m.request_types[l].arrival_rate;
            const double frac = std::clamp((lambda - throughput[l]) / lambda, 0.0, 1.0);
            sol.activation[pos] = frac;
            sol.blocking[l] = frac;
            sol.nu[l] = 0.0;  // Xi of a dummy at nu = 0
            nu_set[l] = 1;
            rt_dead[l] = 1;
            continue;
        }
        if (n == m.boundary_state(i)) continue;  // always passive

        const double lambda = m.request_types[l].arrival_rate;
        const double mu = p.service_rate;
        const double avail = x[i][n];
        if (avail <= kResidualTol) continue;
        const double d_budget = (lambda - throughput[l]) / mu;
        double d_cap = std::numeric_limits<double>::infinity();
        for (int j : p.pools) {
            const double frac = eps ? eps->at(j, i) : 0.0;
            const double cap = m.capacities[j] * (1.0 - frac);
            d_cap = std::min(d_cap, (cap - usage[j]) / p.weights[j]);
        }
        const double delta = std::max(0.0, std::min({avail, d_budget, d_cap}));

        x[i][n] -= delta;
        x[i][n + 1] += delta;
        throughput[l] += delta * mu;
        for (int j : p.pools) usage[j] += delta * p.weights[j];
        sol.activation[pos] = delta;

        const bool budget_cuts = d_budget < avail - kResidualTol && d_budget <= d_cap + kResidualTol;
        const bool capacity_cuts = d_cap < avail - kResidualTol && d_cap < d_budget - kResidualTol;
        if (budget_cuts) {
            if (d_budget > kResidualTol) {  // equality reached while activating this pair
                sol.nu[l] = index_value(m, i, gamma, nu0);
                nu_set[l] = 1;
                rt_dead[l] = 1;
            }
            // an already-exhausted budget leaves the pair passive without an
            // event; the request type's dummy settles nu later
        } else if (capacity_cuts) {
            int critical = -1;
            for (int j : p.pools) {
                const double frac = eps ? eps->at(j, i) : 0.0;
                if (m.capacities[j] * (1.0 - frac) - usage[j] <= kResidualTol) {
                    critical = j;
                    break;  // lowest pool index on simultaneous saturation
                }
            }
            assert(critical >= 0);
            sol.critical_positions.push_back(pos);
            sol.critical_pools.push_back(critical);
            kill_pool_users(critical);
        }
    }

    for (int l = 0; l < L; ++l) assert(nu_set[l]);

    sol.z.assign(o.size(), 0.0);
    for (int pos = 0; pos < o.size(); ++pos) {
        const auto [i, n] = o.order[pos];
        sol.z[pos] = x[i][n] / static_cast<double>(I);
    }
    sol.revenue = asymptotic_revenue(m, o, sol.z);
    return sol;
}

double asymptotic_revenue(const SystemModel& m, const Ranking& o, std::span<const double> z) {
    double r = 0.0;
    for (int pos = 0; pos < o.size(); ++pos) {
        const auto [i, n] = o.order[pos];
        r += m.revenue_rate(i) * n * z[pos];
    }
    return r * m.num_patterns();
}

}  // namespace ra
