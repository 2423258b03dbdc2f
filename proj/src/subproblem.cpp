#include "ra/subproblem.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace ra {

double index_value(const SystemModel& m, int i, std::span<const double> gamma,
                   std::span<const double> nu) {
    const Pattern& p = m.patterns[i];
    const int l = p.request_type;
    if (p.dummy) return -nu[l];
    const double lambda = m.request_types[l].arrival_rate;
    const double r = m.request_types[l].reward;
    const double mu = p.service_rate;
    double cost = 0.0, gw = 0.0;
    for (int j : p.pools) {
        cost += m.cost_rates[j] * p.weights[j];
        gw += gamma[j] * p.weights[j];
    }
    return lambda * (r - cost / mu) - (1.0 + lambda / mu) * gw - nu[l];
}

double tie_tolerance(const SystemModel& m, int i) {
    const Pattern& p = m.patterns[i];
    const RequestType& rt = m.request_types[p.request_type];
    return 1e-9 * (1.0 + std::abs(rt.arrival_rate * rt.reward));
}

StationaryDistribution birth_death_stationary(double arrival, double mu,
                                              const std::vector<double>& alpha) {
    assert(arrival > 0.0 && mu > 0.0);
    const int n_states = static_cast<int>(alpha.size());
    StationaryDistribution d;
    d.pi.assign(n_states, 0.0);

    if (n_states > 30) {
        // log-space product keeps large arrival/mu ratios finite
        std::vector<double> logw(n_states, -std::numeric_limits<double>::infinity());
        logw[0] = 0.0;
        double acc = 0.0;
        for (int n = 1; n < n_states; ++n) {
            if (alpha[n - 1] <= 0.0) break;
            acc += std::log(alpha[n - 1]) + std::log(arrival) - std::log(n * mu);
            logw[n] = acc;
        }
        const double mx = *std::max_element(logw.begin(), logw.end());
        double total = 0.0;
        for (int n = 0; n < n_states; ++n) {
            d.pi[n] = std::isinf(logw[n]) ? 0.0 : std::exp(logw[n] - mx);
            total += d.pi[n];
        }
        for (double& v : d.pi) v /= total;
        return d;
    }

    double w = 1.0, total = 0.0;
    for (int n = 0; n < n_states; ++n) {
        if (n > 0) {
            if (alpha[n - 1] <= 0.0) break;
            w *= alpha[n - 1] * arrival / (n * mu);
        }
        d.pi[n] = w;
        total += w;
    }
    for (double& v : d.pi) v /= total;
    return d;
}

ThresholdResult threshold_policy(const SystemModel& m, int i, std::span<const double> gamma,
                                 std::span<const double> nu) {
    assert(!m.patterns[i].dummy);
    ThresholdResult res;
    res.xi = index_value(m, i, gamma, nu);
    const int n_states = m.state_space_size(i);
    res.activation.pattern = i;
    res.activation.alpha.assign(n_states, 0.0);
    res.tie = std::abs(res.xi) <= tie_tolerance(m, i);
    if (res.xi > 0.0 || res.tie)
        for (int n = 0; n + 1 < n_states; ++n) res.activation.alpha[n] = 1.0;
    return res;
}

double subproblem_value(const SystemModel& m, int i, const ActivationVector& act,
                        std::span<const double> gamma, std::span<const double> nu) {
    const Pattern& p = m.patterns[i];
    const int l = p.request_type;
    if (p.dummy) return -nu[l] * act.alpha[0];

    assert(act.alpha.back() == 0.0);
    const StationaryDistribution d =
        birth_death_stationary(m.request_types[l].arrival_rate, p.service_rate, act.alpha);
    double mean_n = 0.0, mean_a = 0.0;
    for (size_t n = 0; n < d.pi.size(); ++n) {
        mean_n += d.pi[n] * static_cast<double>(n);
        mean_a += d.pi[n] * act.alpha[n];
    }
    double gw = 0.0;
    for (int j : p.pools) gw += gamma[j] * p.weights[j];
    return m.revenue_rate(i) * mean_n - nu[l] * mean_a - gw * (mean_n + mean_a);
}

}  // namespace ra
