#include "ra/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ra {

double SimConfig::resolved_horizon(const SystemModel& m) const {
    if (horizon > 0.0) return horizon;
    double lo = std::numeric_limits<double>::infinity();
    for (const RequestType& r : m.request_types) lo = std::min(lo, r.arrival_rate);
    for (const Pattern& p : m.patterns)
        if (!p.dummy) lo = std::min(lo, p.service_rate);
    return 2000.0 / lo;
}

namespace {

struct ReplicationStats {
    double revenue = 0.0;             // normalized by h and window length
    std::vector<double> occupancy;    // per pattern, time average / h
    std::vector<double> blocking;     // per RT
    long long events = 0;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

ReplicationStats run_replication(const SystemModel& m, const PolicySpec& spec,
                                 const SimConfig& cfg, double horizon, int rep) {
    const int I = m.num_patterns();
    const int J = m.num_pools();
    const int L = m.num_request_types();
    const long long h = cfg.h;
    const bool randomized = spec.kind == PolicyKind::Random;

    DecisionEngine engine(m, spec, h);
    std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(rep));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto draw_exp = [&](double rate) { return -std::log1p(-uni(rng)) / rate; };

    std::vector<long long> N(I, 0), usage(J, 0);
    std::vector<int> chosen;
    if (!randomized) engine.decide(N, usage, chosen);

    std::vector<double> arr_rate(L), arr_cum(L);
    double total_arrival = 0.0;
    for (int l = 0; l < L; ++l) {
        arr_rate[l] = static_cast<double>(h) * m.request_types[l].arrival_rate;
        total_arrival += arr_rate[l];
        arr_cum[l] = total_arrival;
    }
    std::vector<double> revrate(I), mu(I);
    for (int i = 0; i < I; ++i) {
        revrate[i] = m.revenue_rate(i);
        mu[i] = m.patterns[i].service_rate;
    }

    const double t_end = horizon;
    const double t_warm = cfg.warmup_fraction * horizon;
    const double window = t_end - t_warm;

    double t = 0.0;
    double total_departure = 0.0;  // sum N_i mu_i
    double revenue_now = 0.0;      // sum revrate_i N_i
    double revenue_acc = 0.0;
    std::vector<double> occ_acc(I, 0.0), last_sync(I, t_warm);
    std::vector<long long> arrivals(L, 0), blocked(L, 0);
    long long events = 0;

    auto clip = [&](double x) { return std::min(std::max(x, t_warm), t_end); };

    while (true) {
        const double rate = total_arrival + total_departure;
        const double te = t + draw_exp(rate);
        if (te > t_warm && t < t_end) revenue_acc += revenue_now * (clip(te) - clip(t));
        if (te >= t_end) break;
        t = te;
        ++events;

        const double u = uni(rng) * rate;
        if (u < total_arrival) {
            int l = 0;
            while (arr_cum[l] <= u && l + 1 < L) ++l;
            if (t >= t_warm) ++arrivals[l];
            const int i = randomized ? engine.random_admit(l, usage, rng) : chosen[l];
            if (m.patterns[i].dummy) {
                if (t >= t_warm) ++blocked[l];
                continue;  // state unchanged: decisions stay valid
            }
            occ_acc[i] += static_cast<double>(N[i]) * (clip(t) - last_sync[i]);
            last_sync[i] = clip(t);
            ++N[i];
            for (int j : m.patterns[i].pools) {
                usage[j] += m.patterns[i].weights[j];
                if (usage[j] > engine.capacities()[j])
                    throw CapacityViolation("pool " + std::to_string(j + 1) +
                                            " overflows under " + spec.label());
            }
            if (!randomized && N[i] > engine.boundary_cap(i))
                throw CapacityViolation("pattern " + std::to_string(i + 1) +
                                        " exceeds its sub-process ceiling");
            total_departure += mu[i];
            revenue_now += revrate[i];
        } else {
            double v = u - total_arrival;
            int i = -1;
            for (int k = 0; k < I; ++k) {
                const double r = static_cast<double>(N[k]) * mu[k];
                if (v < r) {
                    i = k;
                    break;
                }
                v -= r;
            }
            if (i < 0) {  // rounding drift: fall back to any occupied pattern
                for (int k = I - 1; k >= 0; --k)
                    if (N[k] > 0) {
                        i = k;
                        break;
                    }
                if (i < 0) continue;
            }
            occ_acc[i] += static_cast<double>(N[i]) * (clip(t) - last_sync[i]);
            last_sync[i] = clip(t);
            --N[i];
            for (int j : m.patterns[i].pools) usage[j] -= m.patterns[i].weights[j];
            total_departure -= mu[i];
            revenue_now -= revrate[i];
        }
        if (!randomized) engine.decide(N, usage, chosen);
        if ((events & 0xFFFFF) == 0) {  // resync incrementally tracked rates
            total_departure = 0.0;
            revenue_now = 0.0;
            for (int i = 0; i < I; ++i) {
                total_departure += static_cast<double>(N[i]) * mu[i];
                revenue_now += static_cast<double>(N[i]) * revrate[i];
            }
        }
    }

    ReplicationStats st;
    st.events = events;
    st.revenue = revenue_acc / (window * static_cast<double>(h));
    st.occupancy.resize(I);
    for (int i = 0; i < I; ++i) {
        occ_acc[i] += static_cast<double>(N[i]) * (t_end - last_sync[i]);
        st.occupancy[i] = occ_acc[i] / (window * static_cast<double>(h));
    }
    st.blocking.resize(L);
    for (int l = 0; l < L; ++l)
        st.blocking[l] = arrivals[l] > 0
                             ? static_cast<double>(blocked[l]) / static_cast<double>(arrivals[l])
                             : 0.0;
    return st;
}

}  // namespace

SimResult simulate(const SystemModel& m, const PolicySpec& policy, const SimConfig& cfg) {
    if (cfg.h < 1) throw std::invalid_argument("h must be >= 1");
    if (cfg.warmup_fraction < 0.0 || cfg.warmup_fraction >= 1.0)
        throw std::invalid_argument("warmup fraction must lie in [0,1)");
    const double horizon = cfg.resolved_horizon(m);
    const int threads = resolve_threads(cfg.threads);

    std::vector<ReplicationStats> reps;
    int target = std::max(2, cfg.replications_initial);
    double mean = 0.0, half = 0.0;
    bool met = false;

    while (true) {
        const int begin = static_cast<int>(reps.size());
        reps.resize(target);
        if (threads > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
            for (int r = begin; r < target; ++r)
                reps[r] = run_replication(m, policy, cfg, horizon, r);
        } else {
            for (int r = begin; r < target; ++r)
                reps[r] = run_replication(m, policy, cfg, horizon, r);
        }

        const int n = target;
        mean = 0.0;
        for (const auto& s : reps) mean += s.revenue;
        mean /= n;
        double var = 0.0;
        for (const auto& s : reps) var += (s.revenue - mean) * (s.revenue - mean);
        var /= (n - 1);
        const boost::math::students_t dist(n - 1);
        const double tq = boost::math::quantile(dist, 0.5 + cfg.confidence / 2.0);
        half = tq * std::sqrt(var / n);

        met = half <= cfg.target_rel_halfwidth * std::abs(mean);
        if (met || target >= cfg.replications_max) break;
        target = std::min(cfg.replications_max, target * 2);
    }

    SimResult res;
    res.revenue = mean;
    res.ci_half = half;
    res.ci_met = met;
    res.replications = static_cast<int>(reps.size());
    res.occupancy.assign(m.num_patterns(), 0.0);
    res.blocking.assign(m.num_request_types(), 0.0);
    res.blocking_ci.assign(m.num_request_types(), 0.0);
    for (const auto& s : reps) {
        res.events += s.events;
        for (int i = 0; i < m.num_patterns(); ++i) res.occupancy[i] += s.occupancy[i];
        for (int l = 0; l < m.num_request_types(); ++l) res.blocking[l] += s.blocking[l];
    }
    for (double& v : res.occupancy) v /= res.replications;
    for (double& v : res.blocking) v /= res.replications;
    {
        const int n = res.replications;
        const boost::math::students_t dist(n - 1);
        const double tq = boost::math::quantile(dist, 0.5 + cfg.confidence / 2.0);
        for (int l = 0; l < m.num_request_types(); ++l) {
            double var = 0.0;
            for (const auto& s : reps)
                var += (s.blocking[l] - res.blocking[l]) * (s.blocking[l] - res.blocking[l]);
            var /= (n - 1);
            res.blocking_ci[l] = tq * std::sqrt(var / n);
        }
    }
    return res;
}

std::vector<SweepRow> sweep_h(const SystemModel& m, const std::vector<PolicySpec>& policies,
                              const std::vector<long long>& h_list, const SimConfig& cfg,
                              double ref_revenue) {
    std::vector<SweepRow> rows;
    for (const PolicySpec& p : policies)
        for (long long h : h_list) {
            SimConfig c = cfg;
            c.h = h;
            const SimResult r = simulate(m, p, c);
            SweepRow row;
            row.policy = p.label();
            row.eps_m = p.kind == PolicyKind::Index ? p.eps_m : 0.0;
            row.h = h;
            row.revenue = r.revenue;
            row.ci_half = r.ci_half;
            row.ref_revenue = ref_revenue;
            row.rel_gap = ref_revenue != 0.0 ? (ref_revenue - r.revenue) / ref_revenue : 0.0;
            row.blocking = r.blocking;
            row.replications = r.replications;
            row.events = r.events;
            row.ci_met = r.ci_met;
            rows.push_back(std::move(row));
        }
    return rows;
}

std::vector<double> attractor_occupancy(const SystemModel& m, const RelaxedSolution& relaxed) {
    std::vector<double> occ(m.num_patterns(), 0.0);
    for (int pos = 0; pos < relaxed.ranking.size(); ++pos) {
        const auto [i, n] = relaxed.ranking.order[pos];
        occ[i] += static_cast<double>(n) * relaxed.z[pos] * m.num_patterns();
    }
    return occ;
}

double occupancy_vs_attractor(const SystemModel& m, const PolicySpec& policy, long long h,
                              const SimConfig& cfg, const RelaxedSolution& relaxed) {
    SimConfig c = cfg;
    c.h = h;
    const SimResult r = simulate(m, policy, c);
    const std::vector<double> pred = attractor_occupancy(m, relaxed);
    double top = 0.0;
    for (double v : pred) top = std::max(top, v);
    double dev = 0.0;
    for (int i = 0; i < m.num_patterns(); ++i) {
        if (pred[i] <= 1e-3 * top) continue;
        dev = std::max(dev, std::abs(r.occupancy[i] - pred[i]) / pred[i]);
    }
    return dev;
}

}  // namespace ra
