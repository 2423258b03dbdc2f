#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ra/policy.hpp"

namespace ra {

// Raised when a policy admits past a capacity limit. Indicates a policy bug;
// the simulator checks every event unconditionally.
class CapacityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    long long h = 1;
    double horizon = 0.0;          // time units; 0 picks 2000 / min(lambda0, mu)
    double warmup_fraction = 0.2;  // in [0, 1)
    int replications_initial = 5;
    int replications_max = 80;
    double confidence = 0.95;
    double target_rel_halfwidth = 0.03;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: RA_THREADS env or OpenMP default

    double resolved_horizon(const SystemModel& m) const;
};

struct SimResult {
    double revenue = 0.0;   // mean normalized long-run average revenue
    double ci_half = 0.0;   // Student-t half-width at the configured level
    bool ci_met = false;    // half-width target reached within max replications
    std::vector<double> occupancy;     // per pattern, time-average N_i / h
    std::vector<double> blocking;      // per RT, fraction of arrivals sent to the dummy
    std::vector<double> blocking_ci;   // per RT, Student-t half-width over replications
    int replications = 0;
    long long events = 0;
};

SimResult simulate(const SystemModel& m, const PolicySpec& policy, const SimConfig& cfg);

struct SweepRow {
    std::string policy;
    double eps_m = 0.0;
    long long h = 1;
    double revenue = 0.0;
    double ci_half = 0.0;
    double ref_revenue = 0.0;
    double rel_gap = 0.0;  // (ref - revenue) / ref
    std::vector<double> blocking;
    int replications = 0;
    long long events = 0;
    bool ci_met = true;
};

// one simulate() per (policy, h) cell, gap measured against ref_revenue
std::vector<SweepRow> sweep_h(const SystemModel& m, const std::vector<PolicySpec>& policies,
                              const std::vector<long long>& h_list, const SimConfig& cfg,
                              double ref_revenue);

// Max relative deviation of simulated per-pattern occupancy from the
// attractor prediction I sum_{iota: i} n_iota z_iota, over patterns holding
// non-negligible attractor mass.
double occupancy_vs_attractor(const SystemModel& m, const PolicySpec& policy, long long h,
                              const SimConfig& cfg, const RelaxedSolution& relaxed);

// attractor occupancy per pattern (= sum_n n x_i(n))
std::vector<double> attractor_occupancy(const SystemModel& m, const RelaxedSolution& relaxed);

}  // namespace ra
