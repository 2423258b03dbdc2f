#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ra/relaxed.hpp"

namespace ra {

// Reservation fractions per (pool, pattern). Within a pool, fractions are
// strictly increasing along the ranking among its users once eps_m exceeds
// the base (w_ji - 1) / C_j, which encodes strict pattern priorities.
struct EpsilonSchedule {
    double eps_m = 0.0;
    int num_pools = 0;
    int num_patterns = 0;
    std::vector<double> frac;  // [j * num_patterns + i]
    bool clamped = false;      // eps_m was below some base and got raised

    double at(int j, int i) const { return frac[static_cast<size_t>(j) * num_patterns + i]; }
};

// Builds the linear-ramp schedule against effective capacities C (already
// h-scaled). eps_m = 0 keeps every entry at its base value, which makes the
// tightened constraints coincide with the plain capacity constraints.
EpsilonSchedule epsilon_schedule(const SystemModel& m, const Ranking& o, double eps_m,
                                 std::span<const long long> capacities);

enum class PolicyKind { Index, MaxReward, MinCost, Random };

struct PolicySpec {
    PolicyKind kind = PolicyKind::Index;
    double eps_m = 0.0;  // Index only
    Ranking ranking;     // Index only

    static PolicySpec index(Ranking o, double eps_m);
    static PolicySpec max_reward() { return {PolicyKind::MaxReward, 0.0, {}}; }
    static PolicySpec min_cost() { return {PolicyKind::MinCost, 0.0, {}}; }
    static PolicySpec random() { return {PolicyKind::Random, 0.0, {}}; }

    std::string label() const;
};

// Greedy state-feedback admission per Algorithm 2, compiled for one scaling
// parameter. Selections are recomputed from the aggregate state; the joint
// capacity check reserves room for every already-assigned request type.
class DecisionEngine {
public:
    DecisionEngine(const SystemModel& m, const PolicySpec& spec, long long h);

    // chosen[l] := pattern serving an arrival of type l (possibly the dummy).
    // usage must equal W N. Exactly one pattern per request type, always.
    void decide(std::span<const long long> N, std::span<const long long> usage,
                std::vector<int>& chosen) const;

    // uniform over feasible non-dummy patterns of type l (capacity only);
    // dummy when none fits
    int random_admit(int l, std::span<const long long> usage, std::mt19937_64& rng) const;

    const std::vector<long long>& capacities() const { return cap_; }
    long long boundary_cap(int i) const { return boundary_[i]; }
    // tightened per-(pool, pattern) admission ceiling, ceil(C_j (1 - eps_ji))
    long long ceiling(int j, int i) const {
        return ceilings_[static_cast<size_t>(j) * model_.num_patterns() + i];
    }

private:
    const SystemModel& model_;
    PolicyKind kind_;
    long long h_;
    std::vector<int> priority_;          // patterns in priority order (incl. dummies)
    std::vector<long long> cap_;         // h C0
    std::vector<long long> ceilings_;    // [j * I + i] = ceil(C_j (1 - eps_ji))
    std::vector<long long> boundary_;    // per pattern: h (|N0_i| - 1)
    mutable std::vector<long long> scratch_;  // per-pool weight of assigned patterns
};

// Convenience wrappers over DecisionEngine for direct use in tests.
std::vector<int> index_decide(const SystemModel& m, const PolicySpec& spec, long long h,
                              std::span<const long long> N);
std::vector<int> baseline_decide(const SystemModel& m, PolicyKind kind, long long h,
                                 std::span<const long long> N);

std::vector<long long> compute_usage(const SystemModel& m, std::span<const long long> N);

// priority orders used by the baselines: reward rate descending / total cost
// rate ascending, dummies last
std::vector<int> baseline_priority(const SystemModel& m, PolicyKind kind);

}  // namespace ra
