#pragma once

#include <span>
#include <vector>

#include "ra/model.hpp"
#include "ra/subproblem.hpp"

namespace ra {

struct EpsilonSchedule;  // policy.hpp

struct PSPair {
    int pattern = 0;
    int state = 0;
    bool operator==(const PSPair&) const = default;
};

// A full ordering of all pattern-state pairs. Non-boundary pairs of a pattern
// are contiguous in increasing state order (they share one index value);
// boundary pairs of non-dummy patterns sit at the very end.
struct Ranking {
    std::vector<PSPair> order;

    int size() const { return static_cast<int>(order.size()); }
    // patterns in priority order (first appearance over the non-boundary section)
    std::vector<int> pattern_priority(const SystemModel& m) const;
};

// Pairs sorted by descending pattern index value Xi_i(gamma, nu). Ties (within
// the subproblem tie tolerance) keep the relative order of `tie_break` when
// given, else ascending pattern index.
Ranking rank_pairs(const SystemModel& m, std::span<const double> gamma,
                   std::span<const double> nu, const Ranking* tie_break = nullptr);

// True iff o orders patterns consistently with Xi(gamma, nu) up to the tie
// tolerance and has the required structure (states increasing within each
// pattern, boundary pairs last).
bool ranking_consistent(const SystemModel& m, const Ranking& o, std::span<const double> gamma,
                        std::span<const double> nu);

// Output of the fluid water-filling (Algorithm 1 in asymptotic coordinates).
struct RelaxedSolution {
    Ranking ranking;
    std::vector<double> activation;      // rho per ranked position, in [0,1]
    std::vector<double> nu;              // nu(o, gamma) per request type
    std::vector<int> critical_positions; // ranked positions where capacity bit
    std::vector<int> critical_pools;     // parallel: the binding pool
    std::vector<double> z;               // attractor mass per ranked position, sums to 1
    std::vector<double> blocking;        // per RT, fluid fraction routed to the dummy
    double revenue = 0.0;                // R(o)

    bool is_critical_pattern(int i) const;
};

// Water-fills arrival budgets lambda0 and capacities C0 in ranking order.
// Visiting pair (i, n) moves resting pattern-i mass from state n to n+1 until
// the request type's arrival budget or some pool's capacity is exhausted, then
// disables the affected later pairs. eps, when given, tightens pool j's
// capacity to C0_j (1 - eps_{j,i}) while pattern i's pairs are processed.
RelaxedSolution priority_policy(const SystemModel& m, const Ranking& o,
                                std::span<const double> gamma,
                                const EpsilonSchedule* eps = nullptr);

// R = I * sum_iota (r mu - eps.w) n_iota z_iota
double asymptotic_revenue(const SystemModel& m, const Ranking& o, std::span<const double> z);

}  // namespace ra
