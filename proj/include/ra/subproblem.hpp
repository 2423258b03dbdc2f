#pragma once

#include <span>
#include <vector>

#include "ra/model.hpp"

namespace ra {

// Relaxed per-state activation probabilities of one pattern's sub-process.
// For non-dummy patterns the boundary state is always passive.
struct ActivationVector {
    int pattern = 0;
    std::vector<double> alpha;  // size |N0_i|
};

struct StationaryDistribution {
    int pattern = 0;
    std::vector<double> pi;  // size |N0_i|, sums to 1
};

// Marginal-revenue index of pattern i under multipliers (gamma, nu):
//   Xi_i = lambda_l (r_l - (1/mu_i) sum_j eps_j w_ji)
//          - (1 + lambda_l/mu_i) sum_j w_ji gamma_j - nu_l
// and -nu_l for the dummy of request type l.
double index_value(const SystemModel& m, int i, std::span<const double> gamma,
                   std::span<const double> nu);

// |Xi| below this counts as a tie against zero (and against other indices).
double tie_tolerance(const SystemModel& m, int i);

// Stationary distribution of the birth-death chain with birth rate
// alpha(n) * arrival in state n and death rate n * mu. States above the first
// alpha(m) = 0 are unreachable and get probability zero. Products are taken in
// log space once the chain exceeds 30 states.
StationaryDistribution birth_death_stationary(double arrival, double mu,
                                              const std::vector<double>& alpha);

struct ThresholdResult {
    ActivationVector activation;
    double xi = 0.0;
    bool tie = false;  // |Xi| within tolerance; caller may resolve freely
};

// Prop.-1 optimal sub-problem policy: all-active below the boundary when
// Xi > 0, all-passive when Xi < 0.
ThresholdResult threshold_policy(const SystemModel& m, int i, std::span<const double> gamma,
                                 std::span<const double> nu);

// Lagrangian term of one sub-problem,
//   Lambda_i = (r mu - eps.w)(pi.N) - nu_l (pi.alpha) - gamma.(w ((pi.N)+(pi.alpha)))
// evaluated at the stationary distribution induced by alpha.
double subproblem_value(const SystemModel& m, int i, const ActivationVector& act,
                        std::span<const double> gamma, std::span<const double> nu);

}  // namespace ra
