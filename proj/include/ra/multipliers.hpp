#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ra/relaxed.hpp"

namespace ra {

struct Multipliers {
    std::vector<double> gamma;  // per pool, >= 0
    std::vector<double> nu;     // per request type
};

// The map T^o of Prop. 2: runs the water-filling at gamma0 to obtain
// nu(o, gamma0) and the critical pairs, then solves
//   Xi_{i_iota}(gamma, 0) = nu_{l_iota}(o, gamma0)   for iota critical,
//   gamma_j = 0                                       for non-critical pools,
// by back-substitution in reverse ranking order (the system is triangular:
// a critical pattern never touches an earlier critical pool). The result may
// have negative components.
std::vector<double> solve_T(const SystemModel& m, const Ranking& o,
                            std::span<const double> gamma0);

// gamma is decomposable for o iff o is consistent with Xi(gamma, 0) and gamma
// is a fixed point of T^o within 1e-6 (1 + |gamma|_inf).
bool check_decomposable(const SystemModel& m, std::span<const double> gamma, const Ranking& o);

// Corollary-1 route: when T^o(gamma) != gamma but T^o(gamma) >= 0 and o is
// still consistent at T^o(gamma), that image is itself a fixed point.
std::optional<std::vector<double>> decomposable_candidate(const SystemModel& m,
                                                          std::span<const double> gamma,
                                                          const Ranking& o);

struct FixedPointTrace {
    std::vector<std::vector<double>> gammas;  // gamma_0 .. gamma_U
    std::vector<Ranking> rankings;            // o_0 .. o_U
    std::vector<double> residuals;            // residuals[k-1] = |gamma_{k-1} - gamma_k|_2
    std::vector<char> clipped;                // per step: (.)^+ clamped a component
    int k_star = 0;                           // argmin residual, in [1, U]
    bool decomposable = false;

    const std::vector<double>& gamma_star() const { return gammas[k_star]; }
    const Ranking& ranking_star() const { return rankings[k_star]; }
};

// Damped iteration gamma_{k+1} = (c T^{o_k}(gamma_k) + (1-c) gamma_k)^+ with
// o_{k+1} ranked at gamma_{k+1} inheriting o_k's tie-breaking.
FixedPointTrace fixed_point_iteration(const SystemModel& m, std::span<const double> gamma0,
                                      double c = 0.5, int max_iterations = 50);

// Def. 2: the weight of pattern i on its unique shared pool, or on an
// argmin C0_j / w_ji pool when it shares none.
int w_star(const SystemModel& m, int i);

// Def. 3: pairs ranked by descending
//   Xi*_i = (Xi_i(0,0) - nu_l) / (w*_i (1 + lambda_l / mu_i)),
// dummies at 0, canonical tie-break.
Ranking xi_star_ranking(const SystemModel& m, std::span<const double> nu);

struct ClosedFormResult {
    bool heavy_traffic = false;      // nu(o, 0) == 0 held
    std::vector<double> gamma;       // only meaningful when heavy_traffic
    std::vector<double> nu;          // nu(o, 0) actually observed
};

// Prop. 4 closed form for weakly coupled systems in heavy traffic.
ClosedFormResult closed_form_gamma(const SystemModel& m, const Ranking& o);

}  // namespace ra
