#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ra {

// Thrown by load_scenario on malformed documents or invariant violations.
// The message names the violated invariant.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RequestType {
    double arrival_rate = 0.0;  // lambda0, requests per unit time
    double reward = 0.0;        // revenue per served request

    bool operator==(const RequestType&) const = default;
};

struct Pattern {
    int request_type = 0;        // owning request type
    double service_rate = 0.0;   // mu_i; 0 for dummy patterns
    std::vector<int> weights;    // RUs per pool, size J
    bool dummy = false;

    // pools with positive weight, ascending
    std::vector<int> pools;

    bool operator==(const Pattern& o) const {
        return request_type == o.request_type && service_rate == o.service_rate &&
               weights == o.weights && dummy == o.dummy;
    }
};

// A validated problem instance. Immutable after construction; safe to share
// across threads. Pattern indices follow declaration order with the synthetic
// dummy patterns (one per request type) appended last.
struct SystemModel {
    std::string name;
    std::vector<int> capacities;       // C0_j, base RUs per pool
    std::vector<double> cost_rates;    // eps_j, revenue per RU per unit time
    std::vector<RequestType> request_types;
    std::vector<Pattern> patterns;

    // derived on finalize()
    std::vector<std::vector<int>> patterns_of;  // per RT, dummy last
    std::vector<int> dummy_of;                  // per RT

    int num_pools() const { return static_cast<int>(capacities.size()); }
    int num_request_types() const { return static_cast<int>(request_types.size()); }
    int num_patterns() const { return static_cast<int>(patterns.size()); }

    double arrival_rate(int i) const { return request_types[patterns[i].request_type].arrival_rate; }
    double reward(int i) const { return request_types[patterns[i].request_type].reward; }

    // r_l * mu_i - sum_j w_ji eps_j, revenue per instantiation per unit time
    double revenue_rate(int i) const;
    // sum_j w_ji eps_j
    double pattern_cost_rate(int i) const;

    // |N0_i|: min_j ceil(C0_j / w_ji) + 1 for non-dummy, 1 for dummy
    int state_space_size(int i) const;
    // boundary state |N0_i| - 1
    int boundary_state(int i) const { return state_space_size(i) - 1; }

    // fills derived members and checks all invariants; throws ScenarioError
    void finalize();

    bool operator==(const SystemModel& o) const {
        return capacities == o.capacities && cost_rates == o.cost_rates &&
               request_types == o.request_types && patterns == o.patterns;
    }
};

enum class RowType { type1, type2 };

// Pool j is type-2 iff more than one pattern has w_ji > 0.
std::vector<RowType> classify_rows(const SystemModel& m);

struct WeakCouplingReport {
    bool weakly_coupled = true;
    std::vector<int> offending;  // patterns touching >= 2 type-2 pools
};

// True iff every non-dummy pattern touches at most one type-2 pool.
WeakCouplingReport weak_coupling_check(const SystemModel& m);

// Parses and validates a scenario document (JSON, see README for the schema).
// Dummy patterns are synthesized automatically, one per request type.
SystemModel load_scenario(const std::string& document);

// Inverse of load_scenario up to formatting; dummies are omitted.
std::string serialize_scenario(const SystemModel& m);

}  // namespace ra
