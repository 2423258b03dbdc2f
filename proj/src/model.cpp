#include "ra/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace ra {

using nlohmann::json;

double SystemModel::revenue_rate(int i) const {
    const Pattern& p = patterns[i];
    if (p.dummy) return 0.0;
    return request_types[p.request_type].reward * p.service_rate - pattern_cost_rate(i);
}

double SystemModel::pattern_cost_rate(int i) const {
    const Pattern& p = patterns[i];
    double c = 0.0;
    for (int j : p.pools) c += cost_rates[j] * p.weights[j];
    return c;
}

int SystemModel::state_space_size(int i) const {
    const Pattern& p = patterns[i];
    if (p.dummy) return 1;
    int bound = std::numeric_limits<int>::max();
    for (int j : p.pools) {
        int b = (capacities[j] + p.weights[j] - 1) / p.weights[j];  // ceil
        bound = std::min(bound, b);
    }
    return bound + 1;
}

namespace {

[[noreturn]] void fail(const std::string& invariant, const std::string& detail) {
    throw ScenarioError("invariant violation [" + invariant + "]: " + detail);
}

}  // namespace

void SystemModel::finalize() {
    const int J = num_pools();
    const int L = num_request_types();

    if (J == 0) fail("pools_nonempty", "scenario declares no resource pools");
    if (L == 0) fail("request_types_nonempty", "scenario declares no request types");

    for (int j = 0; j < J; ++j) {
        if (capacities[j] < 1)
            fail("capacity_positive", "pool " + std::to_string(j + 1) + " has capacity " +
                                          std::to_string(capacities[j]));
        if (cost_rates[j] < 0.0)
            fail("cost_rate_nonnegative", "pool " + std::to_string(j + 1));
    }
    for (int l = 0; l < L; ++l) {
        if (!(request_types[l].arrival_rate > 0.0))
            fail("arrival_rate_positive", "request type " + std::to_string(l + 1));
        if (!(request_types[l].reward > 0.0))
            fail("reward_positive", "request type " + std::to_string(l + 1));
    }

    // synthesize missing dummies, one per request type, after declared patterns
    std::vector<bool> has_dummy(L, false);
    for (const Pattern& p : patterns)
        if (p.dummy) {
            if (has_dummy[p.request_type])
                fail("one_dummy_per_request_type",
                     "request type " + std::to_string(p.request_type + 1) + " has two dummies");
            has_dummy[p.request_type] = true;
        }
    for (int l = 0; l < L; ++l)
        if (!has_dummy[l]) {
            Pattern d;
            d.request_type = l;
            d.service_rate = 0.0;
            d.weights.assign(J, 0);
            d.dummy = true;
            patterns.push_back(d);
        }

    const int I = num_patterns();
    patterns_of.assign(L, {});
    dummy_of.assign(L, -1);
    for (int i = 0; i < I; ++i) {
        Pattern& p = patterns[i];
        if (p.request_type < 0 || p.request_type >= L)
            fail("pattern_request_type_in_range", "pattern " + std::to_string(i + 1));
        if (static_cast<int>(p.weights.size()) != J)
            fail("weights_dimension", "pattern " + std::to_string(i + 1));
        p.pools.clear();
        for (int j = 0; j < J; ++j) {
            if (p.weights[j] < 0)
                fail("weights_nonnegative_integers", "pattern " + std::to_string(i + 1));
            if (p.weights[j] > 0) p.pools.push_back(j);
        }
        if (p.dummy) {
            if (!p.pools.empty())
                fail("dummy_weights_zero", "pattern " + std::to_string(i + 1));
            if (dummy_of[p.request_type] >= 0)
                fail("one_dummy_per_request_type",
                     "request type " + std::to_string(p.request_type + 1));
            dummy_of[p.request_type] = i;
        } else {
            if (p.pools.empty())
                fail("non_dummy_pattern_has_positive_weight",
                     "pattern " + std::to_string(i + 1) + " has an all-zero weight vector");
            if (!(p.service_rate > 0.0))
                fail("service_rate_positive", "pattern " + std::to_string(i + 1));
        }
        patterns_of[p.request_type].push_back(i);
    }
    // dummies last within each P_l (declared patterns precede appended dummies,
    // and a declared-order scan keeps relative order)
    for (int l = 0; l < L; ++l) {
        auto& v = patterns_of[l];
        std::stable_partition(v.begin(), v.end(), [&](int i) { return !patterns[i].dummy; });
    }

    // no all-zero row of W
    for (int j = 0; j < J; ++j) {
        bool used = false;
        for (const Pattern& p : patterns) used = used || p.weights[j] > 0;
        if (!used)
            fail("every_pool_used", "pool " + std::to_string(j + 1) + " appears in no pattern");
    }
}

namespace {

double require_number(const json& v, const char* what) {
    if (!v.is_number()) throw ScenarioError(std::string("schema violation: ") + what + " must be a number");
    return v.get<double>();
}

int require_integer(const json& v, const char* what) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == std::floor(d)) return static_cast<int>(d);
    }
    throw ScenarioError(std::string("schema violation: ") + what + " must be an integer");
}

}  // namespace

SystemModel load_scenario(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("schema violation: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("schema violation: top level must be an object");
    for (const char* key : {"pools", "request_types", "patterns"})
        if (!doc.contains(key) || !doc[key].is_array())
            throw ScenarioError(std::string("schema violation: missing array field '") + key + "'");

    SystemModel m;
    if (doc.contains("name") && doc["name"].is_string()) m.name = doc["name"].get<std::string>();

    for (const json& p : doc["pools"]) {
        if (!p.is_object() || !p.contains("capacity") || !p.contains("cost_rate"))
            throw ScenarioError("schema violation: each pool needs 'capacity' and 'cost_rate'");
        m.capacities.push_back(require_integer(p["capacity"], "pool capacity"));
        m.cost_rates.push_back(require_number(p["cost_rate"], "pool cost_rate"));
    }
    for (const json& r : doc["request_types"]) {
        if (!r.is_object() || !r.contains("arrival_rate") || !r.contains("reward"))
            throw ScenarioError("schema violation: each request type needs 'arrival_rate' and 'reward'");
        RequestType rt;
        rt.arrival_rate = require_number(r["arrival_rate"], "arrival_rate");
        rt.reward = require_number(r["reward"], "reward");
        m.request_types.push_back(rt);
    }
    const int J = m.num_pools();
    for (const json& q : doc["patterns"]) {
        if (!q.is_object() || !q.contains("request_type") || !q.contains("service_rate") ||
            !q.contains("weights"))
            throw ScenarioError(
                "schema violation: each pattern needs 'request_type', 'service_rate' and 'weights'");
        if (q.contains("dummy") && q["dummy"].is_boolean() && q["dummy"].get<bool>())
            throw ScenarioError("schema violation: dummy patterns are implicit and may not be declared");
        Pattern p;
        p.request_type = require_integer(q["request_type"], "pattern request_type") - 1;
        p.service_rate = require_number(q["service_rate"], "pattern service_rate");
        p.weights.assign(J, 0);
        const json& w = q["weights"];
        auto put = [&](int pool1, int count) {
            if (pool1 < 1 || pool1 > J)
                fail("weight_pool_index_in_range", "pool index " + std::to_string(pool1));
            p.weights[pool1 - 1] = count;
        };
        if (w.is_array()) {
            for (const json& e : w) {
                if (!e.is_array() || e.size() != 2)
                    throw ScenarioError("schema violation: weights entries must be [pool_index, count]");
                put(require_integer(e[0], "weight pool index"), require_integer(e[1], "weight count"));
            }
        } else if (w.is_object()) {
            for (auto it = w.begin(); it != w.end(); ++it)
                put(std::stoi(it.key()), require_integer(it.value(), "weight count"));
        } else {
            throw ScenarioError("schema violation: weights must be an array of pairs or an object");
        }
        m.patterns.push_back(std::move(p));
    }

    m.finalize();
    return m;
}

std::string serialize_scenario(const SystemModel& m) {
    json doc;
    if (!m.name.empty()) doc["name"] = m.name;
    doc["pools"] = json::array();
    for (int j = 0; j < m.num_pools(); ++j)
        doc["pools"].push_back({{"capacity", m.capacities[j]}, {"cost_rate", m.cost_rates[j]}});
    doc["request_types"] = json::array();
    for (const RequestType& r : m.request_types)
        doc["request_types"].push_back({{"arrival_rate", r.arrival_rate}, {"reward", r.reward}});
    doc["patterns"] = json::array();
    for (const Pattern& p : m.patterns) {
        if (p.dummy) continue;
        json w = json::array();
        for (int j : p.pools) w.push_back({j + 1, p.weights[j]});
        doc["patterns"].push_back({{"request_type", p.request_type + 1},
                                   {"service_rate", p.service_rate},
                                   {"weights", w}});
    }
    return doc.dump(2);
}

std::vector<RowType> classify_rows(const SystemModel& m) {
    std::vector<RowType> rows(m.num_pools(), RowType::type1);
    for (int j = 0; j < m.num_pools(); ++j) {
        int users = 0;
        for (const Pattern& p : m.patterns) users += p.weights[j] > 0 ? 1 : 0;
        if (users > 1) rows[j] = RowType::type2;
    }
    return rows;
}

WeakCouplingReport weak_coupling_check(const SystemModel& m) {
    const std::vector<RowType> rows = classify_rows(m);
    WeakCouplingReport rep;
    for (int i = 0; i < m.num_patterns(); ++i) {
        if (m.patterns[i].dummy) continue;
        int shared = 0;
        for (int j : m.patterns[i].pools) shared += rows[j] == RowType::type2 ? 1 : 0;
        if (shared >= 2) rep.offending.push_back(i);
    }
    rep.weakly_coupled = rep.offending.empty();
    return rep;
}

}  // namespace ra
