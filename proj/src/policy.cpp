#include "ra/policy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ra {

EpsilonSchedule epsilon_schedule(const SystemModel& m, const Ranking& o, double eps_m,
                                 std::span<const long long> capacities) {
    if (eps_m < 0.0 || eps_m > 1.0) throw std::invalid_argument("eps_m must lie in [0,1]");
    const int I = m.num_patterns();
    const int J = m.num_pools();

    EpsilonSchedule s;
    s.eps_m = eps_m;
    s.num_pools = J;
    s.num_patterns = I;
    s.frac.assign(static_cast<size_t>(J) * I, 0.0);

    const std::vector<int> prio = o.pattern_priority(m);
    for (int j = 0; j < J; ++j) {
        std::vector<int> users;
        for (int i : prio)
            if (!m.patterns[i].dummy && m.patterns[i].weights[j] > 0) users.push_back(i);
        const int mcount = static_cast<int>(users.size());
        double prev = -1.0;
        for (int k = 0; k < mcount; ++k) {
            const int i = users[k];
            const double base =
                static_cast<double>(m.patterns[i].weights[j] - 1) / static_cast<double>(capacities[j]);
            double v;
            if (eps_m == 0.0) {
                v = base;
            } else {
                v = std::max(base, eps_m * (k + 1) / mcount);
                if (v <= prev) v = std::nextafter(prev, 1.0);  // keep strictly increasing
                if (base > eps_m) s.clamped = true;            // eps_m below a base: raised
            }
            v = std::min(v, 1.0);
            s.frac[static_cast<size_t>(j) * I + i] = v;
            prev = v;
        }
    }
    return s;
}

PolicySpec PolicySpec::index(Ranking o, double eps_m) {
    PolicySpec s;
    s.kind = PolicyKind::Index;
    s.eps_m = eps_m;
    s.ranking = std::move(o);
    return s;
}

std::string PolicySpec::label() const {
    switch (kind) {
        case PolicyKind::Index: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "index(%g)", eps_m);
            return buf;
        }
        case PolicyKind::MaxReward: return "max-reward";
        case PolicyKind::MinCost: return "min-cost";
        case PolicyKind::Random: return "random";
    }
    return "?";
}

std::vector<int> baseline_priority(const SystemModel& m, PolicyKind kind) {
    std::vector<int> prio(m.num_patterns());
    std::iota(prio.begin(), prio.end(), 0);
    auto key = [&](int i) -> double {
        if (kind == PolicyKind::MaxReward) return m.reward(i) * m.patterns[i].service_rate;
        return m.pattern_cost_rate(i);
    };
    std::stable_sort(prio.begin(), prio.end(), [&](int a, int b) {
        const bool da = m.patterns[a].dummy, db = m.patterns[b].dummy;
        if (da != db) return db;  // dummies last
        if (da) return a < b;
        const double ka = key(a), kb = key(b);
        if (ka != kb) return kind == PolicyKind::MaxReward ? ka > kb : ka < kb;
        return a < b;
    });
    return prio;
}

DecisionEngine::DecisionEngine(const SystemModel& m, const PolicySpec& spec, long long h)
    : model_(m), kind_(spec.kind), h_(h) {
    if (h < 1) throw std::invalid_argument("scaling parameter h must be >= 1");
    const int I = m.num_patterns();
    const int J = m.num_pools();

    cap_.resize(J);
    for (int j = 0; j < J; ++j) cap_[j] = h * m.capacities[j];
    boundary_.resize(I);
    for (int i = 0; i < I; ++i)
        boundary_[i] = m.patterns[i].dummy ? 0 : h * static_cast<long long>(m.boundary_state(i));
    scratch_.assign(J, 0);

    EpsilonSchedule eps;
    switch (kind_) {
        case PolicyKind::Index: {
            if (spec.ranking.order.empty())
                throw std::invalid_argument("index policy requires a ranking");
            priority_ = spec.ranking.pattern_priority(m);
            eps = epsilon_schedule(m, spec.ranking, spec.eps_m, cap_);
            break;
        }
        case PolicyKind::MaxReward:
        case PolicyKind::MinCost: {
            priority_ = baseline_priority(m, kind_);
            Ranking o;  // pattern priority is all the schedule needs
            for (int i : priority_)
                o.order.push_back({i, 0});
            eps = epsilon_schedule(m, o, 0.0, cap_);
            break;
        }
        case PolicyKind::Random:
            return;  // decided at arrival epochs, no precompute
    }

    ceilings_.assign(static_cast<size_t>(J) * I, 0);
    for (int j = 0; j < J; ++j)
        for (int i = 0; i < I; ++i) {
            const long double t = static_cast<long double>(cap_[j]) * eps.at(j, i);
            const long long cut = static_cast<long long>(std::floor(t + 1e-9L));
            ceilings_[static_cast<size_t>(j) * I + i] = cap_[j] - cut;
            if (!m.patterns[i].dummy && m.patterns[i].weights[j] > 0)
                assert(ceilings_[static_cast<size_t>(j) * I + i] <=
                       cap_[j] - m.patterns[i].weights[j] + 1);
        }
}

void DecisionEngine::decide(std::span<const long long> N, std::span<const long long> usage,
                            std::vector<int>& chosen) const {
    assert(kind_ != PolicyKind::Random);
    const int I = model_.num_patterns();
    const int L = model_.num_request_types();
    chosen.assign(L, -1);
    std::fill(scratch_.begin(), scratch_.end(), 0);

    int assigned = 0;
    for (int i : priority_) {
        const Pattern& p = model_.patterns[i];
        const int l = p.request_type;
        if (chosen[l] >= 0) continue;
        if (p.dummy) {
            chosen[l] = i;
            if (++assigned == L) break;
            continue;
        }
        if (N[i] >= boundary_[i]) continue;  // sub-process ceiling, least priority
        bool ok = true;
        for (int j : p.pools) {
            if (usage[j] + scratch_[j] + 1 > ceilings_[static_cast<size_t>(j) * I + i]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        chosen[l] = i;
        for (int j : p.pools) scratch_[j] += p.weights[j];
        if (++assigned == L) break;
    }
    for (int l = 0; l < L; ++l)
        if (chosen[l] < 0) chosen[l] = model_.dummy_of[l];
}

int DecisionEngine::random_admit(int l, std::span<const long long> usage,
                                 std::mt19937_64& rng) const {
    int feasible[64];
    int count = 0;
    for (int i : model_.patterns_of[l]) {
        const Pattern& p = model_.patterns[i];
        if (p.dummy) continue;
        bool ok = true;
        for (int j : p.pools)
            if (usage[j] + p.weights[j] > cap_[j]) {
                ok = false;
                break;
            }
        if (ok && count < 64) feasible[count++] = i;
    }
    if (count == 0) return model_.dummy_of[l];
    if (count == 1) return feasible[0];
    return feasible[std::uniform_int_distribution<int>(0, count - 1)(rng)];
}

std::vector<long long> compute_usage(const SystemModel& m, std::span<const long long> N) {
    std::vector<long long> usage(m.num_pools(), 0);
    for (int i = 0; i < m.num_patterns(); ++i)
        for (int j : m.patterns[i].pools) usage[j] += m.patterns[i].weights[j] * N[i];
    return usage;
}

std::vector<int> index_decide(const SystemModel& m, const PolicySpec& spec, long long h,
                              std::span<const long long> N) {
    DecisionEngine eng(m, spec, h);
    const std::vector<long long> usage = compute_usage(m, N);
    std::vector<int> chosen;
    eng.decide(N, usage, chosen);
    return chosen;
}

std::vector<int> baseline_decide(const SystemModel& m, PolicyKind kind, long long h,
                                 std::span<const long long> N) {
    PolicySpec spec;
    spec.kind = kind;
    return index_decide(m, spec, h, N);
}

}  // namespace ra
