// Command-line front end: scenario loading, multiplier search, relaxed
// solutions, policy simulation sweeps and figure-reproduction recipes.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ra/fixtures.hpp"
#include "ra/multipliers.hpp"
#include "ra/simulator.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ra::SystemModel resolve_scenario(const std::string& ref) {
    if (auto m = ra::fixture_by_name(ref)) return *m;
    std::ifstream in(ref);
    if (!in) throw UsageError("scenario '" + ref + "' is neither a bundled fixture nor a readable file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        ra::SystemModel m = ra::load_scenario(ss.str());
        if (m.name.empty()) m.name = ref;
        return m;
    } catch (const ra::ScenarioError& e) {
        throw UsageError(std::string("bad scenario: ") + e.what());
    }
}

std::vector<double> parse_gamma(const std::string& text, int J) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw UsageError("cannot parse gamma component '" + tok + "'");
        }
    }
    if (out.size() == 1) out.assign(J, out[0]);
    if (static_cast<int>(out.size()) != J)
        throw UsageError("gamma needs 1 or " + std::to_string(J) + " components");
    for (double v : out)
        if (v < 0.0) throw UsageError("gamma components must be nonnegative");
    return out;
}

struct PolicyRequest {
    ra::PolicyKind kind;
    double eps_m = 0.0;
};

PolicyRequest parse_policy(const std::string& text) {
    if (text == "max-reward") return {ra::PolicyKind::MaxReward};
    if (text == "min-cost") return {ra::PolicyKind::MinCost};
    if (text == "random") return {ra::PolicyKind::Random};
    if (text.rfind("index", 0) == 0) {
        PolicyRequest r{ra::PolicyKind::Index, 0.0};
        const auto eq = text.find("eps=");
        if (eq != std::string::npos) {
            try {
                r.eps_m = std::stod(text.substr(eq + 4));
            } catch (...) {
                throw UsageError("cannot parse '" + text + "'");
            }
        }
        if (r.eps_m < 0.0 || r.eps_m > 1.0) throw UsageError("eps out of range in '" + text + "'");
        return r;
    }
    throw UsageError("unknown policy '" + text + "' (want index:eps=X, max-reward, min-cost, random)");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw UsageError("cannot open output file '" + path + "'");
    return file;
}

struct RankingChoice {
    ra::Ranking ranking;
    std::vector<double> gamma;
    double reference;  // R(o) of the chosen ranking
    std::string source;
};

ra::Ranking ranking_from_file(const ra::SystemModel& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read ranking file '" + path + "'");
    ra::Ranking o;
    int pattern, state;
    while (in >> pattern >> state) o.order.push_back({pattern - 1, state});
    int pairs = 0;
    for (int i = 0; i < m.num_patterns(); ++i) pairs += m.state_space_size(i);
    if (o.size() != pairs) throw UsageError("ranking file must list every pattern-state pair once");
    return o;
}

RankingChoice choose_ranking(const ra::SystemModel& m, const std::string& source,
                             const std::string& ranking_file, const std::vector<double>& gamma0,
                             double damping, int max_iter) {
    RankingChoice rc;
    rc.source = source;
    if (source == "fixed-point") {
        const auto tr = ra::fixed_point_iteration(m, gamma0, damping, max_iter);
        rc.ranking = tr.ranking_star();
        rc.gamma = tr.gamma_star();
    } else if (source == "xi-star") {
        rc.ranking = ra::xi_star_ranking(m, std::vector<double>(m.num_request_types(), 0.0));
        const auto cf = ra::closed_form_gamma(m, rc.ranking);
        rc.gamma = cf.heavy_traffic ? cf.gamma : std::vector<double>(m.num_pools(), 0.0);
    } else if (source == "explicit") {
        rc.ranking = ranking_from_file(m, ranking_file);
        rc.gamma.assign(m.num_pools(), 0.0);
    } else {
        throw UsageError("unknown ranking source '" + source + "'");
    }
    rc.reference = ra::priority_policy(m, rc.ranking, rc.gamma).revenue;
    return rc;
}

void print_relaxed(std::ostream& out, const ra::SystemModel& m, const ra::RelaxedSolution& sol,
                   const std::vector<double>& gamma, const std::string& scenario,
                   const std::string& source) {
    out << "# command=solve-relaxed scenario=" << scenario << " ranking_source=" << source << "\n";
    out << "# gamma=";
    for (int j = 0; j < m.num_pools(); ++j) out << (j ? "," : "") << gamma[j];
    out << "\n# revenue=" << sol.revenue << "\n";
    for (int l = 0; l < m.num_request_types(); ++l)
        out << "# nu_" << l + 1 << "=" << sol.nu[l] << " blocking_" << l + 1 << "="
            << sol.blocking[l] << "\n";
    for (size_t k = 0; k < sol.critical_positions.size(); ++k) {
        const auto [i, n] = sol.ranking.order[sol.critical_positions[k]];
        out << "# critical pair: rank=" << sol.critical_positions[k] + 1 << " pattern=" << i + 1
            << " state=" << n << " pool=" << sol.critical_pools[k] + 1 << "\n";
    }
    out << "rank pattern state request_type activation z\n";
    for (int pos = 0; pos < sol.ranking.size(); ++pos) {
        const auto [i, n] = sol.ranking.order[pos];
        out << pos + 1 << ' ' << i + 1 << ' ' << n << ' ' << m.patterns[i].request_type + 1 << ' '
            << sol.activation[pos] << ' ' << sol.z[pos] << "\n";
    }
}

void print_sweep(std::ostream& out, const ra::SystemModel& m, const std::vector<ra::SweepRow>& rows,
                 const ra::SimConfig& cfg, const std::string& scenario, const std::string& header) {
    out << "# " << header << "\n";
    out << "# horizon=" << cfg.resolved_horizon(m) << " warmup=" << cfg.warmup_fraction
        << " seed=" << cfg.seed << " ci_target=" << cfg.target_rel_halfwidth
        << " confidence=" << cfg.confidence << "\n";
    out << "scenario policy eps_m h revenue ci_half ref_revenue rel_gap";
    for (int l = 0; l < m.num_request_types(); ++l) out << " blocking_" << l + 1;
    out << " replications events ci_met\n";
    for (const auto& r : rows) {
        out << scenario << ' ' << r.policy << ' ' << r.eps_m << ' ' << r.h << ' ' << r.revenue
            << ' ' << r.ci_half << ' ' << r.ref_revenue << ' ' << r.rel_gap;
        for (double b : r.blocking) out << ' ' << b;
        out << ' ' << r.replications << ' ' << r.events << ' ' << (r.ci_met ? 1 : 0) << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Whittle-style index policies for capacity-coupled resource allocation"};
    app.set_help_flag("--help", "print help");  // frees -h for the --h option
    app.require_subcommand(1);

    std::string scenario, out_path, gamma_text, gamma0_text = "0", ranking_source = "fixed-point",
                ranking_file;
    double damping = 0.5, horizon = 0.0, warmup = 0.2, ci_target = 0.03;
    int max_iter = 50;
    std::uint64_t seed = 1;
    std::vector<std::string> policy_texts;
    std::vector<long long> h_list;
    double ref_override = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
        cmd->set_help_flag("--help", "print help");
        if (needs_scenario) cmd->add_option("--scenario", scenario, "fixture name or scenario file")->required();
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };
    auto add_fp = [&](CLI::App* cmd) {
        cmd->add_option("--gamma0", gamma0_text, "initial multipliers (scalar or csv)");
        cmd->add_option("--damping", damping, "fixed-point damping c in [0,1]");
        cmd->add_option("--max-iter", max_iter, "fixed-point iteration budget U");
    };
    auto add_sim = [&](CLI::App* cmd) {
        cmd->add_option("--policy", policy_texts,
                        "repeatable: index:eps=X | max-reward | min-cost | random");
        cmd->add_option("--h", h_list, "repeatable scaling parameters")->delimiter(',');
        cmd->add_option("--horizon", horizon, "simulated time units per replication");
        cmd->add_option("--warmup", warmup, "warmup fraction in [0,1)");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--ci-target", ci_target, "relative CI half-width target");
        cmd->add_option("--ref", ref_override, "reference revenue (default: R(o_k*))");
        cmd->add_option("--ranking-source", ranking_source, "fixed-point | xi-star | explicit");
        cmd->add_option("--ranking-file", ranking_file, "pairs for --ranking-source explicit");
    };

    auto* c_solve = app.add_subcommand("solve-relaxed", "water-fill a ranking; print nu, criticals, z, R(o)");
    add_common(c_solve);
    add_fp(c_solve);
    c_solve->add_option("--gamma", gamma_text, "evaluate at these multipliers (scalar or csv)");
    c_solve->add_option("--ranking-source", ranking_source, "fixed-point | xi-star | explicit");
    c_solve->add_option("--ranking-file", ranking_file, "pairs for --ranking-source explicit");

    auto* c_fp = app.add_subcommand("fixed-point", "damped multiplier iteration; trace table");
    add_common(c_fp);
    add_fp(c_fp);

    auto* c_sim = app.add_subcommand("simulate", "simulate policies at the given scales");
    add_common(c_sim);
    add_fp(c_sim);
    add_sim(c_sim);

    auto* c_sweep = app.add_subcommand("sweep", "alias of simulate for h sweeps");
    add_common(c_sweep);
    add_fp(c_sweep);
    add_sim(c_sweep);

    auto* c_rep = app.add_subcommand("reproduce", "canned experiment recipes");
    std::string figure;
    c_rep->add_option("figure", figure, "fig1a | fig1b | fig2a | fig2b")->required();
    add_common(c_rep, /*needs_scenario=*/false);
    add_fp(c_rep);
    add_sim(c_rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ofstream file;
    if (c_solve->parsed()) {
        const ra::SystemModel m = resolve_scenario(scenario);
        std::ostream& out = open_out(out_path, file);
        std::vector<double> gamma;
        ra::Ranking o;
        std::string source = ranking_source;
        if (!gamma_text.empty()) {
            gamma = parse_gamma(gamma_text, m.num_pools());
            o = ra::rank_pairs(m, gamma, std::vector<double>(m.num_request_types(), 0.0));
            source = "gamma";
        } else {
            const auto rc = choose_ranking(m, ranking_source, ranking_file,
                                           parse_gamma(gamma0_text, m.num_pools()), damping, max_iter);
            gamma = rc.gamma;
            o = rc.ranking;
        }
        const ra::RelaxedSolution sol = ra::priority_policy(m, o, gamma);
        print_relaxed(out, m, sol, gamma, scenario, source);
        return 0;
    }

    if (c_fp->parsed()) {
        const ra::SystemModel m = resolve_scenario(scenario);
        std::ostream& out = open_out(out_path, file);
        const auto g0 = parse_gamma(gamma0_text, m.num_pools());
        const auto tr = ra::fixed_point_iteration(m, g0, damping, max_iter);
        out << "# command=fixed-point scenario=" << scenario << " gamma0=" << gamma0_text
            << " damping=" << damping << " max_iter=" << max_iter << "\n";
        out << "# k_star=" << tr.k_star << " decomposable=" << (tr.decomposable ? "true" : "false")
            << " residual_star=" << tr.residuals[tr.k_star - 1] << "\n";
        out << "# R_star=" << ra::priority_policy(m, tr.ranking_star(), tr.gamma_star()).revenue
            << "\n";
        out << "iter residual clipped";
        for (int j = 0; j < m.num_pools(); ++j) out << " gamma_" << j + 1;
        out << "\n";
        for (size_t k = 0; k < tr.gammas.size(); ++k) {
            if (k == 0)
                out << "0 - -";
            else
                out << k << ' ' << tr.residuals[k - 1] << ' ' << int(tr.clipped[k - 1]);
            for (double v : tr.gammas[k]) out << ' ' << v;
            out << "\n";
        }
        return 0;
    }

    if (c_sim->parsed() || c_sweep->parsed() || c_rep->parsed()) {
        std::string scen = scenario;
        if (c_rep->parsed()) {
            if (figure == "fig1a" || figure == "fig1b")
                scen = figure;
            else if (figure == "fig2a" || figure == "fig2b")
                scen = "fig2";
            else
                throw UsageError("unknown figure '" + figure + "'");
            if (policy_texts.empty())
                policy_texts = {"index:eps=0.01", "index:eps=0", "max-reward", "min-cost", "random"};
            if (h_list.empty()) {
                if (figure == "fig2b")
                    h_list = {50};
                else
                    h_list = {1, 2, 5, 10, 20, 50, 100};
            }
            if (figure == "fig2b" && !c_rep->count("--max-iter")) max_iter = 10;
        }
        if (policy_texts.empty()) throw UsageError("at least one --policy is required");
        if (h_list.empty()) throw UsageError("at least one --h is required");
        for (long long h : h_list)
            if (h < 1) throw UsageError("h must be >= 1");

        const ra::SystemModel m = resolve_scenario(scen);
        std::ostream& out = open_out(out_path, file);
        ra::SimConfig cfg;
        cfg.horizon = horizon;
        cfg.warmup_fraction = warmup;
        cfg.seed = seed;
        cfg.target_rel_halfwidth = ci_target;

        std::vector<PolicyRequest> requests;
        for (const auto& t : policy_texts) requests.push_back(parse_policy(t));
        const bool any_index =
            std::any_of(requests.begin(), requests.end(),
                        [](const PolicyRequest& r) { return r.kind == ra::PolicyKind::Index; });

        if (c_rep->parsed() && figure == "fig2b") {
            // per-iteration table at fixed h: R(o_k) and the index policies on o_k
            const auto g0 = parse_gamma(gamma0_text, m.num_pools());
            const auto tr = ra::fixed_point_iteration(m, g0, damping, max_iter);
            cfg.h = h_list.front();
            out << "# command=reproduce figure=fig2b scenario=" << scen << " h=" << cfg.h
                << " damping=" << damping << " max_iter=" << max_iter << " seed=" << seed << "\n";
            out << "k residual R_k";
            std::vector<PolicyRequest> fixed;
            for (const auto& r : requests)
                if (r.kind != ra::PolicyKind::Index) fixed.push_back(r);
            std::vector<double> index_eps;
            for (const auto& r : requests)
                if (r.kind == ra::PolicyKind::Index) index_eps.push_back(r.eps_m);
            for (double e : index_eps) out << " rev_index_" << e << " gap_index_" << e;
            for (const auto& r : fixed)
                out << " rev_" << (r.kind == ra::PolicyKind::MaxReward
                                       ? "max_reward"
                                       : r.kind == ra::PolicyKind::MinCost ? "min_cost" : "random");
            out << "\n";
            std::vector<double> fixed_rev;
            for (const auto& r : fixed) {
                ra::PolicySpec spec{r.kind, 0.0, {}};
                fixed_rev.push_back(ra::simulate(m, spec, cfg).revenue);
            }
            for (int k = 1; k <= max_iter; ++k) {
                const ra::Ranking& ok = tr.rankings[k];
                const double rk = ra::priority_policy(m, ok, tr.gammas[k]).revenue;
                out << k << ' ' << tr.residuals[k - 1] << ' ' << rk;
                for (double e : index_eps) {
                    const auto res = ra::simulate(m, ra::PolicySpec::index(ok, e), cfg);
                    out << ' ' << res.revenue << ' ' << (rk - res.revenue) / rk;
                }
                for (double rev : fixed_rev) out << ' ' << rev;
                out << "\n";
            }
            return 0;
        }

        double ref = ref_override;
        ra::Ranking ranking;
        if (any_index || ref == 0.0) {
            const auto rc = choose_ranking(m, ranking_source, ranking_file,
                                           parse_gamma(gamma0_text, m.num_pools()), damping, max_iter);
            ranking = rc.ranking;
            if (ref == 0.0) ref = rc.reference;
        }
        std::vector<ra::PolicySpec> specs;
        for (const auto& r : requests) {
            if (r.kind == ra::PolicyKind::Index)
                specs.push_back(ra::PolicySpec::index(ranking, r.eps_m));
            else
                specs.push_back(ra::PolicySpec{r.kind, 0.0, {}});
        }
        const auto rows = ra::sweep_h(m, specs, h_list, cfg, ref);
        std::string header = "command=" + std::string(c_rep->parsed() ? "reproduce" : "sweep") +
                             " scenario=" + scen + " ranking_source=" + ranking_source +
                             " ref_revenue=" + std::to_string(ref);
        print_sweep(out, m, rows, cfg, scen, header);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ra::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 1;
    }
}
