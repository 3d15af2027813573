#include "matchdp/commands.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "matchdp/io.hpp"
#include "matchdp/parallel.hpp"
#include "matchdp/structure.hpp"

namespace matchdp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

void write_json(const fs::path& path, const json& doc) {
    auto os = open_output(path);
    os << doc.dump(2) << '\n';
}

json model_json(const RunConfig& cfg) {
    return {{"mu", cfg.mu.mu}, {"cost", cfg.cost.coef}, {"gamma", cfg.solver.gamma}};
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_timing(const fs::path& out, const std::string& command, const Stopwatch& clock, std::ostream& log) {
    const double s = clock.seconds();
    auto os = open_output(out / "timing.txt");
    os << command << " wall_time_s=" << s << '\n';
    log << command << ": wall time " << s << " s\n";
}

}  // namespace

void write_values_csv(std::ostream& os, const SolveResult& res, int window, const std::string& hash) {
    os << "# config_hash=" << hash << '\n' << "x0,x1,x2,x3,value,eps\n";
    State x;
    for (std::size_t r = 0; r < simplex_size(window); ++r, simplex_next(x)) {
        os << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ',' << format_double(res.values(x)) << ','
           << format_double(res.tail(x)) << '\n';
    }
}

void write_policy_csv(std::ostream& os, const std::vector<StatePolicy>& policy, const std::string& hash) {
    os << "# config_hash=" << hash << '\n' << "x0,x1,x2,x3,a,b,c\n";
    for (const auto& sp : policy) {
        for (const auto& m : sp.optimal) {
            os << sp.state[0] << ',' << sp.state[1] << ',' << sp.state[2] << ',' << sp.state[3] << ',' << m.l1
               << ',' << m.l2 << ',' << m.l3 << '\n';
        }
    }
}

void write_simulation_csv(std::ostream& os, const std::vector<PolicyEstimate>& rows, const std::string& hash) {
    os << "# config_hash=" << hash << '\n' << "policy,mean,se,eps_tail,R,H,seed\n";
    for (const auto& row : rows) {
        const auto& e = row.estimate;
        os << row.policy << ',' << format_double(e.mean) << ',' << format_double(e.standard_error) << ','
           << format_double(e.tail) << ',' << e.replications << ',' << e.horizon << ',' << e.seed << '\n';
    }
}

int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    Stopwatch clock;
    const SolverConfig scfg = cfg.solver_config();
    const SolveResult res = value_iteration(scfg);
    const auto policy = extract_policy(res.values, scfg);

    fs::create_directories(out);
    {
        auto os = open_output(out / "values.csv");
        write_values_csv(os, res, scfg.window, cfg.hash);
    }
    {
        auto os = open_output(out / "policy.csv");
        write_policy_csv(os, policy, cfg.hash);
    }
    json manifest = {{"command", "solve"},
                     {"config_hash", cfg.hash},
                     {"model", model_json(cfg)},
                     {"window", scfg.window},
                     {"horizon", res.horizon},
                     {"mode", to_string(scfg.mode)},
                     {"table_radius", scfg.window + 1 + scfg.horizon},
                     {"eps_max", tail_bound(scfg.gamma, scfg.cost.max_coefficient(), scfg.window, res.horizon)},
                     {"sup_change", res.sup_change},
                     {"files", {"values.csv", "policy.csv"}}};
    write_json(out / "manifest.json", manifest);
    write_timing(out, "solve", clock, log);
    return kExitOk;
}

int cmd_thresholds(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    Stopwatch clock;
    const SolverConfig scfg = cfg.solver_config();
    const SolveResult res = value_iteration(scfg);
    const ThresholdExtraction ext = extract_thresholds(res.values, scfg);
    const OptimalityReport opt =
        verify_threshold_optimality(res.values, ext.policy, scfg, cfg.solver.optimality_tolerance);

    fs::create_directories(out);
    {
        auto os = open_output(out / "thresholds.csv");
        os << "# config_hash=" << cfg.hash << '\n';
        write_thresholds_csv(os, ext.policy);
    }
    json censored = json::array();
    bool symmetric = true;
    for (int i = -scfg.window; i <= scfg.window; ++i) {
        const auto t = ext.policy.get(i);
        if (t && t->censored) censored.push_back(i);
        if (t != ext.policy.get(-i)) symmetric = false;
    }
    json unimodality = json::array();
    for (const auto& v : ext.violations) unimodality.push_back({{"index", v.index}, {"j", v.position}, {"gap", v.gap}});
    json optimality = json::array();
    for (const auto& v : opt.violations) {
        optimality.push_back({{"state", v.state.counts},
                              {"action", {v.action.l1, v.action.l2, v.action.l3}},
                              {"value", v.action_value},
                              {"optimum", v.optimum},
                              {"gap", v.gap}});
    }
    const bool clean = ext.violations.empty() && opt.violations.empty();
    json report = {{"command", "thresholds"},
                   {"config_hash", cfg.hash},
                   {"model", model_json(cfg)},
                   {"window", scfg.window},
                   {"horizon", res.horizon},
                   {"index_half_width", ext.policy.half_width()},
                   {"censored", censored},
                   {"dropped", ext.diagnostics},
                   {"unimodality_violations", unimodality},
                   {"optimality_checked", opt.checked},
                   {"optimality_tolerance", cfg.solver.optimality_tolerance},
                   {"optimality_violation_count", opt.violations.size()},
                   {"optimality_violations", optimality},
                   {"symmetric_under_index_reversal", symmetric},
                   {"clean", clean}};
    write_json(out / "thresholds_report.json", report);
    write_timing(out, "thresholds", clock, log);
    if (!censored.empty()) log << "thresholds: " << censored.size() << " censored indices (window too small to observe)\n";
    if (!clean) {
        log << "thresholds: " << ext.violations.size() << " unimodality and " << opt.violations.size()
            << " optimality violations\n";
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    Stopwatch clock;
    SolverConfig scfg = cfg.solver_config();
    const auto stages =
        check_closure_under_L(scfg, cfg.verify.stages, cfg.verify.mode, ScanOptions{cfg.verify.tolerance, false});
    bool clean = true;
    json list = json::array();
    for (const auto& s : stages) {
        clean = clean && s.clean();
        list.push_back(to_json(s));
    }
    fs::create_directories(out);
    write_json(out / "closure.json", {{"command", "verify"},
                                      {"config_hash", cfg.hash},
                                      {"model", model_json(cfg)},
                                      {"window", scfg.window},
                                      {"stages_requested", cfg.verify.stages},
                                      {"mode", to_string(cfg.verify.mode)},
                                      {"tolerance", cfg.verify.tolerance},
                                      {"clean", clean},
                                      {"stages", list}});
    write_timing(out, "verify", clock, log);
    if (!clean) {
        for (const auto& s : stages) {
            for (const auto& r : s.reports) {
                if (!r.clean()) {
                    log << "verify: stage " << s.stage << " class " << r.name << ": " << r.violations.size()
                        << " violations\n";
                }
            }
        }
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    Stopwatch clock;
    const SimConfig sim = cfg.sim_config();
    sim.validate();

    std::vector<std::unique_ptr<DecisionRule>> rules;
    json manifest = {{"command", "simulate"},
                     {"config_hash", cfg.hash},
                     {"model", model_json(cfg)},
                     {"initial", sim.initial.counts},
                     {"horizon", sim.horizon},
                     {"replications", sim.replications},
                     {"seed", sim.seed}};
    for (const auto& name : cfg.simulate->policies) {
        if (name != "extracted") {
            rules.push_back(std::make_unique<BaselineRule>(parse_baseline(name)));
            continue;
        }
        // Every state reachable within H steps has |x| <= |x0| + H, so a window of that
        // size keeps every threshold lookup inside the extracted family.
        const int window = std::max(cfg.solver.window, sim.initial.total() + sim.horizon);
        const SolverConfig scfg = cfg.solver_config(window);
        const SolveResult res = value_iteration(scfg);
        const ThresholdExtraction ext = extract_thresholds(res.values, scfg);
        manifest["extracted"] = {{"window", window},
                                 {"solver_horizon", res.horizon},
                                 {"dp_value", res.values(sim.initial)},
                                 {"dp_eps", res.tail(sim.initial)},
                                 {"censored", ext.censored},
                                 {"unimodality_violations", ext.violations.size()}};
        rules.push_back(std::make_unique<ThresholdRule>("extracted", ext.policy));
    }
    std::vector<PolicyRun> runs;
    for (const auto& r : rules) runs.push_back({sim, r.get()});
    const auto table = compare_policies(runs);

    fs::create_directories(out);
    {
        auto os = open_output(out / "simulation.csv");
        write_simulation_csv(os, table, cfg.hash);
    }
    write_json(out / "simulation_manifest.json", manifest);
    write_timing(out, "simulate", clock, log);
    return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& log) {
    CLI::App app{"Discounted-cost optimal matching control on the N-graph"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (YAML)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides 'output' in the config)");
        sub->add_option("--threads", threads, "worker threads; affects speed only");
    };
    auto* solve = app.add_subcommand("solve", "value iteration, values and optimal actions");
    auto* thresholds = app.add_subcommand("thresholds", "extract and verify the threshold policy");
    auto* verify = app.add_subcommand("verify", "structural class checks along the Bellman iterates");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of policies");
    for (auto* sub : {solve, thresholds, verify, simulate}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (threads > 0) set_worker_count(threads);
        const RunConfig cfg = load_run_config(config_path);
        const fs::path out = !out_dir.empty() ? fs::path(out_dir) : fs::path(cfg.output.value_or("out"));
        if (solve->parsed()) return cmd_solve(cfg, out, log);
        if (thresholds->parsed()) return cmd_thresholds(cfg, out, log);
        if (verify->parsed()) return cmd_verify(cfg, out, log);
        return cmd_simulate(cfg, out, log);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ResourceError& e) {
        log << "refused: " << e.what() << '\n';
        return kExitResourceRefused;
    }
}

}  // namespace matchdp
