#include "matchdp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "matchdp/io.hpp"

namespace matchdp {

namespace {

class Reader {
public:
    explicit Reader(std::string name) : name_(std::move(name)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
        const YAML::Mark mark = at.Mark();
        std::ostringstream os;
        os << name_;
        if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void only_keys(const YAML::Node& map, std::initializer_list<const char*> allowed, const std::string& where) const {
        if (!map.IsMap()) fail(map, where + " must be a mapping");
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (!keys.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
        }
    }

    YAML::Node required(const YAML::Node& map, const char* key, const std::string& where) const {
        const YAML::Node n = map[key];
        if (!n) fail(map, "missing required key '" + std::string(key) + "' in " + where);
        return n;
    }

    std::string scalar(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a scalar");
        return n.Scalar();
    }

    double number(const YAML::Node& n, const std::string& what) const {
        try {
            return parse_double(scalar(n, what));
        } catch (const ConfigError& e) {
            fail(n, what + ": " + e.what());
        }
    }

    long long integer(const YAML::Node& n, const std::string& what) const {
        try {
            return parse_integer(scalar(n, what));
        } catch (const ConfigError& e) {
            fail(n, what + ": " + e.what());
        }
    }

    template <class T>
    std::array<T, 4> quad(const YAML::Node& n, const std::string& what, bool integral) const {
        if (!n.IsSequence() || n.size() != 4) fail(n, what + " must be a list of four numbers");
        std::array<T, 4> out{};
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string item = what + "[" + std::to_string(i) + "]";
            out[i] = integral ? static_cast<T>(integer(n[i], item)) : static_cast<T>(number(n[i], item));
        }
        return out;
    }

private:
    std::string name_;
};

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& name) {
    Reader rd(name);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        std::ostringstream os;
        os << name << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root.IsMap()) throw ConfigError(name + ": top level must be a mapping");
    rd.only_keys(root, {"model", "solver", "verify", "simulate", "output"}, "top level");

    RunConfig cfg;
    cfg.hash = hex64(fnv1a64(text));

    const YAML::Node model = rd.required(root, "model", "top level");
    rd.only_keys(model, {"mu", "cost"}, "model");
    cfg.mu.mu = rd.quad<double>(rd.required(model, "mu", "model"), "model.mu", false);
    cfg.cost.coef = rd.quad<double>(rd.required(model, "cost", "model"), "model.cost", false);
    // Anchor each problem at the list it comes from.
    const auto report = [&](const char* key, const std::vector<std::string>& problems) {
        if (problems.empty()) return;
        std::string msg = "invalid model:";
        for (const auto& p : problems) msg += "\n  - " + p;
        rd.fail(model[key], msg);
    };
    report("mu", validate_model(cfg.mu, CostFunction{}));
    report("cost", validate_model(ArrivalDistribution::uniform(), cfg.cost));

    const YAML::Node solver = rd.required(root, "solver", "top level");
    rd.only_keys(solver, {"gamma", "window", "horizon", "target_eps", "mode", "tie_tolerance", "optimality_tolerance"},
                 "solver");
    const YAML::Node gamma = rd.required(solver, "gamma", "solver");
    cfg.solver.gamma = rd.number(gamma, "solver.gamma");
    if (!(cfg.solver.gamma > 0.0 && cfg.solver.gamma < 1.0)) rd.fail(gamma, "solver.gamma must lie in (0, 1)");
    const YAML::Node window = rd.required(solver, "window", "solver");
    cfg.solver.window = static_cast<int>(rd.integer(window, "solver.window"));
    if (cfg.solver.window < 0) rd.fail(window, "solver.window must be >= 0");
    if (solver["horizon"] && solver["target_eps"]) rd.fail(solver, "give either solver.horizon or solver.target_eps");
    if (const auto n = solver["horizon"]) {
        cfg.solver.horizon = static_cast<int>(rd.integer(n, "solver.horizon"));
        if (*cfg.solver.horizon < 1) rd.fail(n, "solver.horizon must be >= 1");
    } else if (const auto e = solver["target_eps"]) {
        cfg.solver.target_eps = rd.number(e, "solver.target_eps");
        if (!(*cfg.solver.target_eps > 0.0)) rd.fail(e, "solver.target_eps must be > 0");
    } else {
        rd.fail(solver, "solver needs horizon or target_eps");
    }
    if (const auto m = solver["mode"]) {
        try {
            cfg.solver.mode = parse_matching_mode(rd.scalar(m, "solver.mode"));
        } catch (const ConfigError& e) {
            rd.fail(m, e.what());
        }
    }
    if (const auto t = solver["tie_tolerance"]) {
        cfg.solver.tie_tolerance = rd.number(t, "solver.tie_tolerance");
        if (!(cfg.solver.tie_tolerance > 0.0)) rd.fail(t, "solver.tie_tolerance must be > 0");
    }
    if (const auto t = solver["optimality_tolerance"]) {
        cfg.solver.optimality_tolerance = rd.number(t, "solver.optimality_tolerance");
        if (!(cfg.solver.optimality_tolerance > 0.0)) rd.fail(t, "solver.optimality_tolerance must be > 0");
    }

    if (const auto verify = root["verify"]) {
        rd.only_keys(verify, {"stages", "tolerance", "mode"}, "verify");
        if (const auto k = verify["stages"]) {
            cfg.verify.stages = static_cast<int>(rd.integer(k, "verify.stages"));
            if (cfg.verify.stages < 0) rd.fail(k, "verify.stages must be >= 0");
        }
        if (const auto t = verify["tolerance"]) {
            cfg.verify.tolerance = rd.number(t, "verify.tolerance");
            if (!(cfg.verify.tolerance > 0.0)) rd.fail(t, "verify.tolerance must be > 0");
        }
        if (const auto m = verify["mode"]) {
            try {
                cfg.verify.mode = parse_matching_mode(rd.scalar(m, "verify.mode"));
            } catch (const ConfigError& e) {
                rd.fail(m, e.what());
            }
        }
    }

    if (const auto sim = root["simulate"]) {
        rd.only_keys(sim, {"initial", "horizon", "target_eps", "replications", "seed", "policies"}, "simulate");
        RunConfig::Simulate s;
        if (const auto x = sim["initial"]) {
            const auto q = rd.quad<int>(x, "simulate.initial", true);
            s.initial = State{q[0], q[1], q[2], q[3]};
            if (!s.initial.nonnegative()) rd.fail(x, "simulate.initial must be nonnegative");
        }
        if (sim["horizon"] && sim["target_eps"]) rd.fail(sim, "give either simulate.horizon or simulate.target_eps");
        if (const auto h = sim["horizon"]) {
            s.horizon = static_cast<int>(rd.integer(h, "simulate.horizon"));
            if (*s.horizon < 0) rd.fail(h, "simulate.horizon must be >= 0");
        } else if (const auto e = sim["target_eps"]) {
            s.target_eps = rd.number(e, "simulate.target_eps");
            if (!(*s.target_eps > 0.0)) rd.fail(e, "simulate.target_eps must be > 0");
        } else {
            rd.fail(sim, "simulate needs horizon or target_eps");
        }
        const YAML::Node reps = rd.required(sim, "replications", "simulate");
        s.replications = static_cast<long>(rd.integer(reps, "simulate.replications"));
        if (s.replications < 1) rd.fail(reps, "simulate.replications must be >= 1");
        const YAML::Node seed = rd.required(sim, "seed", "simulate");
        const long long seed_value = rd.integer(seed, "simulate.seed");
        if (seed_value < 0) rd.fail(seed, "simulate.seed must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed_value);
        const YAML::Node policies = rd.required(sim, "policies", "simulate");
        if (!policies.IsSequence() || policies.size() == 0) rd.fail(policies, "simulate.policies must be a non-empty list");
        for (const auto& p : policies) {
            const std::string pname = rd.scalar(p, "simulate.policies entry");
            if (pname != "extracted") {
                try {
                    parse_baseline(pname);
                } catch (const ConfigError& e) {
                    rd.fail(p, e.what());
                }
            }
            s.policies.push_back(pname);
        }
        cfg.simulate = std::move(s);
    }

    if (const auto out = root["output"]) cfg.output = rd.scalar(out, "output");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.string());
}

SolverConfig RunConfig::solver_config() const { return solver_config(solver.window); }

SolverConfig RunConfig::solver_config(int window) const {
    SolverConfig s;
    s.gamma = solver.gamma;
    s.mu = mu;
    s.cost = cost;
    s.window = window;
    s.mode = solver.mode;
    s.tie_tolerance = solver.tie_tolerance;
    s.horizon = solver.horizon ? *solver.horizon
                               : horizon_for_tail(solver.gamma, cost.max_coefficient(), window, *solver.target_eps);
    return s;
}

SimConfig RunConfig::sim_config() const {
    if (!simulate) throw ConfigError("config has no simulate block");
    SimConfig s;
    s.gamma = solver.gamma;
    s.mu = mu;
    s.cost = cost;
    s.initial = simulate->initial;
    s.horizon = simulate->horizon ? *simulate->horizon
                                  : horizon_for_tail(solver.gamma, cost.max_coefficient(), simulate->initial.total(),
                                                     *simulate->target_eps);
    s.replications = simulate->replications;
    s.seed = simulate->seed;
    return s;
}

}  // namespace matchdp
