// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "matchdp/commands.hpp"
#include "matchdp/parallel.hpp"
#include "matchdp/simulation.hpp"
#include "matchdp/solver.hpp"
#include "matchdp/structure.hpp"
#include "oracle.hpp"

using namespace matchdp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

template <class F>
void for_states(int radius, F&& f) {
    State x;
    for (std::size_t r = 0; r < simplex_size(radius); ++r, simplex_next(x)) f(x);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

std::string cost_name(const CostFunction& c) {
    std::ostringstream os;
    os << '(' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ')';
    return os.str();
}

SolverConfig make(double gamma, ArrivalDistribution mu, CostFunction c, int window, int horizon) {
    SolverConfig cfg;
    cfg.gamma = gamma;
    cfg.mu = mu;
    cfg.cost = c;
    cfg.window = window;
    cfg.horizon = horizon;
    return cfg;
}

constexpr int kGridWindow = 8;
constexpr double kGridEps = 1e-3;
constexpr double kOptimalityTolerance = 1e-6;
constexpr int kClosureStages = 5;
constexpr int kSaturationRadius = 6;

struct Cell {
    double gamma;
    CostFunction cost;
    SolverConfig cfg;
    SolveResult vn;
    SolveResult vn10;
    std::vector<ValueTable> stages;

    std::string name() const { return "gamma=" + fmt(gamma) + " c=" + cost_name(cost); }
};

// 1. Value iteration against the brute-force recursive oracle.
Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const SolverConfig cfg = make(0.5, ArrivalDistribution::uniform(), CostFunction{{2, 1, 1, 2}}, 3, 5);
    double worst = 0.0;
    for (MatchingMode mode : {MatchingMode::priority_reduced, MatchingMode::full}) {
        SolverConfig c = cfg;
        c.mode = mode;
        const SolveResult res = value_iteration(c);
        oracle::RecursiveValue ref(c.gamma, c.mu, c.cost);
        for_states(3, [&](const State& x) { worst = std::max(worst, std::abs(res.values(x) - ref(x, 5))); });
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-12 && secs < 60.0,
            "max |V_5 - oracle| = " + fmt(worst) + " on |x| <= 3 (both modes), " + fmt(secs) + " s"};
}

// 2. mu = e0 from the empty state: the cost is c0 gamma / (1 - gamma)^2 for any policy.
Outcome degenerate_closed_form() {
    const double gamma = 0.5;
    const CostFunction c{{2, 1, 1, 2}};
    const double exact = c[0] * gamma / ((1 - gamma) * (1 - gamma));
    const auto mu = ArrivalDistribution::degenerate(0);

    const SolverConfig dp = make(gamma, mu, c, 2, horizon_for_tail(gamma, c.max_coefficient(), 0, 1e-6));
    const SolveResult res = value_iteration(dp);
    const State zero{};
    const double dp_gap = std::abs(res.values(zero) - exact);
    bool pass = dp_gap <= res.tail(zero);

    SimConfig sim;
    sim.gamma = gamma;
    sim.mu = mu;
    sim.cost = c;
    sim.horizon = horizon_for_tail(gamma, c.max_coefficient(), 0, 1e-6);
    sim.replications = 1000;
    sim.seed = 1;
    double mc_gap = 0.0;
    for (Baseline b : {Baseline::match_nothing, Baseline::full_greedy, Baseline::never_l2, Baseline::l2_first}) {
        const Estimate e = estimate_cost(sim, BaselineRule(b));
        mc_gap = std::max(mc_gap, std::abs(e.mean - exact));
        pass = pass && std::abs(e.mean - exact) <= e.half_width();
    }
    return {pass, "|V_N(0) - 4| = " + fmt(dp_gap) + " (eps_N " + fmt(res.tail(zero)) + "), max |MC - 4| = " +
                      fmt(mc_gap) + " over four policies"};
}

std::vector<Cell> build_grid() {
    std::vector<Cell> grid;
    for (double gamma : {0.5, 0.7, 0.8}) {
        for (const CostFunction& c : {CostFunction{{2, 1, 1, 2}}, CostFunction{{3, 1, 2, 3}}, CostFunction{{1, 0, 0, 1}}}) {
            Cell cell{gamma, c, {}, {}, {}, {}};
            const int n = horizon_for_tail(gamma, c.max_coefficient(), kGridWindow, kGridEps);
            cell.cfg = make(gamma, ArrivalDistribution::uniform(), c, kGridWindow, n);
            cell.vn = value_iteration(cell.cfg);
            SolverConfig longer = cell.cfg;
            longer.horizon = n + 10;
            cell.vn10 = value_iteration(longer);
            cell.stages = stage_tables(cell.cfg, kClosureStages, MatchingMode::full);
            grid.push_back(std::move(cell));
        }
    }
    return grid;
}

// 3. Extracted thresholds are optimal on |x| <= 8 and their probes are unimodal.
Outcome threshold_optimality(const std::vector<Cell>& grid) {
    Outcome out;
    long checked = 0;
    std::size_t violations = 0, unimodal = 0;
    for (const Cell& cell : grid) {
        const ThresholdExtraction ext = extract_thresholds(cell.vn.values, cell.cfg);
        const OptimalityReport rep = verify_threshold_optimality(cell.vn.values, ext.policy, cell.cfg, kOptimalityTolerance);
        checked += rep.checked;
        violations += rep.violations.size();
        unimodal += ext.violations.size();
        if (!rep.violations.empty() || !ext.violations.empty()) {
            out.pass = false;
            out.detail += "[" + cell.name() + ": " + std::to_string(rep.violations.size()) + " optimality, " +
                          std::to_string(ext.violations.size()) + " unimodality] ";
        }
    }
    out.detail += std::to_string(checked) + " states checked over 9 cells, " + std::to_string(violations) +
                  " optimality violations at tau=1e-6, " + std::to_string(unimodal) + " unimodality violations";
    return out;
}

// 4. All six classes are preserved along five Bellman steps.
Outcome closure(const std::vector<Cell>& grid) {
    Outcome out;
    long checked = 0;
    for (const Cell& cell : grid) {
        for (std::size_t k = 0; k < cell.stages.size(); ++k) {
            for (const ClassReport& r : check_all_classes(cell.stages[k])) {
                checked += r.checked;
                if (!r.clean()) {
                    out.pass = false;
                    out.detail += "[" + cell.name() + " stage " + std::to_string(k) + " " + r.name + ": " +
                                  std::to_string(r.violations.size()) + " violations] ";
                }
            }
        }
    }
    out.detail += std::to_string(checked) + " inequalities over 9 cells x " + std::to_string(kClosureStages + 1) +
                  " stages at tau_s=1e-9";
    return out;
}

bool certified_I1_I3_Iprime(const ValueTable& v) {
    for (const ClassReport& r : check_I1_I3(v)) {
        if (!r.clean()) return false;
    }
    return check_Iprime(v).clean();
}

// 5. On certified tables the full argmin set contains a saturating matching.
Outcome saturation(const std::vector<Cell>& grid) {
    Outcome out;
    long states = 0, exceptions = 0, tables = 0;
    for (const Cell& cell : grid) {
        SolverConfig cfg = cell.cfg;
        cfg.mode = MatchingMode::full;
        for (const ValueTable& v : cell.stages) {
            if (!certified_I1_I3_Iprime(v)) continue;
            ++tables;
            for_states(kSaturationRadius, [&](const State& x) {
                ++states;
                const auto best = bellman_min(v, x, cfg);
                const bool found = std::any_of(best.argmin.begin(), best.argmin.end(), [&](const Matching& m) {
                    return m.l1 == std::min(x[0], x[1]) && m.l3 == std::min(x[2], x[3]);
                });
                if (!found) ++exceptions;
            });
        }
    }
    out.pass = exceptions == 0 && tables == static_cast<long>(grid.size()) * (kClosureStages + 1);
    out.detail = std::to_string(tables) + " certified tables, " + std::to_string(states) + " states with |x| <= 6, " +
                 std::to_string(exceptions) + " exceptions";
    return out;
}

// 6. The reduced action set attains the full minimum.
Outcome reduced_equals_full(const std::vector<Cell>& grid) {
    double worst = 0.0;
    for (const Cell& cell : grid) {
        for (const ValueTable& v : cell.stages) {
            for_states(kSaturationRadius, [&](const State& x) {
                const double full = bellman_min(v, x, cell.cfg, MatchingMode::full).value;
                const double reduced = bellman_min(v, x, cell.cfg, MatchingMode::priority_reduced).value;
                worst = std::max(worst, std::abs(full - reduced));
            });
        }
    }
    return {worst <= 1e-9, "max |reduced - full| = " + fmt(worst) + " on |x| <= 6 over all stage tables"};
}

// 7. Ten more stages move V by less than the certified tail.
Outcome tail_certificate(const std::vector<Cell>& grid) {
    Outcome out;
    double worst_ratio = 0.0;
    for (const Cell& cell : grid) {
        for_states(kGridWindow, [&](const State& x) {
            const double diff = std::abs(cell.vn.values(x) - cell.vn10.values(x));
            const double eps = cell.vn.tail(x);
            worst_ratio = std::max(worst_ratio, diff / eps);
            if (diff > eps) out.pass = false;
        });
    }
    out.detail = "max |V_N - V_{N+10}| / eps_N = " + fmt(worst_ratio) + " on |x| <= 8 over 9 cells";
    return out;
}

// 8. Monte Carlo of the extracted policy agrees with the DP value, and beats l2_first.
Outcome dp_mc_consistency() {
    const double gamma = 0.8;
    const CostFunction c{{2, 1, 1, 2}};
    const auto mu = ArrivalDistribution::uniform();
    const int h = horizon_for_tail(gamma, c.max_coefficient(), 0, 1e-3);
    // every index reachable from the empty state within h steps is in the window
    const int window = std::max(kGridWindow, h);
    const SolverConfig dp = make(gamma, mu, c, window, horizon_for_tail(gamma, c.max_coefficient(), 0, 1e-3));
    const SolveResult res = value_iteration(dp);
    const ThresholdExtraction ext = extract_thresholds(res.values, dp);

    SimConfig sim;
    sim.gamma = gamma;
    sim.mu = mu;
    sim.cost = c;
    sim.horizon = h;
    sim.replications = 100000;
    sim.seed = 20240607;
    const ThresholdRule extracted("extracted", ext.policy);
    const BaselineRule l2_first(Baseline::l2_first);
    const std::vector<PolicyRun> runs{{sim, &extracted}, {sim, &l2_first}};
    const auto est = compare_policies(runs);
    const Estimate& e = est[0].policy == "extracted" ? est[0].estimate : est[1].estimate;
    const Estimate& b = est[0].policy == "extracted" ? est[1].estimate : est[0].estimate;

    const State zero{};
    const double v0 = res.values(zero);
    const double bound = 3.0 * e.standard_error + e.tail + res.tail(zero);
    const double gap = std::abs(e.mean - v0);
    return {gap <= bound && e.mean <= b.mean,
            "|MC - V_N(0)| = " + fmt(gap) + " <= " + fmt(bound) + " (V_N(0)=" + fmt(v0) + ", SE=" +
                fmt(e.standard_error) + ", H=" + std::to_string(h) + "), extracted " + fmt(e.mean) + " vs l2_first " +
                fmt(b.mean)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 9. Every output except wall time is byte-identical across worker counts.
Outcome determinism() {
    const std::string text =
        "model:\n  mu: [0.1, 0.2, 0.3, 0.4]\n  cost: [3, 1, 2, 3]\n"
        "solver:\n  gamma: 0.8\n  window: 6\n  target_eps: 1e-3\n"
        "verify:\n  stages: 3\n"
        "simulate:\n  initial: [1, 2, 0, 1]\n  target_eps: 1e-2\n  replications: 5000\n  seed: 99\n"
        "  policies: [extracted, full_greedy, never_l2, l2_first, match_nothing]\n";
    const RunConfig cfg = parse_run_config(text, "determinism.yaml");
    const fs::path root = fs::temp_directory_path() / ("matchdp_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::ostringstream log;
    std::vector<fs::path> dirs;
    for (unsigned threads : {1u, 2u, 4u}) {
        set_worker_count(threads);
        const fs::path out = root / std::to_string(threads);
        for (auto cmd : {cmd_solve, cmd_thresholds, cmd_verify, cmd_simulate}) {
            if (cmd(cfg, out, log) != kExitOk) return {false, "a command failed with " + std::to_string(threads) + " threads"};
        }
        dirs.push_back(out);
    }
    set_worker_count(0);
    int files = 0, mismatches = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        const auto name = entry.path().filename();
        if (name == "timing.txt") continue;
        ++files;
        for (std::size_t k = 1; k < dirs.size(); ++k) {
            if (slurp(entry.path()) != slurp(dirs[k] / name)) ++mismatches;
        }
    }
    fs::remove_all(root);
    return {files >= 8 && mismatches == 0,
            std::to_string(files) + " output files compared at 1, 2 and 4 threads, " + std::to_string(mismatches) +
                " mismatches"};
}

// 10. Reversing the classes of (mu, c) reverses the value function.
Outcome symmetry() {
    double worst = 0.0;
    const std::vector<ArrivalDistribution> laws{ArrivalDistribution::uniform(), ArrivalDistribution{{0.1, 0.2, 0.3, 0.4}}};
    const std::vector<CostFunction> costs{CostFunction{{2, 1, 1, 2}}, CostFunction{{3, 1, 2, 3}}, CostFunction{{1, 0, 0, 1}}};
    for (const auto& mu : laws) {
        for (const auto& c : costs) {
            const SolverConfig cfg = make(0.8, mu, c, kGridWindow, 40);
            const SolveResult a = value_iteration(cfg);
            const SolveResult b = value_iteration(cfg.reversed());
            for_states(kGridWindow, [&](const State& x) {
                worst = std::max(worst, std::abs(a.values(x) - b.values(reversed(x))));
            });
        }
    }
    return {worst <= 1e-12, "max |V_N(x) - V_N^rev(rev x)| = " + fmt(worst) + " on |x| <= 8, 6 models"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("criterion %2d %s: %s | %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "oracle equivalence", oracle_equivalence);
    report(2, "degenerate closed form", degenerate_closed_form);

    std::vector<Cell> grid;
    try {
        const auto start = std::chrono::steady_clock::now();
        grid = build_grid();
        std::printf("(grid: 9 cells solved in %.1f s)\n",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    } catch (const std::exception& e) {
        std::printf("grid construction failed: %s\n", e.what());
    }
    auto on_grid = [&](Outcome (*f)(const std::vector<Cell>&)) {
        return [&grid, f]() {
            if (grid.size() != 9) return Outcome{false, "grid unavailable"};
            return f(grid);
        };
    };
    report(3, "threshold optimality", on_grid(threshold_optimality));
    report(4, "closure under the Bellman operator", on_grid(closure));
    report(5, "saturation of l1 and l3", on_grid(saturation));
    report(6, "reduced and full action sets", on_grid(reduced_equals_full));
    report(7, "tail certificate", on_grid(tail_certificate));
    report(8, "DP and Monte Carlo agree", dp_mc_consistency);
    report(9, "determinism across thread counts", determinism);
    report(10, "class reversal symmetry", symmetry);

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
