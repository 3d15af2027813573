#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "matchdp/simulation.hpp"
#include "matchdp/solver.hpp"

namespace matchdp {

/// A parsed run file. Model parameters (mu, cost) and gamma have no defaults.
///
///   model:
///     mu: [0.25, 0.25, 0.25, 0.25]
///     cost: [2, 1, 1, 2]
///   solver:
///     gamma: 0.8
///     window: 8
///     horizon: 60              # or target_eps: 1e-3
///     mode: priority_reduced   # or full
///     tie_tolerance: 1e-9
///     optimality_tolerance: 1e-6
///   verify:
///     stages: 5
///     tolerance: 1e-9
///     mode: full
///   simulate:
///     initial: [0, 0, 0, 0]
///     horizon: 60              # or target_eps: 1e-3
///     replications: 100000
///     seed: 12345
///     policies: [extracted, full_greedy, never_l2, l2_first]
///   output: out
struct RunConfig {
    struct Solver {
        double gamma = 0.0;
        int window = 0;
        std::optional<int> horizon;
        std::optional<double> target_eps;
        MatchingMode mode = MatchingMode::priority_reduced;
        double tie_tolerance = 1e-9;
        double optimality_tolerance = 1e-6;
    };
    struct Verify {
        int stages = 5;
        double tolerance = 1e-9;
        MatchingMode mode = MatchingMode::full;
    };
    struct Simulate {
        State initial;
        std::optional<int> horizon;
        std::optional<double> target_eps;
        long replications = 0;
        std::uint64_t seed = 0;
        std::vector<std::string> policies;
    };

    ArrivalDistribution mu;
    CostFunction cost;
    Solver solver;
    Verify verify;
    std::optional<Simulate> simulate;
    std::optional<std::string> output;

    /// FNV-1a of the file bytes.
    std::string hash;

    /// Solver settings with the horizon resolved. `window` overrides the configured one.
    SolverConfig solver_config() const;
    SolverConfig solver_config(int window) const;
    /// Throws ConfigError when there is no simulate block.
    SimConfig sim_config() const;
};

/// Parses YAML text. Errors are ConfigError with "<name>:<line>:<column>: " prefixes.
RunConfig parse_run_config(const std::string& text, const std::string& name = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace matchdp
