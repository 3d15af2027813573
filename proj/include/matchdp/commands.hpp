#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "matchdp/config.hpp"
#include "matchdp/simulation.hpp"
#include "matchdp/solver.hpp"

namespace matchdp {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitVerificationFailed = 2,
    kExitResourceRefused = 3,
};

// CSV writers. Each file starts with a "# config_hash=<hex>" comment line, then the
// header row. '.' decimal separator, LF line endings.
void write_values_csv(std::ostream& os, const SolveResult& res, int window, const std::string& hash);
void write_policy_csv(std::ostream& os, const std::vector<StatePolicy>& policy, const std::string& hash);
void write_simulation_csv(std::ostream& os, const std::vector<PolicyEstimate>& rows, const std::string& hash);

/// values.csv, policy.csv, manifest.json (+ timing.txt)
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// thresholds.csv, thresholds_report.json
int cmd_thresholds(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// closure.json
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// simulation.csv, simulation_manifest.json
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Full CLI entry point: parses arguments, dispatches, maps exceptions to exit codes.
int run_cli(int argc, char** argv, std::ostream& log);

}  // namespace matchdp
