#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "matchdp/model.hpp"
#include "matchdp/policies.hpp"

namespace matchdp {

struct SimConfig {
    double gamma = 0.0;
    ArrivalDistribution mu;
    CostFunction cost;
    State initial;
    int horizon = 1;
    long replications = 1;
    std::uint64_t seed = 0;

    void validate() const;
    /// Bound on the discounted cost beyond the horizon from `initial`.
    double tail() const;
    /// True when both configs describe the same model and sampling plan.
    bool same_plan(const SimConfig& other) const;
};

struct Estimate {
    double mean = 0.0;
    /// Sample standard deviation over sqrt(R); +inf when R = 1.
    double standard_error = 0.0;
    long replications = 0;
    double tail = 0.0;
    std::uint64_t seed = 0;
    int horizon = 0;

    /// Half-width of the reported interval: 3 SE + tail.
    double half_width() const { return 3.0 * standard_error + tail; }
};

/// Class of the arrival at `step` of replication `replication`; a pure function of
/// (seed, replication, step).
int arrival_class(const ArrivalDistribution& mu, std::uint64_t seed, std::uint64_t replication,
                  std::uint64_t step);

/// sum_{n=0}^{H} gamma^n c(X_n) with X_0 = initial and X_{n+1} = X_n - m(X_n) + A_{n+1}.
/// A policy lookup failure is rethrown as ContractError naming the state and step.
double simulate_trajectory(const SimConfig& cfg, const DecisionRule& rule, std::uint64_t replication);

Estimate estimate_cost(const SimConfig& cfg, const DecisionRule& rule);

struct PolicyRun {
    SimConfig config;
    const DecisionRule* rule = nullptr;
};

struct PolicyEstimate {
    std::string policy;
    Estimate estimate;
};

/// One estimate per run under common random numbers, sorted by mean (stable).
/// Throws ConfigError when the runs do not share the model and sampling plan.
std::vector<PolicyEstimate> compare_policies(std::span<const PolicyRun> runs);

}  // namespace matchdp
