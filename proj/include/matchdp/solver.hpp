#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchdp/model.hpp"
#include "matchdp/policies.hpp"
#include "matchdp/value_table.hpp"

namespace matchdp {

/// Raised when a solve would need more memory than the configured cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t estimate_bytes)
        : std::runtime_error(what), estimate_bytes_(estimate_bytes) {}
    std::size_t estimate_bytes() const { return estimate_bytes_; }

private:
    std::size_t estimate_bytes_;
};

struct SolverConfig {
    double gamma = 0.0;
    ArrivalDistribution mu;
    CostFunction cost;
    /// Radius on which values and actions are reported.
    int window = 0;
    /// Number of backward stages N.
    int horizon = 1;
    MatchingMode mode = MatchingMode::priority_reduced;
    /// Actions within this distance of the minimum are all optimal.
    double tie_tolerance = 1e-9;
    /// Refuse solves whose working set exceeds this. 0 means: read
    /// MATCHDP_MEM_CAP_MB, else 4096 MiB.
    std::size_t memory_cap_bytes = 0;

    /// Empty when valid; one message per problem otherwise.
    std::vector<std::string> problems(bool require_admissible = true) const;
    /// Throws ConfigError listing every problem.
    void validate(bool require_admissible = true) const;

    /// Same model with classes reversed (0<->3, 1<->2).
    SolverConfig reversed() const;
};

/// Certified bound on sum_{n > horizon} gamma^n * c_max * (total + n), in closed form.
/// This dominates the discounted cost after `horizon` steps from any state with
/// `total` items, under any policy.
double tail_bound(double gamma, double max_cost, int total, int horizon);

/// Smallest N >= 1 with tail_bound(gamma, max_cost, total, N) <= eps.
int horizon_for_tail(double gamma, double max_cost, int total, double eps);

/// E[v(z + A)], summed as (mu0 v(z+e0) + mu3 v(z+e3)) + (mu1 v(z+e1) + mu2 v(z+e2)).
/// `z + e_i` must lie in the table.
inline double expected_next(const ValueTable& v, const ArrivalDistribution& mu, const State& z) {
    return (mu[0] * v(z + unit(0)) + mu[3] * v(z + unit(3))) +
           (mu[1] * v(z + unit(1)) + mu[2] * v(z + unit(2)));
}

/// c(x) + gamma E[v(x - m + A)].
double bellman_apply(const ValueTable& v, const State& x, const Matching& m, const SolverConfig& cfg);

struct BellmanMin {
    double value = 0.0;
    /// Every matching whose value is within the tie tolerance of the minimum.
    std::vector<Matching> argmin;
};

BellmanMin bellman_min(const ValueTable& v, const State& x, const SolverConfig& cfg);
BellmanMin bellman_min(const ValueTable& v, const State& x, const SolverConfig& cfg, MatchingMode mode);

/// One application of the Bellman operator to every state of radius v.radius() - 1.
ValueTable bellman_table(const ValueTable& v, const SolverConfig& cfg, MatchingMode mode);

/// Bytes held at peak by value_iteration for `cfg`.
std::size_t value_iteration_memory(const SolverConfig& cfg);

struct SolveResult {
    /// V_N on radius window + 1, so that one Bellman step is evaluable on the window.
    ValueTable values;
    int horizon = 0;
    double gamma = 0.0;
    double max_cost = 0.0;
    /// sup |V_{k+1} - V_k| over the states where both are defined, for k = 0..N-1.
    std::vector<double> sup_change;

    /// Certified bound on |V_N(x) - v(x)|.
    double tail(const State& x) const { return tail_bound(gamma, max_cost, x.total(), horizon); }
};

/// Finite-horizon backward recursion from V_0 = c over the radius window + 1 + N
/// simplex. Throws ResourceError when the estimate exceeds the memory cap.
SolveResult value_iteration(const SolverConfig& cfg);

struct StatePolicy {
    State state;
    std::vector<Matching> optimal;
};

/// Optimal action sets for every |x| <= cfg.window, in rank order.
std::vector<StatePolicy> extract_policy(const ValueTable& v, const SolverConfig& cfg);

struct UnimodalityViolation {
    int index = 0;
    int position = 0;
    double gap = 0.0;
};

struct ThresholdExtraction {
    ThresholdPolicy policy{0};
    /// Probe sequence per index, from -half_width to +half_width (empty when dropped).
    std::vector<std::vector<double>> probes;
    std::vector<UnimodalityViolation> violations;
    std::vector<std::string> diagnostics;
    int censored = 0;
};

/// Threshold of a single probe sequence: the smallest j whose value is within
/// `tolerance` of the minimum; censored when that is the last observed j.
/// Requires at least two entries.
Threshold threshold_from_probe(const std::vector<double>& probe, double tolerance);

/// Probe sequences s_i(j) = E[v(A + |i| e2 + j l2)] for i <= 0 and
/// E[v(A + i e1 + j l2)] for i >= 0, over i in [-window, window], truncated to the table.
ThresholdExtraction extract_thresholds(const ValueTable& v, const SolverConfig& cfg);

struct OptimalityViolation {
    State state;
    Matching action;
    double action_value = 0.0;
    double optimum = 0.0;
    double gap = 0.0;
};

struct OptimalityReport {
    long checked = 0;
    std::vector<OptimalityViolation> violations;
};

/// Compares the threshold action against the minimum over all matchings at every
/// |x| <= cfg.window.
OptimalityReport verify_threshold_optimality(const ValueTable& v, const ThresholdPolicy& p,
                                             const SolverConfig& cfg, double tolerance);

struct GrowthReport {
    long checked = 0;
    std::vector<std::string> violations;
};

/// Checks E[w(X_p)] <= w(x) + p under each baseline rule and c(x) <= max(c) w(x),
/// with w(x) = |x| + 1, over all |x| <= min(window, 4) and p = 1..4.
GrowthReport check_growth_bound(const SolverConfig& cfg);

}  // namespace matchdp
