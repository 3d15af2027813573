#include "matchdp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matchdp/parallel.hpp"
#include "matchdp/solver.hpp"

namespace matchdp {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

void SimConfig::validate() const {
    std::vector<std::string> problems = validate_model(mu, cost);
    if (!(gamma > 0.0 && gamma < 1.0)) problems.push_back("gamma must lie in (0, 1)");
    if (horizon < 0) problems.push_back("simulation horizon must be >= 0");
    if (replications < 1) problems.push_back("replications must be >= 1");
    if (!initial.nonnegative()) problems.push_back("initial state must be nonnegative");
    if (problems.empty()) return;
    std::string msg = "invalid simulation configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
}

double SimConfig::tail() const { return tail_bound(gamma, cost.max_coefficient(), initial.total(), horizon); }

bool SimConfig::same_plan(const SimConfig& o) const {
    return gamma == o.gamma && mu == o.mu && cost == o.cost && initial == o.initial && horizon == o.horizon &&
           replications == o.replications && seed == o.seed;
}

int arrival_class(const ArrivalDistribution& mu, std::uint64_t seed, std::uint64_t replication,
                  std::uint64_t step) {
    const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ replication) ^ step);
    const double u = static_cast<double>(key >> 11) * 0x1.0p-53;
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < kClasses; ++i) {
        if (mu[i] <= 0.0) continue;
        last = i;
        acc += mu[i];
        if (u < acc) return i;
    }
    return last;
}

double simulate_trajectory(const SimConfig& cfg, const DecisionRule& rule, std::uint64_t replication) {
    State x = cfg.initial;
    double total = 0.0;
    double discount = 1.0;
    for (int n = 0;; ++n) {
        total += discount * cost(cfg.cost, x);
        if (n == cfg.horizon) break;
        discount *= cfg.gamma;
        Matching m;
        try {
            m = rule(x);
        } catch (const ContractError& e) {
            throw ContractError("policy " + rule.name() + " failed at state " + to_string(x) + ", step " +
                                std::to_string(n) + " of replication " + std::to_string(replication) +
                                ": " + e.what());
        }
        x = apply_matching(x, m) +
            unit(arrival_class(cfg.mu, cfg.seed, replication, static_cast<std::uint64_t>(n + 1)));
    }
    return total;
}

Estimate estimate_cost(const SimConfig& cfg, const DecisionRule& rule) {
    cfg.validate();
    std::vector<double> samples(static_cast<std::size_t>(cfg.replications));
    parallel_for(samples.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) samples[r] = simulate_trajectory(cfg, rule, r);
    });
    // Welford's update in replication order.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const double delta = samples[r] - mean;
        mean += delta / static_cast<double>(r + 1);
        m2 += delta * (samples[r] - mean);
    }
    Estimate e;
    e.mean = mean;
    e.replications = cfg.replications;
    e.standard_error = cfg.replications > 1
                           ? std::sqrt(m2 / static_cast<double>(cfg.replications - 1)) /
                                 std::sqrt(static_cast<double>(cfg.replications))
                           : std::numeric_limits<double>::infinity();
    e.tail = cfg.tail();
    e.seed = cfg.seed;
    e.horizon = cfg.horizon;
    return e;
}

std::vector<PolicyEstimate> compare_policies(std::span<const PolicyRun> runs) {
    if (runs.empty()) return {};
    for (const auto& run : runs) {
        if (run.rule == nullptr) throw ConfigError("policy run without a decision rule");
        if (!run.config.same_plan(runs.front().config)) {
            throw ConfigError("policy " + run.rule->name() + " does not share the model and sampling plan");
        }
    }
    std::vector<PolicyEstimate> out;
    out.reserve(runs.size());
    for (const auto& run : runs) out.push_back({run.rule->name(), estimate_cost(run.config, *run.rule)});
    std::stable_sort(out.begin(), out.end(),
                     [](const PolicyEstimate& a, const PolicyEstimate& b) { return a.estimate.mean < b.estimate.mean; });
    return out;
}

}  // namespace matchdp
