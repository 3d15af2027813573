#include "matchdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "matchdp/io.hpp"
#include "matchdp/parallel.hpp"

namespace matchdp {

std::vector<std::string> SolverConfig::problems(bool require_admissible) const {
    std::vector<std::string> out = validate_model(mu, cost, require_admissible);
    if (!(gamma > 0.0 && gamma < 1.0)) out.push_back("gamma must lie in (0, 1)");
    if (window < 0) out.push_back("window must be >= 0");
    if (horizon < 1) out.push_back("horizon must be >= 1");
    if (!(tie_tolerance > 0.0)) out.push_back("tie tolerance must be > 0");
    return out;
}

void SolverConfig::validate(bool require_admissible) const {
    const auto list = problems(require_admissible);
    if (list.empty()) return;
    std::string msg = "invalid solver configuration:";
    for (const auto& p : list) msg += "\n  - " + p;
    throw ConfigError(msg);
}

SolverConfig SolverConfig::reversed() const {
    SolverConfig r = *this;
    r.mu = mu.reversed();
    r.cost = cost.reversed();
    return r;
}

double tail_bound(double gamma, double max_cost, int total, int horizon) {
    // sum_{n>=M} gamma^n = gamma^M / (1-g);  sum_{n>=M} n gamma^n = gamma^M (M(1-g) + g) / (1-g)^2
    const double one_minus = 1.0 - gamma;
    const double first = static_cast<double>(horizon) + 1.0;
    const double lead = std::pow(gamma, first);
    const double constant_part = static_cast<double>(total) / one_minus;
    const double linear_part = (first * one_minus + gamma) / (one_minus * one_minus);
    return max_cost * lead * (constant_part + linear_part);
}

int horizon_for_tail(double gamma, double max_cost, int total, double eps) {
    if (!(eps > 0.0)) throw ConfigError("target tail bound must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    int n = 1;
    while (tail_bound(gamma, max_cost, total, n) > eps) {
        if (++n > 1000000) throw ConfigError("target tail bound unreachable");
    }
    return n;
}

namespace {

void require_successors(const ValueTable& v, const State& x) {
    if (!x.nonnegative()) throw ContractError("state " + to_string(x) + " has a negative component");
    if (x.total() + 1 > v.radius()) {
        throw ContractError("state " + to_string(x) + " needs a table of radius " +
                            std::to_string(x.total() + 1) + ", have " + std::to_string(v.radius()));
    }
}

State saturate_extremes(const State& x) {
    const int a = std::min(x[0], x[1]);
    const int c = std::min(x[2], x[3]);
    return State{x[0] - a, x[1] - a, x[2] - c, x[3] - c};
}

std::size_t memory_cap(const SolverConfig& cfg) {
    if (cfg.memory_cap_bytes != 0) return cfg.memory_cap_bytes;
    if (const char* env = std::getenv("MATCHDP_MEM_CAP_MB")) {
        const long long mb = parse_integer(env);
        if (mb <= 0) throw ConfigError("MATCHDP_MEM_CAP_MB must be a positive integer");
        return static_cast<std::size_t>(mb) << 20;
    }
    return std::size_t{4096} << 20;
}

}  // namespace

double bellman_apply(const ValueTable& v, const State& x, const Matching& m, const SolverConfig& cfg) {
    require_successors(v, x);
    const State after = apply_matching(x, m);
    return cost(cfg.cost, x) + cfg.gamma * expected_next(v, cfg.mu, after);
}

BellmanMin bellman_min(const ValueTable& v, const State& x, const SolverConfig& cfg) {
    return bellman_min(v, x, cfg, cfg.mode);
}

BellmanMin bellman_min(const ValueTable& v, const State& x, const SolverConfig& cfg, MatchingMode mode) {
    require_successors(v, x);
    const auto candidates = enumerate_matchings(x, mode);
    std::vector<double> values;
    values.reserve(candidates.size());
    for (const auto& m : candidates) values.push_back(bellman_apply(v, x, m, cfg));
    BellmanMin out;
    out.value = *std::min_element(values.begin(), values.end());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (values[k] <= out.value + cfg.tie_tolerance) out.argmin.push_back(candidates[k]);
    }
    return out;
}

ValueTable bellman_table(const ValueTable& v, const SolverConfig& cfg, MatchingMode mode) {
    const int radius = v.radius() - 1;
    if (radius < 0) throw ContractError("bellman_table needs a table of radius >= 1");

    // next[z] = E[v(z + A)] for every post-matching state z.
    ValueTable next(radius);
    parallel_for(next.size(), [&](std::size_t begin, std::size_t end) {
        State z = simplex_unrank(begin);
        auto out = next.values();
        for (std::size_t r = begin; r < end; ++r, simplex_next(z)) out[r] = expected_next(v, cfg.mu, z);
    });

    ValueTable result(radius);
    if (mode == MatchingMode::priority_reduced) {
        // best[z] = min over b of next[z - b l2], b = 0..min(z1, z2): a running minimum
        // along each l2 line. z - l2 always has a smaller rank than z.
        ValueTable best(radius);
        State z;
        auto out = best.values();
        const auto in = next.values();
        for (std::size_t r = 0; r < best.size(); ++r, simplex_next(z)) {
            out[r] = (z[1] > 0 && z[2] > 0) ? std::min(in[r], best(z - kEdge2)) : in[r];
        }
        parallel_for(result.size(), [&](std::size_t begin, std::size_t end) {
            State x = simplex_unrank(begin);
            auto res = result.values();
            for (std::size_t r = begin; r < end; ++r, simplex_next(x)) {
                res[r] = cost(cfg.cost, x) + cfg.gamma * best(saturate_extremes(x));
            }
        });
    } else {
        parallel_for(result.size(), [&](std::size_t begin, std::size_t end) {
            State x = simplex_unrank(begin);
            auto res = result.values();
            for (std::size_t r = begin; r < end; ++r, simplex_next(x)) {
                double lowest = std::numeric_limits<double>::infinity();
                for (int a = 0; a <= std::min(x[0], x[1]); ++a) {
                    for (int b = 0; b <= std::min(x[1] - a, x[2]); ++b) {
                        for (int c = 0; c <= std::min(x[2] - b, x[3]); ++c) {
                            lowest = std::min(lowest, next(x - Matching{a, b, c}.removed()));
                        }
                    }
                }
                res[r] = cost(cfg.cost, x) + cfg.gamma * lowest;
            }
        });
    }
    return result;
}

std::size_t value_iteration_memory(const SolverConfig& cfg) {
    const int radius = cfg.window + 1 + cfg.horizon;
    const std::size_t tables = cfg.mode == MatchingMode::priority_reduced ? 4 : 3;
    return tables * simplex_size(radius) * sizeof(double);
}

SolveResult value_iteration(const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t estimate = value_iteration_memory(cfg);
    const std::size_t cap = memory_cap(cfg);
    if (estimate > cap) {
        std::ostringstream os;
        os << "value iteration on radius " << cfg.window + 1 + cfg.horizon << " needs about "
           << (estimate >> 20) << " MiB, above the cap of " << (cap >> 20) << " MiB";
        throw ResourceError(os.str(), estimate);
    }

    SolveResult res;
    res.horizon = cfg.horizon;
    res.gamma = cfg.gamma;
    res.max_cost = cfg.cost.max_coefficient();
    res.values = ValueTable::from_function(cfg.window + 1 + cfg.horizon,
                                           [&](const State& x) { return cost(cfg.cost, x); });
    res.sup_change.reserve(static_cast<std::size_t>(cfg.horizon));
    for (int k = 0; k < cfg.horizon; ++k) {
        ValueTable next = bellman_table(res.values, cfg, cfg.mode);
        double change = 0.0;
        const auto a = next.values();
        const auto b = res.values.values();
        for (std::size_t r = 0; r < a.size(); ++r) change = std::max(change, std::abs(a[r] - b[r]));
        res.sup_change.push_back(change);
        res.values = std::move(next);
    }
    return res;
}

std::vector<StatePolicy> extract_policy(const ValueTable& v, const SolverConfig& cfg) {
    if (v.radius() < cfg.window + 1) {
        throw ContractError("extract_policy needs a table of radius window + 1");
    }
    std::vector<StatePolicy> out;
    out.reserve(simplex_size(cfg.window));
    State x;
    for (std::size_t r = 0; r < simplex_size(cfg.window); ++r, simplex_next(x)) {
        out.push_back({x, bellman_min(v, x, cfg).argmin});
    }
    return out;
}

Threshold threshold_from_probe(const std::vector<double>& probe, double tolerance) {
    if (probe.size() < 2) throw ContractError("a probe sequence needs at least two entries");
    const double lowest = *std::min_element(probe.begin(), probe.end());
    std::size_t t = 0;
    while (probe[t] > lowest + tolerance) ++t;
    if (t + 1 == probe.size()) return Threshold::infinite();
    return Threshold::finite(static_cast<int>(t));
}

ThresholdExtraction extract_thresholds(const ValueTable& v, const SolverConfig& cfg) {
    const int half = cfg.window;
    ThresholdExtraction out;
    out.policy = ThresholdPolicy(half);
    out.probes.resize(static_cast<std::size_t>(2 * half + 1));
    for (int i = -half; i <= half; ++i) {
        const State base = i <= 0 ? (-i) * unit(2) : i * unit(1);
        auto& probe = out.probes[static_cast<std::size_t>(i + half)];
        for (int j = 0; base.total() + 2 * j + 1 <= v.radius(); ++j) {
            probe.push_back(expected_next(v, cfg.mu, base + j * kEdge2));
        }
        if (probe.size() < 2) {
            out.diagnostics.push_back("index " + std::to_string(i) + " dropped: probe has " +
                                      std::to_string(probe.size()) + " entries within radius " +
                                      std::to_string(v.radius()));
            probe.clear();
            continue;
        }
        const Threshold t = threshold_from_probe(probe, cfg.tie_tolerance);
        out.policy.set(i, t);
        if (t.censored) ++out.censored;
        const int turn = t.censored ? static_cast<int>(probe.size()) - 1 : t.value;
        for (int j = 0; j + 1 < static_cast<int>(probe.size()); ++j) {
            const double step = probe[static_cast<std::size_t>(j + 1)] - probe[static_cast<std::size_t>(j)];
            const double gap = j < turn ? step : -step;
            if (gap > cfg.tie_tolerance) out.violations.push_back({i, j, gap});
        }
    }
    return out;
}

OptimalityReport verify_threshold_optimality(const ValueTable& v, const ThresholdPolicy& p,
                                             const SolverConfig& cfg, double tolerance) {
    OptimalityReport report;
    State x;
    for (std::size_t r = 0; r < simplex_size(cfg.window); ++r, simplex_next(x)) {
        const Matching m = threshold_action(p, x);
        const double value = bellman_apply(v, x, m, cfg);
        const double optimum = bellman_min(v, x, cfg, MatchingMode::full).value;
        ++report.checked;
        if (value - optimum > tolerance) report.violations.push_back({x, m, value, optimum, value - optimum});
    }
    return report;
}

GrowthReport check_growth_bound(const SolverConfig& cfg) {
    GrowthReport report;
    const int radius = std::min(cfg.window, 4);
    const double cmax = cfg.cost.max_coefficient();
    auto w = [](const State& x) { return static_cast<double>(x.total()) + 1.0; };
    constexpr Baseline rules[] = {Baseline::match_nothing, Baseline::full_greedy, Baseline::never_l2,
                                  Baseline::l2_first};
    State start;
    for (std::size_t r = 0; r < simplex_size(radius); ++r, simplex_next(start)) {
        ++report.checked;
        if (cost(cfg.cost, start) > cmax * w(start) * (1.0 + 1e-15)) {
            report.violations.push_back("c(x) > max(c) w(x) at " + to_string(start));
        }
        for (Baseline rule : rules) {
            std::map<State, double> dist{{start, 1.0}};
            for (int p = 1; p <= 4; ++p) {
                std::map<State, double> step;
                for (const auto& [x, prob] : dist) {
                    const State after = apply_matching(x, baseline_action(rule, x));
                    for (int i = 0; i < kClasses; ++i) {
                        if (cfg.mu[i] > 0.0) step[after + unit(i)] += prob * cfg.mu[i];
                    }
                }
                dist = std::move(step);
                double expected = 0.0;
                for (const auto& [x, prob] : dist) expected += prob * w(x);
                ++report.checked;
                if (expected > w(start) + p + 1e-12) {
                    report.violations.push_back("E[w(X_" + std::to_string(p) + ")] = " + format_double(expected) +
                                                " > w(x) + p under " + to_string(rule) + " from " +
                                                to_string(start));
                }
            }
        }
    }
    return report;
}

}  // namespace matchdp
