#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matchdp/model.hpp"

namespace matchdp {

/// A threshold on the number of l2 pairs kept waiting. `censored` means the
/// optimum was still decreasing at the edge of the observed window (the +inf case).
struct Threshold {
    int value = 0;
    bool censored = false;

    static Threshold finite(int t);
    static Threshold infinite() { return {0, true}; }

    friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// i(x) = (x1 - x0) - (x2 - x3).
constexpr int threshold_index(const State& x) { return (x[1] - x[0]) - (x[2] - x[3]); }

/// (x1 - x0) ^ (x2 - x3): the l2 pairs available once l1 and l3 are saturated (may be <= 0).
constexpr int l2_surplus(const State& x) {
    const int left = x[1] - x[0];
    const int right = x[2] - x[3];
    return left < right ? left : right;
}

/// Thresholds t_i for i in [-half_width, half_width]. Entries may be absent when the
/// extractor could not observe them.
class ThresholdPolicy {
public:
    explicit ThresholdPolicy(int half_width);

    /// Every index set to the same threshold.
    static ThresholdPolicy constant(int half_width, Threshold t);

    int half_width() const { return half_width_; }
    bool in_range(int i) const { return i >= -half_width_ && i <= half_width_; }

    void set(int i, Threshold t);
    void clear(int i);
    std::optional<Threshold> get(int i) const;

    /// Throws ContractError when `i` is outside the window or has no stored value.
    Threshold at(int i) const;

    friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;

private:
    std::size_t slot(int i) const;

    int half_width_;
    std::vector<std::optional<Threshold>> entries_;
};

/// Saturate l1 and l3, then match ((x1-x0)^(x2-x3) - t_{i(x)})^+ l2 pairs. The
/// threshold is looked up only when that surplus is positive; a censored threshold
/// matches no l2 pair.
Matching threshold_action(const ThresholdPolicy& p, const State& x);

/// Two-column `i,t_i` CSV, `inf` for censored thresholds, header row first. Lines
/// starting with '#' are comments.
void write_thresholds_csv(std::ostream& os, const ThresholdPolicy& p);
ThresholdPolicy read_thresholds_csv(std::istream& is);

enum class Baseline { match_nothing, full_greedy, never_l2, l2_first };

Baseline parse_baseline(const std::string& name);
std::string to_string(Baseline b);

Matching baseline_action(Baseline b, const State& x);

/// A stationary deterministic decision rule x -> m(x).
class DecisionRule {
public:
    virtual ~DecisionRule() = default;
    virtual Matching operator()(const State& x) const = 0;
    virtual std::string name() const = 0;
};

class ThresholdRule final : public DecisionRule {
public:
    ThresholdRule(std::string name, ThresholdPolicy policy)
        : name_(std::move(name)), policy_(std::move(policy)) {}

    Matching operator()(const State& x) const override { return threshold_action(policy_, x); }
    std::string name() const override { return name_; }
    const ThresholdPolicy& policy() const { return policy_; }

private:
    std::string name_;
    ThresholdPolicy policy_;
};

class BaselineRule final : public DecisionRule {
public:
    explicit BaselineRule(Baseline which) : which_(which) {}

    Matching operator()(const State& x) const override { return baseline_action(which_, x); }
    std::string name() const override { return to_string(which_); }

private:
    Baseline which_;
};

}  // namespace matchdp
