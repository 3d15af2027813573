#pragma once

// The N-graph matching model: classes 0..3, edges l1={0,1}, l2={1,2}, l3={2,3}.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace matchdp {

inline constexpr int kClasses = 4;

/// Buffer content: number of waiting items per class.
struct State {
    std::array<int, kClasses> counts{};

    constexpr State() = default;
    constexpr State(int x0, int x1, int x2, int x3) : counts{x0, x1, x2, x3} {}

    constexpr int operator[](int i) const { return counts[static_cast<std::size_t>(i)]; }
    constexpr int& operator[](int i) { return counts[static_cast<std::size_t>(i)]; }

    constexpr int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    constexpr bool nonnegative() const {
        return counts[0] >= 0 && counts[1] >= 0 && counts[2] >= 0 && counts[3] >= 0;
    }

    friend constexpr bool operator==(const State&, const State&) = default;
    friend constexpr auto operator<=>(const State&, const State&) = default;
};

constexpr State operator+(State x, const State& y) {
    for (int i = 0; i < kClasses; ++i) x[i] += y[i];
    return x;
}
constexpr State operator-(State x, const State& y) {
    for (int i = 0; i < kClasses; ++i) x[i] -= y[i];
    return x;
}
constexpr State operator*(int k, State x) {
    for (int i = 0; i < kClasses; ++i) x[i] *= k;
    return x;
}

constexpr State unit(int i) {
    State e;
    e[i] = 1;
    return e;
}

inline constexpr State kEdge1{1, 1, 0, 0};
inline constexpr State kEdge2{0, 1, 1, 0};
inline constexpr State kEdge3{0, 0, 1, 1};

/// Class reversal 0<->3, 1<->2. Maps the N-graph onto itself.
constexpr State reversed(const State& x) { return State{x[3], x[2], x[1], x[0]}; }

std::string to_string(const State& x);

/// Edge counts of a matching: `l1` copies of {0,1}, `l2` of {1,2}, `l3` of {2,3}.
struct Matching {
    int l1 = 0;
    int l2 = 0;
    int l3 = 0;

    /// Items removed per class.
    constexpr State removed() const { return State{l1, l1 + l2, l2 + l3, l3}; }

    constexpr bool feasible_for(const State& x) const {
        return l1 >= 0 && l2 >= 0 && l3 >= 0 && l1 <= x[0] && l1 + l2 <= x[1] &&
               l2 + l3 <= x[2] && l3 <= x[3];
    }

    friend constexpr bool operator==(const Matching&, const Matching&) = default;
    friend constexpr auto operator<=>(const Matching&, const Matching&) = default;
};

std::string to_string(const Matching& m);

struct ArrivalDistribution {
    std::array<double, kClasses> mu{};

    double operator[](int i) const { return mu[static_cast<std::size_t>(i)]; }

    static ArrivalDistribution uniform() { return {{0.25, 0.25, 0.25, 0.25}}; }
    static ArrivalDistribution degenerate(int cls) {
        ArrivalDistribution d;
        d.mu[static_cast<std::size_t>(cls)] = 1.0;
        return d;
    }
    ArrivalDistribution reversed() const { return {{mu[3], mu[2], mu[1], mu[0]}}; }

    friend bool operator==(const ArrivalDistribution&, const ArrivalDistribution&) = default;
};

/// Linear holding cost c0*x0 + c1*x1 + c2*x2 + c3*x3.
struct CostFunction {
    std::array<double, kClasses> coef{};

    double operator[](int i) const { return coef[static_cast<std::size_t>(i)]; }
    double max_coefficient() const;
    CostFunction reversed() const { return {{coef[3], coef[2], coef[1], coef[0]}}; }

    friend bool operator==(const CostFunction&, const CostFunction&) = default;
};

/// Thrown when a caller breaks an operation's precondition (infeasible matching, state
/// outside a table, threshold index outside the stored window).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown for invalid model or run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MatchingMode { full, priority_reduced };

std::string to_string(MatchingMode mode);
MatchingMode parse_matching_mode(const std::string& name);

/// All matchings of state `x`. In `priority_reduced` mode only those that saturate
/// l1 and l3 are returned. Ordered lexicographically by (l1, l2, l3).
std::vector<Matching> enumerate_matchings(const State& x, MatchingMode mode);

/// x - m. Throws ContractError when `m` is not feasible for `x`.
State apply_matching(const State& x, const Matching& m);

// Summed as (c0 x0 + c3 x3) + (c1 x1 + c2 x2) so that cost(reversed(x)) under the
// reversed coefficients is bitwise equal to cost(x).
inline double cost(const CostFunction& c, const State& x) {
    return (c.coef[0] * x[0] + c.coef[3] * x[3]) + (c.coef[1] * x[1] + c.coef[2] * x[2]);
}

/// Empty when the model is valid; otherwise one message per violated constraint.
/// With `require_admissible` false the cost ordering c2 <= c0, c1 <= c3 is not checked.
std::vector<std::string> validate_model(const ArrivalDistribution& mu, const CostFunction& c,
                                        bool require_admissible = true);

inline constexpr double kProbabilityTolerance = 1e-12;

}  // namespace matchdp
