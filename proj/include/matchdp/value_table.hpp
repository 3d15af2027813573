#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matchdp/model.hpp"

namespace matchdp {

/// Number of states x in N^4 with |x| <= radius.
constexpr std::size_t simplex_size(int radius) {
    if (radius < 0) return 0;
    const auto n = static_cast<std::size_t>(radius);
    return (n + 4) * (n + 3) * (n + 2) * (n + 1) / 24;
}

/// Graded lexicographic numbering of N^4: states ordered by |x|, then
/// lexicographically by (x0, x1, x2). The states with |x| <= r occupy ranks
/// [0, simplex_size(r)), so a table of radius r is a prefix of any larger one.
constexpr std::size_t simplex_rank(const State& x) {
    const auto n = static_cast<std::size_t>(x.total());
    const auto x0 = static_cast<std::size_t>(x[0]);
    const auto x1 = static_cast<std::size_t>(x[1]);
    const auto x2 = static_cast<std::size_t>(x[2]);
    auto c3 = [](std::size_t k) { return (k + 3) * (k + 2) * (k + 1) / 6; };
    auto c2 = [](std::size_t k) { return (k + 2) * (k + 1) / 2; };
    const std::size_t below = n == 0 ? 0 : simplex_size(static_cast<int>(n) - 1);
    const std::size_t rest = n - x0;
    return below + (c3(n) - c3(rest)) + (c2(rest) - c2(rest - x1)) + x2;
}

State simplex_unrank(std::size_t rank);

/// Steps to the state of next rank.
constexpr void simplex_next(State& x) {
    if (x[3] > 0) {
        ++x[2];
        --x[3];
    } else if (x[2] > 0) {
        ++x[1];
        x[3] = x[2] - 1;
        x[2] = 0;
    } else if (x[1] > 0) {
        ++x[0];
        x[3] = x[1] - 1;
        x[1] = 0;
    } else {
        x = State{0, 0, 0, x[0] + 1};
    }
}

/// Values of a function on {x : |x| <= radius}.
class ValueTable {
public:
    ValueTable() = default;
    explicit ValueTable(int radius, double fill = 0.0);

    template <class F>
    static ValueTable from_function(int radius, F&& f) {
        ValueTable t(radius);
        State x;
        for (double& v : t.values_) {
            v = f(x);
            simplex_next(x);
        }
        return t;
    }

    int radius() const { return radius_; }
    std::size_t size() const { return values_.size(); }

    bool contains(const State& x) const { return x.nonnegative() && x.total() <= radius_; }

    /// Unchecked access; `x` must satisfy contains().
    double operator()(const State& x) const { return values_[simplex_rank(x)]; }
    double& operator()(const State& x) { return values_[simplex_rank(x)]; }

    /// Checked access. Throws ContractError outside the table.
    double at(const State& x) const;

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Drops every state with |x| > radius.
    void truncate(int radius);

private:
    int radius_ = -1;
    std::vector<double> values_;
};

}  // namespace matchdp
