#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "matchdp/policies.hpp"
#include "matchdp/value_table.hpp"

using namespace matchdp;

namespace {

bool feasible_by_enumeration(const State& x, const Matching& m) {
    const auto all = enumerate_matchings(x, MatchingMode::full);
    return std::find(all.begin(), all.end(), m) != all.end();
}

ThresholdPolicy random_policy(std::mt19937& rng, int half_width) {
    std::uniform_int_distribution<int> t(0, 5);
    ThresholdPolicy p(half_width);
    for (int i = -half_width; i <= half_width; ++i) {
        const int v = t(rng);
        p.set(i, v == 5 ? Threshold::infinite() : Threshold::finite(v));
    }
    return p;
}

}  // namespace

TEST_CASE("threshold_action examples") {
    ThresholdPolicy any = ThresholdPolicy::constant(8, Threshold::finite(3));
    CHECK(threshold_action(any, {2, 1, 0, 3}) == Matching{1, 0, 0});
    CHECK(threshold_action(ThresholdPolicy(0), {2, 1, 0, 3}) == Matching{1, 0, 0});

    ThresholdPolicy p(8);
    p.set(1, Threshold::finite(1));
    CHECK(threshold_action(p, {0, 3, 2, 0}) == Matching{0, 1, 0});

    ThresholdPolicy q(8);
    q.set(0, Threshold::finite(2));
    CHECK(threshold_action(q, {1, 4, 5, 2}) == Matching{1, 1, 2});

    ThresholdPolicy cens = ThresholdPolicy::constant(8, Threshold::infinite());
    CHECK(threshold_action(cens, {1, 4, 5, 2}) == Matching{1, 0, 2});
}

TEST_CASE("threshold lookups outside the window are errors") {
    ThresholdPolicy p = ThresholdPolicy::constant(1, Threshold::finite(0));
    // i(x) = 3 - 1 = 2 with a positive l2 surplus
    CHECK_THROWS_AS(threshold_action(p, {0, 3, 1, 0}), ContractError);
    ThresholdPolicy gap(4);
    CHECK_THROWS_AS(threshold_action(gap, {0, 2, 2, 0}), ContractError);
    CHECK_THROWS_AS(Threshold::finite(-1), ContractError);
}

TEST_CASE("baseline_action examples") {
    CHECK(baseline_action(Baseline::full_greedy, {0, 3, 2, 0}) == Matching{0, 2, 0});
    CHECK(baseline_action(Baseline::never_l2, {1, 4, 5, 2}) == Matching{1, 0, 2});
    CHECK(baseline_action(Baseline::l2_first, {1, 1, 1, 1}) == Matching{0, 1, 0});
    CHECK(baseline_action(Baseline::match_nothing, {4, 4, 4, 4}) == Matching{});
    CHECK_THROWS_AS(parse_baseline("fcfm"), ConfigError);
    CHECK(parse_baseline("l2_first") == Baseline::l2_first);
}

TEST_CASE("threshold and baseline actions are feasible, and the extremes match the baselines") {
    std::mt19937 rng(3);
    const ThresholdPolicy p = random_policy(rng, 8);
    const ThresholdPolicy zero = ThresholdPolicy::constant(8, Threshold::finite(0));
    const ThresholdPolicy inf = ThresholdPolicy::constant(8, Threshold::infinite());
    State x;
    for (std::size_t r = 0; r < simplex_size(8); ++r, simplex_next(x)) {
        CHECK(feasible_by_enumeration(x, threshold_action(p, x)));
        for (Baseline b : {Baseline::match_nothing, Baseline::full_greedy, Baseline::never_l2, Baseline::l2_first}) {
            CHECK(feasible_by_enumeration(x, baseline_action(b, x)));
        }
        CHECK(threshold_action(zero, x) == baseline_action(Baseline::full_greedy, x));
        CHECK(threshold_action(inf, x) == baseline_action(Baseline::never_l2, x));
    }
}

TEST_CASE("l2 count is nonincreasing in the threshold") {
    State x;
    for (std::size_t r = 0; r < simplex_size(10); ++r, simplex_next(x)) {
        int previous = x.total() + 1;
        for (int t = 0; t <= 12; ++t) {
            const int b = threshold_action(ThresholdPolicy::constant(10, Threshold::finite(t)), x).l2;
            CHECK(b <= previous);
            previous = b;
        }
        CHECK(threshold_action(ThresholdPolicy::constant(10, Threshold::infinite()), x).l2 <= previous);
    }
}

TEST_CASE("threshold_action commutes with class reversal under the reflected family") {
    // Reversal negates the index: i(reversed x) = -i(x), while the l2 surplus is unchanged.
    std::mt19937 rng(5);
    const ThresholdPolicy p = random_policy(rng, 8);
    ThresholdPolicy reflected(8);
    for (int i = -8; i <= 8; ++i) reflected.set(-i, p.at(i));
    const ThresholdPolicy shared = ThresholdPolicy::constant(8, Threshold::finite(2));
    State x;
    for (std::size_t r = 0; r < simplex_size(8); ++r, simplex_next(x)) {
        const State y = reversed(x);
        CHECK(threshold_index(y) == -threshold_index(x));
        CHECK(l2_surplus(y) == l2_surplus(x));
        const Matching m = threshold_action(p, x);
        CHECK(threshold_action(reflected, y) == Matching{m.l3, m.l2, m.l1});
        const Matching s = threshold_action(shared, x);
        CHECK(threshold_action(shared, y) == Matching{s.l3, s.l2, s.l1});
    }
}

TEST_CASE("thresholds CSV") {
    ThresholdPolicy p(3);
    p.set(-3, Threshold::finite(0));
    p.set(-1, Threshold::infinite());
    p.set(0, Threshold::finite(4));
    p.set(2, Threshold::finite(1));

    std::ostringstream os;
    write_thresholds_csv(os, p);
    CHECK(os.str() == "i,t_i\n-3,0\n-1,inf\n0,4\n2,1\n");

    std::istringstream is("# config_hash=abc\n" + os.str());
    const ThresholdPolicy back = read_thresholds_csv(is);
    CHECK(back == p);

    std::istringstream bad("i,t_i\n1,-2\n");
    CHECK_THROWS_AS(read_thresholds_csv(bad), ConfigError);
    std::istringstream no_header("1,2\n");
    CHECK_THROWS_AS(read_thresholds_csv(no_header), ConfigError);
}
