#include "matchdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace matchdp {

std::string to_string(const State& x) {
    std::ostringstream os;
    os << '(' << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ')';
    return os.str();
}

std::string to_string(const Matching& m) {
    std::ostringstream os;
    os << "[l1=" << m.l1 << ",l2=" << m.l2 << ",l3=" << m.l3 << ']';
    return os.str();
}

double CostFunction::max_coefficient() const { return *std::max_element(coef.begin(), coef.end()); }

std::string to_string(MatchingMode mode) {
    return mode == MatchingMode::full ? "full" : "priority_reduced";
}

MatchingMode parse_matching_mode(const std::string& name) {
    if (name == "full") return MatchingMode::full;
    if (name == "priority_reduced") return MatchingMode::priority_reduced;
    throw ConfigError("unknown matching mode '" + name + "' (expected full or priority_reduced)");
}

std::vector<Matching> enumerate_matchings(const State& x, MatchingMode mode) {
    std::vector<Matching> out;
    if (mode == MatchingMode::priority_reduced) {
        const int a = std::min(x[0], x[1]);
        const int c = std::min(x[2], x[3]);
        const int bmax = std::min(x[1] - a, x[2] - c);
        out.reserve(static_cast<std::size_t>(bmax + 1));
        for (int b = 0; b <= bmax; ++b) out.push_back({a, b, c});
        return out;
    }
    for (int a = 0; a <= std::min(x[0], x[1]); ++a) {
        for (int b = 0; b <= std::min(x[1] - a, x[2]); ++b) {
            for (int c = 0; c <= std::min(x[2] - b, x[3]); ++c) out.push_back({a, b, c});
        }
    }
    return out;
}

State apply_matching(const State& x, const Matching& m) {
    if (!x.nonnegative() || !m.feasible_for(x)) {
        throw ContractError("matching " + to_string(m) + " is not feasible for state " + to_string(x));
    }
    return x - m.removed();
}

std::vector<std::string> validate_model(const ArrivalDistribution& mu, const CostFunction& c,
                                        bool require_admissible) {
    std::vector<std::string> problems;
    double total = 0.0;
    for (int i = 0; i < kClasses; ++i) {
        if (!std::isfinite(mu[i]) || mu[i] < 0.0) {
            problems.push_back("mu(" + std::to_string(i) + ") must be a probability >= 0");
        }
        total += mu[i];
    }
    if (!(std::abs(total - 1.0) <= kProbabilityTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "mu must sum to 1 (sum is " << total << ")";
        problems.push_back(os.str());
    }
    for (int i = 0; i < kClasses; ++i) {
        if (!std::isfinite(c[i]) || c[i] < 0.0) {
            problems.push_back("cost coefficient c" + std::to_string(i) + " must be >= 0");
        }
    }
    if (!require_admissible) return problems;
    auto describe = [&](int lo, int hi) {
        std::ostringstream os;
        os << "admissibility: c" << lo << " <= c" << hi << " fails (c" << lo << '=' << c[lo] << ", c"
           << hi << '=' << c[hi] << ')';
        return os.str();
    };
    if (c[2] > c[0]) problems.push_back(describe(2, 0));
    if (c[1] > c[3]) problems.push_back(describe(1, 3));
    return problems;
}

}  // namespace matchdp
