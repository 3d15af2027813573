#include "matchdp/structure.hpp"

#include <set>

namespace matchdp {

namespace {

// l2 - l1 = (-1, 0, 1, 0), l2 - l3 = (0, 1, 0, -1), l2 - l1 - l3 = (-1, 0, 0, -1)
constexpr State kL2minusL1 = kEdge2 - kEdge1;
constexpr State kL2minusL3 = kEdge2 - kEdge3;
constexpr State kL2minusL1L3 = kEdge2 - kEdge1 - kEdge3;

class Scanner {
public:
    Scanner(const ValueTable& v, std::string name, const ScanOptions& opt) : v_(v), opt_(opt) {
        report_.name = std::move(name);
    }

    /// v(base) <= v(base + step)
    void increasing(const std::string& ineq, const State& base, const State& step) {
        const State up = base + step;
        if (!admit(ineq, base, {base, up})) return;
        record(ineq, base, v_(up), v_(base));
    }

    /// v(p2) - v(p1) >= v(p1) - v(p0)
    void convex(const std::string& ineq, const State& p0, const State& p1, const State& p2) {
        if (!admit(ineq, p0, {p0, p1, p2})) return;
        const double mid = v_(p1);
        record(ineq, p0, v_(p2) - mid, mid - v_(p0));
    }

    const ValueTable& table() const { return v_; }
    int radius() const { return v_.radius(); }

    ClassReport finish() { return std::move(report_); }

private:
    bool admit(const std::string& ineq, const State& base, std::initializer_list<State> points) {
        for (const State& p : points) {
            if (!p.nonnegative()) {
                ++report_.skipped;
                if (negative_.insert(ineq).second) {
                    report_.diagnostics.push_back(ineq + ": instance at " + to_string(base) +
                                                  " leaves the nonnegative orthant; skipped");
                }
                return false;
            }
            if (p.total() > v_.radius()) {
                ++report_.skipped;
                return false;
            }
        }
        return true;
    }

    void record(const std::string& ineq, const State& base, double lhs, double rhs) {
        ++report_.checked;
        if (opt_.record_instances) report_.instances.push_back({ineq, base});
        if (rhs - lhs > opt_.tolerance) report_.violations.push_back({base, ineq, lhs, rhs, rhs - lhs});
    }

    const ValueTable& v_;
    ScanOptions opt_;
    ClassReport report_;
    std::set<std::string> negative_;
};

template <class F>
void for_each_state(int radius, F&& f) {
    State x;
    for (std::size_t r = 0; r < simplex_size(radius); ++r, simplex_next(x)) f(x);
}

std::string offset_name(const char* shape, int i) { return std::string(shape) + "+e" + std::to_string(i); }

/// Convexity of v along `step` starting from base, with `shift` applied to both displaced points:
/// v(b + shift + 2 step) - v(b + shift + step) >= v(b + shift + step) - v(b).
void shifted_convex(Scanner& s, const std::string& ineq, const State& b, const State& step, const State& shift) {
    s.convex(ineq, b, b + shift + step, b + shift + 2 * step);
}

}  // namespace

ClassReport check_I1(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "I1", opt);
    for_each_state(v.radius(), [&](const State& x) { s.increasing("I1", x, kEdge1); });
    return s.finish();
}

ClassReport check_I3(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "I3", opt);
    for_each_state(v.radius(), [&](const State& x) { s.increasing("I3", x, kEdge3); });
    return s.finish();
}

std::vector<ClassReport> check_I1_I3(const ValueTable& v, const ScanOptions& opt) {
    std::vector<ClassReport> out;
    out.push_back(check_I1(v, opt));
    out.push_back(check_I3(v, opt));
    return out;
}

ClassReport check_Iprime(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "Iprime", opt);
    for_each_state(v.radius(), [&](const State& x) {
        if (x[1] * x[2] <= 0) return;
        s.increasing("Iprime.l1", x, kEdge1 - kEdge2);
        s.increasing("Iprime.l3", x, kEdge3 - kEdge2);
    });
    return s.finish();
}

ClassReport check_C2(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "C2", opt);
    for_each_state(v.radius(), [&](const State& x) {
        if (x[2] >= x[3] - 1 && x[1] >= x[0] - 1) s.convex("C2", x, x + kEdge2, x + 2 * kEdge2);
    });
    return s.finish();
}

namespace {

// (1,0,beta,0) + e_i with the l2 - l1 shifted convexity; i ranges over `offsets`.
void scan_shape_4(Scanner& s, std::initializer_list<int> offsets, const char* name) {
    for (int i : offsets) {
        for (int beta = 0;; ++beta) {
            const State b = State{1, 0, beta, 0} + unit(i);
            if (b.total() > s.radius()) break;
            shifted_convex(s, offset_name(name, i), b, kEdge2, State{} - kEdge1);
        }
    }
}

// (0,beta,0,1) + e_i with the l2 - l3 shifted convexity.
void scan_shape_5(Scanner& s, std::initializer_list<int> offsets, const char* name) {
    for (int i : offsets) {
        for (int beta = 0;; ++beta) {
            const State b = State{0, beta, 0, 1} + unit(i);
            if (b.total() > s.radius()) break;
            shifted_convex(s, offset_name(name, i), b, kEdge2, State{} - kEdge3);
        }
    }
}

}  // namespace

ClassReport check_B(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "B", opt);
    scan_shape_4(s, {0, 2, 3}, "B.i");
    scan_shape_5(s, {0, 1, 3}, "B.ii");
    for (int i = 0; i < kClasses; ++i) {
        const State b = State{1, 0, 0, 1} + unit(i);
        if (b.total() > s.radius()) continue;
        shifted_convex(s, offset_name("B.iii", i), b, kEdge2, State{} - kEdge1 - kEdge3);
    }
    return s.finish();
}

ClassReport check_B_excluded_offsets(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "B_excluded", opt);
    scan_shape_4(s, {1}, "B.i");
    scan_shape_5(s, {2}, "B.ii");
    return s.finish();
}

ClassReport check_Cprime(const ValueTable& v, const ScanOptions& opt) {
    Scanner s(v, "Cprime", opt);
    const int radius = v.radius();
    for (int i = 0; i < kClasses; ++i) {
        const State e = unit(i);
        for (int alpha = 2; alpha + 1 <= radius; ++alpha) {
            for (int beta = 0; alpha + beta + 1 <= radius; ++beta) {
                const State c = State{alpha, 0, beta, 0} + e;
                s.convex(offset_name("Cprime.i", i), c, c + kL2minusL1, c + 2 * kL2minusL1);
            }
            {
                const State c = State{alpha, 0, 0, 1} + e;
                if (c.total() <= radius) {
                    s.convex(offset_name("Cprime.ii", i), c, c + kL2minusL1 - kEdge3,
                             c + 2 * kL2minusL1 - kEdge3);
                }
            }
            for (int beta = 0; alpha + beta + 1 <= radius; ++beta) {
                const State c = State{0, beta, 0, alpha} + e;
                s.convex(offset_name("Cprime.iii", i), c, c + kL2minusL3, c + 2 * kL2minusL3);
            }
            {
                const State c = State{1, 0, 0, alpha} + e;
                if (c.total() <= radius) {
                    s.convex(offset_name("Cprime.iv", i), c, c + kL2minusL3 - kEdge1,
                             c + 2 * kL2minusL3 - kEdge1);
                }
            }
            for (int beta = 2; alpha + beta + 1 <= radius; ++beta) {
                const State c = State{alpha, 0, 0, beta} + e;
                s.convex(offset_name("Cprime.v", i), c, c + kL2minusL1L3, c + 2 * kL2minusL1L3);
            }
        }
    }
    return s.finish();
}

std::vector<ClassReport> check_all_classes(const ValueTable& v, const ScanOptions& opt) {
    std::vector<ClassReport> out = check_I1_I3(v, opt);
    out.push_back(check_Iprime(v, opt));
    out.push_back(check_C2(v, opt));
    out.push_back(check_B(v, opt));
    out.push_back(check_Cprime(v, opt));
    return out;
}

bool StageReport::clean() const {
    for (const auto& r : reports) {
        if (!r.clean()) return false;
    }
    return true;
}

std::vector<ValueTable> stage_tables(const SolverConfig& cfg, int stages, MatchingMode mode) {
    // Inadmissible costs are allowed here: the scan is how their failure shows up.
    cfg.validate(false);
    if (stages < 0) throw ConfigError("number of stages must be >= 0");
    std::vector<ValueTable> tables;
    tables.reserve(static_cast<std::size_t>(stages + 1));
    tables.push_back(ValueTable::from_function(cfg.window + stages, [&](const State& x) { return cost(cfg.cost, x); }));
    for (int k = 0; k < stages; ++k) tables.push_back(bellman_table(tables.back(), cfg, mode));
    return tables;
}

std::vector<StageReport> check_closure_under_L(const SolverConfig& cfg, int stages, MatchingMode mode,
                                               const ScanOptions& opt) {
    const auto tables = stage_tables(cfg, stages, mode);
    std::vector<StageReport> out;
    for (std::size_t k = 0; k < tables.size(); ++k) {
        out.push_back({static_cast<int>(k), tables[k].radius(), check_all_classes(tables[k], opt)});
    }
    return out;
}

nlohmann::json to_json(const ClassReport& r) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"state", v.state.counts},
                              {"ineq", v.inequality},
                              {"lhs", v.lhs},
                              {"rhs", v.rhs},
                              {"gap", v.gap}});
    }
    return {{"class", r.name}, {"checked", r.checked}, {"skipped", r.skipped}, {"violations", violations}};
}

nlohmann::json to_json(const StageReport& r) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& c : r.reports) reports.push_back(to_json(c));
    return {{"stage", r.stage}, {"radius", r.radius}, {"clean", r.clean()}, {"reports", reports}};
}

}  // namespace matchdp
