#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "matchdp/solver.hpp"
#include "matchdp/value_table.hpp"

namespace matchdp {

inline constexpr double kStructureTolerance = 1e-9;

struct ClassViolation {
    State state;
    std::string inequality;
    double lhs = 0.0;
    double rhs = 0.0;
    /// rhs - lhs; positive means the inequality lhs >= rhs fails.
    double gap = 0.0;
};

struct CheckedInstance {
    std::string inequality;
    State base;
    friend bool operator==(const CheckedInstance&, const CheckedInstance&) = default;
    friend auto operator<=>(const CheckedInstance&, const CheckedInstance&) = default;
};

/// Outcome of scanning one function class over a finite table. Instances whose
/// points leave the table are skipped and counted, never extrapolated.
struct ClassReport {
    std::string name;
    long checked = 0;
    long skipped = 0;
    std::vector<ClassViolation> violations;
    std::vector<std::string> diagnostics;
    /// Filled only when the scan is asked to record what it checked.
    std::vector<CheckedInstance> instances;

    bool clean() const { return violations.empty(); }
};

struct ScanOptions {
    double tolerance = kStructureTolerance;
    bool record_instances = false;
};

/// v(x) <= v(x + l1), and v(x) <= v(x + l3).
ClassReport check_I1(const ValueTable& v, const ScanOptions& opt = {});
ClassReport check_I3(const ValueTable& v, const ScanOptions& opt = {});
/// {I1 report, I3 report}.
std::vector<ClassReport> check_I1_I3(const ValueTable& v, const ScanOptions& opt = {});
/// v(x) <= v(x + l1 - l2) and v(x) <= v(x + l3 - l2) whenever x1 x2 > 0.
ClassReport check_Iprime(const ValueTable& v, const ScanOptions& opt = {});
/// Convexity along l2 at x with x2 >= x3 - 1 and x1 >= x0 - 1.
ClassReport check_C2(const ValueTable& v, const ScanOptions& opt = {});
/// The three boundary convexity shapes of class B.
ClassReport check_B(const ValueTable& v, const ScanOptions& opt = {});
/// The five composite convexity shapes of class C'.
ClassReport check_Cprime(const ValueTable& v, const ScanOptions& opt = {});
/// The B shapes at the offsets excluded from B ((1,0,b,0)+e1 and (0,b,0,1)+e2);
/// these follow from I1/I3, C2 and B.
ClassReport check_B_excluded_offsets(const ValueTable& v, const ScanOptions& opt = {});

/// All six class reports, in the order I1, I3, Iprime, C2, B, Cprime.
std::vector<ClassReport> check_all_classes(const ValueTable& v, const ScanOptions& opt = {});

struct StageReport {
    int stage = 0;
    int radius = 0;
    std::vector<ClassReport> reports;
    bool clean() const;
};

/// V_0 = c, V_{k+1} = L V_k on radius window + stages - k, for k = 0..stages.
/// The cost need not be admissible.
std::vector<ValueTable> stage_tables(const SolverConfig& cfg, int stages, MatchingMode mode);

/// Runs every class check on each stage table.
std::vector<StageReport> check_closure_under_L(const SolverConfig& cfg, int stages, MatchingMode mode,
                                               const ScanOptions& opt = {});

nlohmann::json to_json(const ClassReport& r);
nlohmann::json to_json(const StageReport& r);

}  // namespace matchdp
