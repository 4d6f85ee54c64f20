#ifndef DPN_ANALYZER_HPP
#define DPN_ANALYZER_HPP

#include <optional>
#include <string>
#include <vector>

#include "dpn/encoder.hpp"
#include "dpn/gomory.hpp"
#include "dpn/model.hpp"
#include "dpn/simplex.hpp"

namespace dpn {

enum class Method { BigMLp, BranchLp, BranchIlp };

std::string method_str(Method m);

struct AnalyzeOptions {
    CutConfig cut_config;
    int parallelism = 1;
    long deadline_ms = 0;  // 0: no deadline; shared across all branch solves
};

struct Witness {
    std::map<std::string, Rational> values;  // variable id -> value
    std::string branch;                      // descriptor that produced it
};

/// Liveness verdict. Live means the blocked-pseudo-state system is provably
/// empty under the chosen test; Unknown is NOT "deadlocked" (the witness may
/// be unreachable; the test is a sufficient condition only). Inconclusive is
/// reported when a branch exhausted the solver safeguards or the deadline.
struct Verdict {
    enum class Kind { Live, Unknown, Inconclusive };
    Kind kind = Kind::Unknown;
    Method method = Method::BranchIlp;
    Witness witness;     // Unknown
    std::string reason;  // Inconclusive
};

struct BranchTally {
    long total = 0;
    long feasible = 0;
    long infeasible = 0;
    long unbounded = 0;
    long inconclusive = 0;
};

using SolveStats = SolverCounters;

struct CheckResult {
    Verdict verdict;
    BranchTally tally;
    SolveStats stats;
};

struct NoChannels : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CheckResult check_liveness(const Network& network, const Dimensioning& dims, Method method,
                           BlockOverride override_mode = BlockOverride::FromModel,
                           const AnalyzeOptions& options = {});

/// Per-branch record of the dimensioning program, kept for reporting and for
/// the boundedness-equivalence checks.
struct BranchReport {
    std::string descriptor;
    enum class Status { Infeasible, Optimal, Unbounded, Inconclusive, Skipped };
    Status lp = Status::Skipped;
    std::optional<Rational> lp_value;
    Status ilp = Status::Skipped;
    std::optional<Rational> ilp_value;
    bool integral_point = false;  // an integral feasible point was certified
};

struct DimensionOutcome {
    enum class Kind { BoundedLive, Unbounded, LiveForAllValid, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Method method = Method::BranchIlp;

    long z_ip = -1;                   // BoundedLive
    std::optional<Rational> z_lp;     // absent when the LP side is unbounded
    bool z_lp_unbounded = false;
    Dimensioning recommended;         // BoundedLive: d_f = z_ip + 1 uniformly
    Dimensioning minimal_valid;       // LiveForAllValid: d_f = initial tokens
    Witness witness;                  // Unbounded: integral point of the branch
    std::string detail;               // branch descriptor / reason / notes

    BranchTally tally;
    SolveStats stats;
    std::vector<BranchReport> branch_reports;
};

/// The buffer-dimensioning analysis: maximize the uniform capacity z over
/// every blocked branch. BoundedLive certifies liveness for every uniform
/// d >= z_ip + 1 (and by monotony for every pointwise-larger dimensioning).
DimensionOutcome dimension(const Network& network, Method method,
                           BlockOverride override_mode = BlockOverride::FromModel,
                           const AnalyzeOptions& options = {});

struct HierarchyReport {
    CheckResult big_m_lp;
    CheckResult branch_lp;
    CheckResult branch_ilp;
    bool inversion = false;     // a stronger method proved Live, a weaker did too?
    std::string violation;      // description when inversion is true
};

/// Runs all three methods and checks the dominance chain:
/// BigMLp Live => BranchLp Live => BranchIlp Live.
HierarchyReport verdict_hierarchy(const Network& network, const Dimensioning& dims,
                                  BlockOverride override_mode = BlockOverride::FromModel,
                                  const AnalyzeOptions& options = {});

}  // namespace dpn

#endif
