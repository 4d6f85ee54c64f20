#ifndef DPN_ENCODER_HPP
#define DPN_ENCODER_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpn/linear_system.hpp"
#include "dpn/model.hpp"

namespace dpn {

/// Marker for the uniform symbolic capacity: every d_f replaced by one
/// variable z moved to the left-hand side.
struct SymbolicZ {};

using DimSpec = std::variant<Dimensioning, SymbolicZ>;

/// The admissible-pseudo-state system: one execution-count variable per
/// transition (initial transitions pinned to 1), conservation/unicity rows
/// per task, consistency/capacity rows per channel. Derived expressions are
/// kept for the blockedness encodings.
struct StateSystem {
    LinearSystem system;
    bool symbolic = false;
    int z_var = -1;                       // CapacityZ index when symbolic
    std::optional<Dimensioning> dims;     // concrete capacities otherwise

    std::map<TaskId, int> initial_var;                          // n for tau^(0)
    std::map<TaskId, std::map<TransitionId, int>> transition_var;
    std::map<TaskId, std::map<StateId, LinExpr>> gamma;         // state occupancy
    std::map<ChannelId, LinExpr> produced;                      // qp_f, includes initial terms
    std::map<ChannelId, LinExpr> consumed;                      // qc_f
};

StateSystem build_base_system(const Network& network, const DimSpec& dims);

struct Disjunct {
    enum class Kind { NotInState, ReadBlocked, WriteBlocked };
    Kind kind = Kind::NotInState;
    StateId state;             // NotInState
    TransitionId transition;   // Read/Write
    ChannelId channel;         // Read/Write
    Quantity rate = 0;         // qc or qp of the transition on that channel
    std::string describe() const;
};

/// One clause per transition (strong mode) or per state with outgoing
/// transitions (weak mode). A weak-mode state with no outgoing transitions
/// contributes no clause: a terminated task is vacuously blocked, which keeps
/// the encoding aligned with the oracle's blockedness test.
struct Clause {
    TaskId task;
    bool strong = true;
    std::string owner;  // transition id (strong) or state id (weak)
    std::vector<Disjunct> disjuncts;
};

struct BlockClauseSet {
    std::vector<Clause> clauses;
};

enum class BlockOverride { FromModel, AllStrong, AllWeak };

BlockClauseSet build_block_clauses(const Network& network, BlockOverride override_mode);

struct BranchDescriptor {
    std::vector<std::string> chosen;  // "task.owner|disjunct" per clause
    std::string describe() const;
};

/// Either a single big-M system with indicators, or the exact disjunctive
/// expansion: one pure system per choice of disjunct per clause (duplicates
/// removed). An empty clause is recorded, not dropped: it makes the whole
/// blocked-state system trivially infeasible.
struct EncodedProblem {
    enum class Variant { BigM, Branches };
    Variant variant = Variant::Branches;
    LinearSystem big_m;
    std::vector<LinearSystem> branches;
    std::vector<BranchDescriptor> descriptors;
    unsigned long long raw_branch_count = 0;  // before deduplication
    bool trivially_infeasible = false;
    std::string empty_clause_owner;
};

struct SymbolicZNotSupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Big-M linearization; concrete dimensionings only (with d_f = z the
/// tightest M depends on z and the relaxation turns bilinear).
EncodedProblem encode_big_m(const StateSystem& base, const BlockClauseSet& clauses);

EncodedProblem enumerate_branches(const StateSystem& base, const BlockClauseSet& clauses);

struct DimensioningProblem {
    StateSystem base;  // symbolic
    BlockClauseSet clauses;
    EncodedProblem branches;
    Objective objective;  // maximize z
};

DimensioningProblem build_dimensioning_branches(const Network& network,
                                                BlockOverride override_mode);

/// Execution counts as a point of the state system (bridge from the oracle).
struct TraceCounts {
    std::map<TaskId, long> initial;  // always 1 on legal traces
    std::map<TaskId, std::map<TransitionId, long>> transitions;
};

std::vector<Rational> counts_to_point(const StateSystem& base, const TraceCounts& counts);

}  // namespace dpn

#endif
