#ifndef DPN_GOMORY_HPP
#define DPN_GOMORY_HPP

#include <ostream>
#include <variant>
#include <vector>

#include "dpn/linear_system.hpp"
#include "dpn/simplex.hpp"

namespace dpn {

/// Safeguards for the cutting-plane loop. The classical method terminates,
/// though possibly only after a prohibitively long time; exhausting a limit
/// yields Inconclusive rather than nontermination.
struct CutConfig {
    long max_cuts = 10000;
    long max_pivots = 1000000;
};

struct IntOptimal {
    Rational value;
    std::vector<Rational> point;  // integral, one entry per system variable
};

struct IntInfeasible {};

/// Only emitted when the LP relaxation is unbounded AND an integral feasible
/// point exists: with a nonempty integer hull, relaxation unboundedness and
/// integer unboundedness coincide.
struct IntUnbounded {
    std::vector<Rational> witness;  // integral feasible point
    std::vector<Rational> ray;      // the relaxation's improving direction
};

struct IlpInconclusive {
    enum class Reason { CutLimit, IterationLimit };
    Reason reason = Reason::CutLimit;
};

using IlpOutcome = std::variant<IntOptimal, IntInfeasible, IntUnbounded, IlpInconclusive>;

/// Gomory fractional cutting planes with the lexicographic dual simplex over
/// exact rationals. All variables are treated as integer-constrained.
IlpOutcome solve_ilp(const LinearSystem& system, const Objective& objective,
                     const CutConfig& config = {}, std::ostream* cut_log = nullptr,
                     SolverCounters* counters = nullptr);

using IntegerFeasibility =
    std::variant<std::vector<Rational>, IntInfeasible, IlpInconclusive>;

/// Finds an integral point or proves the integer hull empty, by running the
/// cutting-plane loop on a bounded auxiliary objective: minimize the CapacityZ
/// variable when the system has one, the zero objective otherwise.
IntegerFeasibility integer_feasible(const LinearSystem& system,
                                    const CutConfig& config = {},
                                    std::ostream* cut_log = nullptr,
                                    SolverCounters* counters = nullptr);

}  // namespace dpn

#endif
