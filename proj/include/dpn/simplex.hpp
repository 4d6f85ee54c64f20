#ifndef DPN_SIMPLEX_HPP
#define DPN_SIMPLEX_HPP

#include <variant>
#include <vector>

#include "dpn/linear_system.hpp"
#include "dpn/tableau.hpp"

namespace dpn {

/// Nonnegative multipliers over the normalized (<=-form) rows combining the
/// system into 0 <= negative. Verification recomputes the normalization,
/// so a certificate is meaningful only together with its system.
struct FarkasCertificate {
    std::vector<Rational> row_multipliers;
    std::vector<RowOrigin> origins;
};

struct LpOptimal {
    Rational value;
    std::vector<Rational> point;  // one entry per system variable
};

struct LpUnbounded {
    std::vector<Rational> point;  // feasible
    std::vector<Rational> ray;    // A*ray <= 0, ray >= 0, improving objective
};

struct LpInfeasible {
    FarkasCertificate certificate;
};

using LpOutcome = std::variant<LpOptimal, LpUnbounded, LpInfeasible>;

struct Feasible {
    std::vector<Rational> point;
};

using FeasibilityOutcome = std::variant<Feasible, LpInfeasible>;

/// Two-phase primal simplex with Bland's rule over exact rationals. Every
/// returned point, ray and certificate has been re-verified by substitution;
/// a verification failure is a solver bug and throws std::logic_error.
LpOutcome solve_lp(const LinearSystem& system, const Objective& objective,
                   SolverCounters* counters = nullptr);

/// Phase-1 only.
FeasibilityOutcome check_feasible(const LinearSystem& system,
                                  SolverCounters* counters = nullptr);

/// Exact re-checks, also used by the test oracles.
bool verify_farkas(const LinearSystem& system, const FarkasCertificate& cert);
bool verify_ray(const LinearSystem& system, const Objective& objective,
                const std::vector<Rational>& point, const std::vector<Rational>& ray);

Rational objective_value_at(const Objective& objective, const std::vector<Rational>& point);

}  // namespace dpn

#endif
