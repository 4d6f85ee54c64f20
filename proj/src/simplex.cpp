#include "dpn/simplex.hpp"

namespace dpn {

namespace {

LinExpr maximize_coeffs(const Objective& objective) {
    LinExpr out = objective.coeffs;
    if (objective.sense == Objective::Sense::Minimize)
        for (auto& [idx, coef] : out) {
            (void)idx;
            coef = -coef;
        }
    return out;
}

FarkasCertificate extract_certificate(const LinearSystem& system,
                                      const NormalizedSystem& ns, const Tableau& tableau) {
    FarkasCertificate cert;
    cert.row_multipliers = tableau.farkas_row_multipliers();
    cert.origins = ns.origins;
    if (!verify_farkas(system, cert))
        throw std::logic_error("simplex produced an invalid infeasibility certificate");
    return cert;
}

}  // namespace

Rational objective_value_at(const Objective& objective, const std::vector<Rational>& point) {
    return LinearSystem::eval(objective.coeffs, point);
}

LpOutcome solve_lp(const LinearSystem& system, const Objective& objective,
                   SolverCounters* counters) {
    NormalizedSystem ns = normalize(system);
    Tableau tableau(ns, maximize_coeffs(objective));
    Tableau::SolveStatus status = tableau.primal_solve();
    if (counters) counters->pivots += tableau.pivots();

    if (status == Tableau::SolveStatus::Infeasible)
        return LpInfeasible{extract_certificate(system, ns, tableau)};

    std::vector<Rational> point = tableau.structural_values();
    if (!system.satisfied_by(point))
        throw std::logic_error("simplex point fails substitution check");

    if (status == Tableau::SolveStatus::Unbounded) {
        std::vector<Rational> ray = tableau.unbounded_ray();
        if (!verify_ray(system, objective, point, ray))
            throw std::logic_error("simplex produced an invalid unboundedness ray");
        return LpUnbounded{std::move(point), std::move(ray)};
    }

    Rational value = objective_value_at(objective, point);
    return LpOptimal{value, std::move(point)};
}

FeasibilityOutcome check_feasible(const LinearSystem& system, SolverCounters* counters) {
    NormalizedSystem ns = normalize(system);
    Tableau tableau(ns, LinExpr{});
    Tableau::SolveStatus status = tableau.primal_solve();
    if (counters) counters->pivots += tableau.pivots();
    if (status == Tableau::SolveStatus::Infeasible)
        return LpInfeasible{extract_certificate(system, ns, tableau)};

    std::vector<Rational> point = tableau.structural_values();
    if (!system.satisfied_by(point))
        throw std::logic_error("simplex point fails substitution check");
    return Feasible{std::move(point)};
}

bool verify_farkas(const LinearSystem& system, const FarkasCertificate& cert) {
    NormalizedSystem ns = normalize(system);
    if (ns.rows.size() != cert.row_multipliers.size()) return false;

    // y >= 0, y^T A >= 0 componentwise (the slack is covered by x >= 0),
    // y^T b < 0: a nonnegative combination reading 0 <= negative.
    std::vector<Rational> combined(static_cast<size_t>(ns.num_structural), Rational(0));
    Rational rhs;
    for (size_t r = 0; r < ns.rows.size(); ++r) {
        const Rational& y = cert.row_multipliers[r];
        if (y < Rational(0)) return false;
        if (y.is_zero()) continue;
        for (const auto& [idx, coef] : ns.rows[r])
            combined[static_cast<size_t>(idx)] += y * coef;
        rhs += y * ns.rhs[r];
    }
    for (const auto& c : combined)
        if (c < Rational(0)) return false;
    return rhs < Rational(0);
}

bool verify_ray(const LinearSystem& system, const Objective& objective,
                const std::vector<Rational>& point, const std::vector<Rational>& ray) {
    if (!system.satisfied_by(point)) return false;
    if (ray.size() != system.variables.size()) return false;
    bool nonzero = false;
    for (size_t i = 0; i < ray.size(); ++i) {
        if (ray[i] < Rational(0)) return false;
        if (!ray[i].is_zero()) nonzero = true;
        // A bounded variable admits no increase along a feasible ray.
        if (system.variables[i].upper_bound && ray[i] > Rational(0)) return false;
    }
    if (!nonzero) return false;
    for (const auto& c : system.constraints) {
        Rational drift = LinearSystem::eval(c.coeffs, ray);
        switch (c.rel) {
            case Relation::Le: if (drift > Rational(0)) return false; break;
            case Relation::Eq: if (!drift.is_zero()) return false; break;
            case Relation::Ge: if (drift < Rational(0)) return false; break;
        }
    }
    Rational gain = LinearSystem::eval(objective.coeffs, ray);
    return objective.sense == Objective::Sense::Maximize ? gain > Rational(0)
                                                         : gain < Rational(0);
}

}  // namespace dpn
