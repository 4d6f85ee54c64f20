#include "dpn/gomory.hpp"

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

enum class LoopStatus { Integral, Infeasible, CutLimit, PivotLimit };

LoopStatus gomory_loop(Tableau& tableau, const CutConfig& config, std::ostream* cut_log) {
    tableau.lex_repair(8 * (tableau.num_structural() + tableau.num_rows()));
    for (;;) {
        if (tableau.basic_solution_integral()) return LoopStatus::Integral;
        bool from_objective = false;
        int var = -1;
        if (!tableau.first_fractional_source(from_objective, var))
            return LoopStatus::Integral;
        if (tableau.cut_count() >= config.max_cuts) return LoopStatus::CutLimit;
        tableau.add_gomory_cut(from_objective, var, cut_log);
        for (;;) {
            if (tableau.pivots() >= config.max_pivots) return LoopStatus::PivotLimit;
            Tableau::DualStep step = tableau.lex_dual_step();
            if (step == Tableau::DualStep::InfeasibleRow) return LoopStatus::Infeasible;
            if (step == Tableau::DualStep::OptimalReached) break;
        }
    }
}

IlpOutcome limit_outcome(LoopStatus status) {
    return IlpInconclusive{status == LoopStatus::CutLimit
                               ? IlpInconclusive::Reason::CutLimit
                               : IlpInconclusive::Reason::IterationLimit};
}

std::vector<Rational> integral_point_or_throw(const LinearSystem& system,
                                              const Tableau& tableau) {
    std::vector<Rational> point = tableau.structural_values();
    for (const auto& x : point)
        if (!x.is_integer())
            throw std::logic_error("cutting-plane loop stopped at a fractional point");
    if (!system.satisfied_by(point))
        throw std::logic_error("cutting-plane point fails substitution check");
    return point;
}

}  // namespace

IlpOutcome solve_ilp(const LinearSystem& system, const Objective& objective,
                     const CutConfig& config, std::ostream* cut_log,
                     SolverCounters* counters) {
    NormalizedSystem ns = normalize(system);
    scale_rows_integral(ns);
    Tableau tableau(ns, maximize_coeffs(objective));
    Tableau::SolveStatus status = tableau.primal_solve();
    struct Tally {
        const Tableau& t;
        SolverCounters* c;
        ~Tally() {
            if (c) {
                c->pivots += t.pivots();
                c->cuts += t.cut_count();
            }
        }
    } tally{tableau, counters};

    if (status == Tableau::SolveStatus::Infeasible) return IntInfeasible{};

    if (status == Tableau::SolveStatus::Unbounded) {
        // Cutting planes cannot certify unboundedness; decide by integer-hull
        // nonemptiness instead (bounded objective equivalence).
        std::vector<Rational> ray = tableau.unbounded_ray();
        IntegerFeasibility feas = integer_feasible(system, config, cut_log, counters);
        if (std::holds_alternative<IntInfeasible>(feas)) return IntInfeasible{};
        if (std::holds_alternative<IlpInconclusive>(feas))
            return std::get<IlpInconclusive>(feas);
        return IntUnbounded{std::get<std::vector<Rational>>(feas), std::move(ray)};
    }

    LoopStatus loop = gomory_loop(tableau, config, cut_log);
    if (loop == LoopStatus::Infeasible) return IntInfeasible{};
    if (loop == LoopStatus::CutLimit || loop == LoopStatus::PivotLimit)
        return limit_outcome(loop);

    std::vector<Rational> point = integral_point_or_throw(system, tableau);
    return IntOptimal{objective_value_at(objective, point), std::move(point)};
}

IntegerFeasibility integer_feasible(const LinearSystem& system, const CutConfig& config,
                                    std::ostream* cut_log, SolverCounters* counters) {
    Objective aux;
    int z = system.capacity_z_index();
    if (z >= 0) {
        aux.sense = Objective::Sense::Minimize;
        aux.coeffs[z] = Rational(1);
    }

    NormalizedSystem ns = normalize(system);
    scale_rows_integral(ns);
    Tableau tableau(ns, maximize_coeffs(aux));
    Tableau::SolveStatus status = tableau.primal_solve();
    struct Tally {
        const Tableau& t;
        SolverCounters* c;
        ~Tally() {
            if (c) {
                c->pivots += t.pivots();
                c->cuts += t.cut_count();
            }
        }
    } tally{tableau, counters};
    if (status == Tableau::SolveStatus::Infeasible) return IntInfeasible{};
    if (status == Tableau::SolveStatus::Unbounded)
        throw std::logic_error("auxiliary feasibility objective cannot be unbounded");

    LoopStatus loop = gomory_loop(tableau, config, cut_log);
    if (loop == LoopStatus::Infeasible) return IntInfeasible{};
    if (loop == LoopStatus::CutLimit || loop == LoopStatus::PivotLimit)
        return std::get<IlpInconclusive>(limit_outcome(loop));
    return integral_point_or_throw(system, tableau);
}

}  // namespace dpn
