#ifndef DPN_TABLEAU_HPP
#define DPN_TABLEAU_HPP

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpn/linear_system.hpp"

namespace dpn {

/// Where a normalized row came from: an original constraint (direction +1 for
/// the <= reading, -1 for the negated >= reading) or a variable upper bound.
struct RowOrigin {
    enum class Kind { Constraint, Bound } kind = Kind::Constraint;
    int index = 0;      // constraint index or variable index
    int direction = 1;  // +1: as written (<=), -1: negated (>= side)
    std::string describe(const LinearSystem& sys) const;
};

/// `Ax <= b, x >= 0` form of a LinearSystem. Equalities become two rows,
/// >= rows are negated, upper bounds become explicit rows.
struct NormalizedSystem {
    int num_structural = 0;
    std::vector<LinExpr> rows;
    std::vector<Rational> rhs;
    std::vector<RowOrigin> origins;
};

NormalizedSystem normalize(const LinearSystem& system);

/// Multiplies every row (and its rhs) by the lcm of its denominators so all
/// data is integral; solution set unchanged. Required before Gomory cuts so
/// slack variables take integer values at integer points.
void scale_rows_integral(NormalizedSystem& ns);

struct NotDualFeasible : std::logic_error {
    using std::logic_error::logic_error;
};

/// Work counters accumulated across solves, for reporting.
struct SolverCounters {
    long pivots = 0;
    long cuts = 0;
};

/// Dense exact-rational simplex dictionary over the normalized system.
/// Row r reads  x_basic[r] = b[r] + sum_j a[r][j] * x_j  (nonbasic x_j at 0).
/// Primal phases use Bland's rule; the dual method uses the classical
/// lexicographic column ratio test (termination device for cutting planes).
class Tableau {
public:
    enum class VarClass { Structural, Slack, Aux, CutSlack };
    enum class SolveStatus { Optimal, Unbounded, Infeasible };
    enum class DualStep { Pivoted, OptimalReached, InfeasibleRow };

    /// `objective` is a maximize objective over structural variable indices.
    Tableau(const NormalizedSystem& ns, const LinExpr& objective);

    SolveStatus primal_solve();

    /// One lexicographic dual pivot. OptimalReached when already primal
    /// feasible, InfeasibleRow when some row proves emptiness. Throws
    /// NotDualFeasible when reduced costs are not all <= 0.
    DualStep lex_dual_step();

    /// Primal pivots on lexicographically positive zero-reduced-cost columns
    /// until none remains or the budget runs out; keeps optimality. Improves
    /// the odds that the cutting-plane termination measure applies.
    void lex_repair(int max_pivots);
    /// True when every enabled nonbasic column is lexicographically negative.
    bool lex_clean() const;

    /// All enabled variables integral in the current basic solution?
    bool basic_solution_integral() const;
    /// Cut source in lexicographic order: objective row first (when the
    /// objective is integer-valued), then variables in creation order.
    /// Returns false when everything is integral.
    bool first_fractional_source(bool& from_objective, int& var) const;
    /// Appends a Gomory fractional cut derived from the given source; the new
    /// cut-slack row is primal infeasible until lex_dual_step repairs it.
    void add_gomory_cut(bool from_objective, int var, std::ostream* cut_log);

    Rational objective_value() const { return obj_b_; }
    std::vector<Rational> structural_values() const;
    /// Value of every variable (structural, slack, cut slack) in creation
    /// order, prefixed by the objective value: the cutting-plane termination
    /// measure. Disabled variables report 0.
    std::vector<Rational> solution_snapshot() const;

    long pivots() const { return pivots_; }
    int cut_count() const { return cuts_; }

    /// Definition of each cut as recorded at creation: the cut slack equals
    /// sum(terms) - rhs and is nonnegative and integral on every integral
    /// point. Terms reference variables by creation index.
    struct CutDef {
        std::vector<std::pair<int, Rational>> terms;
        Rational rhs;
    };
    const std::vector<CutDef>& cut_defs() const { return cut_defs_; }

    bool unbounded_detected() const { return unbounded_col_ >= 0; }
    /// Improving ray over structural variables (valid after Unbounded).
    std::vector<Rational> unbounded_ray() const;

    /// Farkas multipliers over normalized rows (valid after Infeasible).
    std::vector<Rational> farkas_row_multipliers() const;

    int num_structural() const { return num_structural_; }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int total_vars() const { return static_cast<int>(var_class_.size()); }
    VarClass var_class(int v) const { return var_class_[static_cast<size_t>(v)]; }

private:
    struct Row {
        Rational b;
        std::vector<Rational> a;  // dense over all variables
    };

    int add_var(VarClass cls);
    void pivot(int row, int col);
    void recompute_objective();
    bool bland_primal(bool phase_one);
    // -1,0,+1: sign of the first nonzero of column j's lex vector
    // (objective entry, then derivative of each tracked variable).
    int lex_sign(int col) const;
    // compares col_j / a_rj vs col_k / a_rk lexicographically (both a>0);
    // returns <0, 0, >0.
    int lex_ratio_compare(int row, int j, int k) const;
    Rational col_entry(int tracked_row, int col) const;  // tracked_row: -1 = objective

    int num_structural_ = 0;
    std::vector<VarClass> var_class_;
    std::vector<bool> enabled_;
    std::vector<int> row_of_;   // -1 when nonbasic
    std::vector<Row> rows_;
    std::vector<int> basic_;    // variable of each row

    std::vector<Rational> c_;   // maximize coefficients per variable
    bool objective_integral_ = true;
    Rational obj_b_;
    std::vector<Rational> obj_a_;

    long pivots_ = 0;
    int cuts_ = 0;
    int aux_var_ = -1;
    int unbounded_col_ = -1;
    bool infeasible_ = false;
    std::vector<Rational> farkas_;
    std::vector<CutDef> cut_defs_;
};

}  // namespace dpn

#endif
