#ifndef DPN_LINEAR_SYSTEM_HPP
#define DPN_LINEAR_SYSTEM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpn/rational.hpp"

namespace dpn {

enum class VarKind { TransitionCount, Indicator, CapacityZ, Auxiliary };

struct Variable {
    std::string id;
    VarKind kind = VarKind::Auxiliary;
    std::optional<long> upper_bound;  // lower bound is always 0
};

/// Sparse linear expression: variable index -> coefficient. std::map keeps
/// iteration order deterministic.
using LinExpr = std::map<int, Rational>;

enum class Relation { Le, Eq, Ge };

struct Constraint {
    LinExpr coeffs;
    Relation rel = Relation::Le;
    Rational rhs;
    std::string tag;  // which constraint family produced it
};

struct LinearSystem {
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;

    int add_variable(const std::string& id, VarKind kind,
                     std::optional<long> upper_bound = std::nullopt);
    void add_constraint(LinExpr coeffs, Relation rel, Rational rhs, std::string tag);

    int var_index(const std::string& id) const;  // -1 when absent
    /// Index of the first CapacityZ variable, -1 when none.
    int capacity_z_index() const;

    /// Exact evaluation of an expression at a point (missing entries are 0).
    static Rational eval(const LinExpr& e, const std::vector<Rational>& point);
    /// True when `point` satisfies every constraint and every bound exactly.
    bool satisfied_by(const std::vector<Rational>& point) const;

    /// Audit: no constraint references an undeclared variable, indicators
    /// carry upper bound 1. Throws std::logic_error on violation.
    void check_well_formed() const;

    /// Debug dump, one constraint per line: `<tag>: <coef>*<var> ... <rel> <rhs>`.
    std::string dump() const;
};

struct Objective {
    enum class Sense { Maximize, Minimize };
    Sense sense = Sense::Maximize;
    LinExpr coeffs;
};

std::string relation_str(Relation r);

}  // namespace dpn

#endif
