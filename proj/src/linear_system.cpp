#include "dpn/linear_system.hpp"

#include <sstream>
#include <stdexcept>

namespace dpn {

int LinearSystem::add_variable(const std::string& id, VarKind kind,
                               std::optional<long> upper_bound) {
    if (var_index(id) >= 0)
        throw std::logic_error("duplicate variable id: " + id);
    variables.push_back(Variable{id, kind, upper_bound});
    return static_cast<int>(variables.size()) - 1;
}

void LinearSystem::add_constraint(LinExpr coeffs, Relation rel, Rational rhs,
                                  std::string tag) {
    constraints.push_back(Constraint{std::move(coeffs), rel, std::move(rhs), std::move(tag)});
}

int LinearSystem::var_index(const std::string& id) const {
    for (int i = 0; i < static_cast<int>(variables.size()); ++i)
        if (variables[i].id == id) return i;
    return -1;
}

int LinearSystem::capacity_z_index() const {
    for (int i = 0; i < static_cast<int>(variables.size()); ++i)
        if (variables[i].kind == VarKind::CapacityZ) return i;
    return -1;
}

Rational LinearSystem::eval(const LinExpr& e, const std::vector<Rational>& point) {
    Rational acc;
    for (const auto& [idx, coef] : e) {
        if (idx < 0 || idx >= static_cast<int>(point.size()))
            throw std::logic_error("eval: point does not cover variable index");
        acc += coef * point[static_cast<size_t>(idx)];
    }
    return acc;
}

bool LinearSystem::satisfied_by(const std::vector<Rational>& point) const {
    if (point.size() != variables.size()) return false;
    for (size_t i = 0; i < variables.size(); ++i) {
        if (point[i] < Rational(0)) return false;
        if (variables[i].upper_bound && point[i] > Rational(*variables[i].upper_bound))
            return false;
    }
    for (const auto& c : constraints) {
        Rational lhs = eval(c.coeffs, point);
        switch (c.rel) {
            case Relation::Le: if (!(lhs <= c.rhs)) return false; break;
            case Relation::Eq: if (!(lhs == c.rhs)) return false; break;
            case Relation::Ge: if (!(lhs >= c.rhs)) return false; break;
        }
    }
    return true;
}

void LinearSystem::check_well_formed() const {
    int n = static_cast<int>(variables.size());
    for (const auto& v : variables) {
        if (v.kind == VarKind::Indicator && (!v.upper_bound || *v.upper_bound != 1))
            throw std::logic_error("indicator variable without upper bound 1: " + v.id);
        if (v.upper_bound && *v.upper_bound < 0)
            throw std::logic_error("negative upper bound on " + v.id);
    }
    for (const auto& c : constraints)
        for (const auto& [idx, coef] : c.coeffs) {
            (void)coef;
            if (idx < 0 || idx >= n)
                throw std::logic_error("constraint '" + c.tag +
                                       "' references undeclared variable");
        }
}

std::string LinearSystem::dump() const {
    std::ostringstream os;
    for (const auto& c : constraints) {
        os << c.tag << ":";
        if (c.coeffs.empty()) os << " 0";
        for (const auto& [idx, coef] : c.coeffs)
            os << " " << coef.str() << "*" << variables[static_cast<size_t>(idx)].id;
        os << " " << relation_str(c.rel) << " " << c.rhs.str() << "\n";
    }
    return os.str();
}

std::string relation_str(Relation r) {
    switch (r) {
        case Relation::Le: return "<=";
        case Relation::Eq: return "=";
        case Relation::Ge: return ">=";
    }
    return "?";
}

}  // namespace dpn
