#include "dpn/tableau.hpp"

#include <algorithm>

namespace dpn {

std::string RowOrigin::describe(const LinearSystem& sys) const {
    if (kind == Kind::Bound)
        return "bound(" + sys.variables[static_cast<size_t>(index)].id + ")";
    const std::string& tag = sys.constraints[static_cast<size_t>(index)].tag;
    return direction > 0 ? tag : tag + "(>=side)";
}

NormalizedSystem normalize(const LinearSystem& system) {
    system.check_well_formed();
    NormalizedSystem ns;
    ns.num_structural = static_cast<int>(system.variables.size());
    auto push = [&ns](const LinExpr& e, const Rational& rhs, RowOrigin origin, bool negate) {
        LinExpr row;
        for (const auto& [idx, coef] : e) {
            Rational c = negate ? -coef : coef;
            if (!c.is_zero()) row[idx] = c;
        }
        ns.rows.push_back(std::move(row));
        ns.rhs.push_back(negate ? -rhs : rhs);
        ns.origins.push_back(origin);
    };
    for (int i = 0; i < static_cast<int>(system.constraints.size()); ++i) {
        const Constraint& c = system.constraints[static_cast<size_t>(i)];
        if (c.coeffs.empty() || std::all_of(c.coeffs.begin(), c.coeffs.end(),
                                            [](const auto& kv) { return kv.second.is_zero(); })) {
            // Empty rows are presolved away; an unsatisfiable empty row keeps
            // a marker row 0 <= rhs so infeasibility is still detected.
            bool sat = (c.rel == Relation::Le && Rational(0) <= c.rhs) ||
                       (c.rel == Relation::Ge && Rational(0) >= c.rhs) ||
                       (c.rel == Relation::Eq && c.rhs.is_zero());
            if (sat) continue;
        }
        if (c.rel == Relation::Le || c.rel == Relation::Eq)
            push(c.coeffs, c.rhs, RowOrigin{RowOrigin::Kind::Constraint, i, +1}, false);
        if (c.rel == Relation::Ge || c.rel == Relation::Eq)
            push(c.coeffs, c.rhs, RowOrigin{RowOrigin::Kind::Constraint, i, -1}, true);
    }
    for (int v = 0; v < ns.num_structural; ++v) {
        const Variable& var = system.variables[static_cast<size_t>(v)];
        if (var.upper_bound) {
            LinExpr e;
            e[v] = Rational(1);
            push(e, Rational(*var.upper_bound), RowOrigin{RowOrigin::Kind::Bound, v, +1},
                 false);
        }
    }
    return ns;
}

void scale_rows_integral(NormalizedSystem& ns) {
    for (size_t r = 0; r < ns.rows.size(); ++r) {
        mpz_class l = ns.rhs[r].denominator();
        for (const auto& [idx, coef] : ns.rows[r]) {
            (void)idx;
            mpz_class d = coef.denominator();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
            l = l / g * d;
        }
        if (l == 1) continue;
        Rational scale{l};
        for (auto& [idx, coef] : ns.rows[r]) {
            (void)idx;
            coef *= scale;
        }
        ns.rhs[r] *= scale;
    }
}

Tableau::Tableau(const NormalizedSystem& ns, const LinExpr& objective)
    : num_structural_(ns.num_structural) {
    int m = static_cast<int>(ns.rows.size());
    int total = num_structural_ + m;
    var_class_.assign(static_cast<size_t>(num_structural_), VarClass::Structural);
    var_class_.resize(static_cast<size_t>(total), VarClass::Slack);
    enabled_.assign(static_cast<size_t>(total), true);
    row_of_.assign(static_cast<size_t>(total), -1);
    c_.assign(static_cast<size_t>(total), Rational(0));
    for (const auto& [idx, coef] : objective) {
        c_[static_cast<size_t>(idx)] = coef;
        if (!coef.is_integer()) objective_integral_ = false;
    }

    rows_.resize(static_cast<size_t>(m));
    basic_.resize(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        Row& row = rows_[static_cast<size_t>(r)];
        row.b = ns.rhs[static_cast<size_t>(r)];
        row.a.assign(static_cast<size_t>(total), Rational(0));
        for (const auto& [idx, coef] : ns.rows[static_cast<size_t>(r)])
            row.a[static_cast<size_t>(idx)] = -coef;
        int slack = num_structural_ + r;
        basic_[static_cast<size_t>(r)] = slack;
        row_of_[static_cast<size_t>(slack)] = r;
    }
    obj_a_.assign(static_cast<size_t>(total), Rational(0));
    recompute_objective();
}

int Tableau::add_var(VarClass cls) {
    int v = static_cast<int>(var_class_.size());
    var_class_.push_back(cls);
    enabled_.push_back(true);
    row_of_.push_back(-1);
    c_.push_back(Rational(0));
    obj_a_.push_back(Rational(0));
    for (auto& row : rows_) row.a.push_back(Rational(0));
    return v;
}

void Tableau::pivot(int r, int s) {
    Row& prow = rows_[static_cast<size_t>(r)];
    Rational p = prow.a[static_cast<size_t>(s)];
    if (p.is_zero()) throw std::logic_error("pivot on zero coefficient");
    int leaving = basic_[static_cast<size_t>(r)];
    int total = static_cast<int>(var_class_.size());

    // Re-solve row r for x_s.
    Rational inv = Rational(1) / p;
    Row solved;
    solved.b = -prow.b * inv;
    solved.a.assign(static_cast<size_t>(total), Rational(0));
    for (int j = 0; j < total; ++j) {
        if (j == s || j == leaving) continue;
        const Rational& aj = prow.a[static_cast<size_t>(j)];
        if (!aj.is_zero()) solved.a[static_cast<size_t>(j)] = -aj * inv;
    }
    solved.a[static_cast<size_t>(leaving)] = inv;
    rows_[static_cast<size_t>(r)] = solved;

    std::vector<int> solved_nonzero;
    solved_nonzero.reserve(static_cast<size_t>(total));
    for (int j = 0; j < total; ++j)
        if (!solved.a[static_cast<size_t>(j)].is_zero()) solved_nonzero.push_back(j);

    auto substitute = [&](Rational& b, std::vector<Rational>& a) {
        Rational t = a[static_cast<size_t>(s)];
        if (t.is_zero()) return;
        a[static_cast<size_t>(s)] = Rational(0);
        b += t * solved.b;
        for (int j : solved_nonzero) a[static_cast<size_t>(j)] += t * solved.a[static_cast<size_t>(j)];
    };
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i)
        if (i != r) substitute(rows_[static_cast<size_t>(i)].b, rows_[static_cast<size_t>(i)].a);
    substitute(obj_b_, obj_a_);

    basic_[static_cast<size_t>(r)] = s;
    row_of_[static_cast<size_t>(s)] = r;
    row_of_[static_cast<size_t>(leaving)] = -1;
    ++pivots_;
}

void Tableau::recompute_objective() {
    int total = static_cast<int>(var_class_.size());
    obj_b_ = Rational(0);
    for (int j = 0; j < total; ++j) obj_a_[static_cast<size_t>(j)] = Rational(0);
    for (int j = 0; j < total; ++j)
        if (row_of_[static_cast<size_t>(j)] < 0 && enabled_[static_cast<size_t>(j)])
            obj_a_[static_cast<size_t>(j)] = c_[static_cast<size_t>(j)];
    for (size_t r = 0; r < rows_.size(); ++r) {
        const Rational& cb = c_[static_cast<size_t>(basic_[r])];
        if (cb.is_zero()) continue;
        obj_b_ += cb * rows_[r].b;
        for (int j = 0; j < total; ++j) {
            const Rational& aj = rows_[r].a[static_cast<size_t>(j)];
            if (!aj.is_zero()) obj_a_[static_cast<size_t>(j)] += cb * aj;
        }
    }
}

bool Tableau::bland_primal(bool phase_one) {
    int total = static_cast<int>(var_class_.size());
    for (;;) {
        int entering = -1;
        for (int j = 0; j < total; ++j) {
            if (!enabled_[static_cast<size_t>(j)] || row_of_[static_cast<size_t>(j)] >= 0)
                continue;
            if (obj_a_[static_cast<size_t>(j)] > Rational(0)) { entering = j; break; }
        }
        if (entering < 0) return true;  // optimal

        int leave_row = -1;
        Rational best_ratio;
        for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
            const Rational& arj = rows_[static_cast<size_t>(r)].a[static_cast<size_t>(entering)];
            if (arj >= Rational(0)) continue;
            Rational ratio = rows_[static_cast<size_t>(r)].b / -arj;
            if (leave_row < 0 || ratio < best_ratio ||
                (ratio == best_ratio &&
                 basic_[static_cast<size_t>(r)] < basic_[static_cast<size_t>(leave_row)])) {
                leave_row = r;
                best_ratio = ratio;
            }
        }
        if (leave_row < 0) {
            if (phase_one)
                throw std::logic_error("phase-1 objective cannot be unbounded");
            unbounded_col_ = entering;
            return false;
        }
        pivot(leave_row, entering);
    }
}

Tableau::SolveStatus Tableau::primal_solve() {
    bool need_phase1 = false;
    for (const auto& row : rows_)
        if (row.b < Rational(0)) { need_phase1 = true; break; }

    if (need_phase1) {
        aux_var_ = add_var(VarClass::Aux);
        for (auto& row : rows_) row.a[static_cast<size_t>(aux_var_)] = Rational(1);
        std::vector<Rational> saved_c = c_;
        for (auto& cj : c_) cj = Rational(0);
        c_[static_cast<size_t>(aux_var_)] = Rational(-1);
        recompute_objective();

        int worst = 0;
        for (int r = 1; r < static_cast<int>(rows_.size()); ++r)
            if (rows_[static_cast<size_t>(r)].b < rows_[static_cast<size_t>(worst)].b)
                worst = r;
        pivot(worst, aux_var_);
        bland_primal(/*phase_one=*/true);

        if (obj_b_ < Rational(0)) {
            // max(-aux) < 0: genuinely infeasible. Farkas multipliers are the
            // negated reduced costs of the slack columns.
            infeasible_ = true;
            farkas_.assign(rows_.size(), Rational(0));
            for (int r0 = 0; r0 < static_cast<int>(farkas_.size()); ++r0) {
                int slack = num_structural_ + r0;
                if (row_of_[static_cast<size_t>(slack)] < 0)
                    farkas_[static_cast<size_t>(r0)] = -obj_a_[static_cast<size_t>(slack)];
            }
            c_ = saved_c;
            return SolveStatus::Infeasible;
        }
        if (row_of_[static_cast<size_t>(aux_var_)] >= 0) {
            // Degenerate: aux basic at value 0; pivot it out on any usable
            // column, or drop its all-zero row.
            int r = row_of_[static_cast<size_t>(aux_var_)];
            int col = -1;
            for (int j = 0; j < static_cast<int>(var_class_.size()); ++j) {
                if (j == aux_var_ || !enabled_[static_cast<size_t>(j)] ||
                    row_of_[static_cast<size_t>(j)] >= 0)
                    continue;
                if (!rows_[static_cast<size_t>(r)].a[static_cast<size_t>(j)].is_zero()) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                pivot(r, col);
            } else {
                rows_.erase(rows_.begin() + r);
                basic_.erase(basic_.begin() + r);
                for (int v = 0; v < static_cast<int>(row_of_.size()); ++v)
                    if (row_of_[static_cast<size_t>(v)] > r) --row_of_[static_cast<size_t>(v)];
                row_of_[static_cast<size_t>(aux_var_)] = -1;
            }
        }
        // Fix aux at 0 forever: clear its column, never let it re-enter.
        enabled_[static_cast<size_t>(aux_var_)] = false;
        for (auto& row : rows_) row.a[static_cast<size_t>(aux_var_)] = Rational(0);
        c_ = saved_c;
        recompute_objective();
    }

    if (!bland_primal(/*phase_one=*/false)) return SolveStatus::Unbounded;
    return SolveStatus::Optimal;
}

int Tableau::lex_sign(int col) const {
    const Rational& first = obj_a_[static_cast<size_t>(col)];
    if (!first.is_zero()) return first.sign();
    for (int v = 0; v < static_cast<int>(var_class_.size()); ++v) {
        Rational e = col_entry(v, col);
        if (!e.is_zero()) return e.sign();
    }
    return 0;
}

Rational Tableau::col_entry(int tracked_row, int col) const {
    if (tracked_row < 0) return obj_a_[static_cast<size_t>(col)];
    if (tracked_row == col) return Rational(1);
    int r = row_of_[static_cast<size_t>(tracked_row)];
    if (r < 0) return Rational(0);
    return rows_[static_cast<size_t>(r)].a[static_cast<size_t>(col)];
}

int Tableau::lex_ratio_compare(int row, int j, int k) const {
    const Rational& aj = rows_[static_cast<size_t>(row)].a[static_cast<size_t>(j)];
    const Rational& ak = rows_[static_cast<size_t>(row)].a[static_cast<size_t>(k)];
    for (int t = -1; t < static_cast<int>(var_class_.size()); ++t) {
        Rational d = col_entry(t, j) * ak - col_entry(t, k) * aj;
        if (!d.is_zero()) return d.sign();
    }
    return 0;
}

Tableau::DualStep Tableau::lex_dual_step() {
    int total = static_cast<int>(var_class_.size());
    for (int j = 0; j < total; ++j)
        if (enabled_[static_cast<size_t>(j)] && row_of_[static_cast<size_t>(j)] < 0 &&
            obj_a_[static_cast<size_t>(j)] > Rational(0))
            throw NotDualFeasible("tableau is not dual feasible");

    int r = -1;
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i)
        if (rows_[static_cast<size_t>(i)].b < Rational(0)) { r = i; break; }
    if (r < 0) return DualStep::OptimalReached;

    // Classical lexicographic column ratio test: the first component is the
    // textbook dual ratio test (keeps reduced costs <= 0), deeper components
    // break ties so the termination measure keeps decreasing.
    int best = -1;
    for (int j = 0; j < total; ++j) {
        if (!enabled_[static_cast<size_t>(j)] || row_of_[static_cast<size_t>(j)] >= 0)
            continue;
        if (!(rows_[static_cast<size_t>(r)].a[static_cast<size_t>(j)] > Rational(0)))
            continue;
        if (best < 0 || lex_ratio_compare(r, j, best) > 0) best = j;
    }
    if (best < 0) {
        infeasible_ = true;
        return DualStep::InfeasibleRow;
    }
    pivot(r, best);
    return DualStep::Pivoted;
}

void Tableau::lex_repair(int max_pivots) {
    int total = static_cast<int>(var_class_.size());
    for (int budget = max_pivots; budget > 0; --budget) {
        int entering = -1;
        for (int j = 0; j < total; ++j) {
            if (!enabled_[static_cast<size_t>(j)] || row_of_[static_cast<size_t>(j)] >= 0)
                continue;
            if (lex_sign(j) <= 0) continue;
            // Only repairable columns: some row must block the increase.
            bool blocked = false;
            for (const auto& row : rows_)
                if (row.a[static_cast<size_t>(j)] < Rational(0)) { blocked = true; break; }
            if (blocked) { entering = j; break; }
        }
        if (entering < 0) return;

        int leave_row = -1;
        Rational best_ratio;
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
            const Rational& aij = rows_[static_cast<size_t>(i)].a[static_cast<size_t>(entering)];
            if (aij >= Rational(0)) continue;
            Rational ratio = rows_[static_cast<size_t>(i)].b / -aij;
            if (leave_row < 0 || ratio < best_ratio ||
                (ratio == best_ratio &&
                 basic_[static_cast<size_t>(i)] < basic_[static_cast<size_t>(leave_row)])) {
                leave_row = i;
                best_ratio = ratio;
            }
        }
        pivot(leave_row, entering);
    }
}

bool Tableau::lex_clean() const {
    for (int j = 0; j < static_cast<int>(var_class_.size()); ++j)
        if (enabled_[static_cast<size_t>(j)] && row_of_[static_cast<size_t>(j)] < 0 &&
            lex_sign(j) >= 0)
            return false;
    return true;
}

bool Tableau::basic_solution_integral() const {
    for (size_t r = 0; r < rows_.size(); ++r)
        if (enabled_[static_cast<size_t>(basic_[r])] && !rows_[r].b.is_integer())
            return false;
    return true;
}

bool Tableau::first_fractional_source(bool& from_objective, int& var) const {
    if (objective_integral_ && !obj_b_.is_integer()) {
        from_objective = true;
        var = -1;
        return true;
    }
    for (int v = 0; v < static_cast<int>(var_class_.size()); ++v) {
        if (!enabled_[static_cast<size_t>(v)]) continue;
        int r = row_of_[static_cast<size_t>(v)];
        if (r < 0) continue;
        if (!rows_[static_cast<size_t>(r)].b.is_integer()) {
            from_objective = false;
            var = v;
            return true;
        }
    }
    return false;
}

void Tableau::add_gomory_cut(bool from_objective, int var, std::ostream* cut_log) {
    const Rational* src_b;
    const std::vector<Rational>* src_a;
    if (from_objective) {
        src_b = &obj_b_;
        src_a = &obj_a_;
    } else {
        int r = row_of_[static_cast<size_t>(var)];
        if (r < 0) throw std::logic_error("cut source variable is nonbasic");
        src_b = &rows_[static_cast<size_t>(r)].b;
        src_a = &rows_[static_cast<size_t>(r)].a;
    }
    Rational f0 = src_b->frac();
    if (f0.is_zero()) throw std::logic_error("cut source row has integral value");

    int s = add_var(VarClass::CutSlack);
    Row cut;
    cut.b = -f0;
    cut.a.assign(var_class_.size(), Rational(0));
    CutDef def;
    def.rhs = f0;
    for (int j = 0; j + 1 < static_cast<int>(var_class_.size()); ++j) {
        if (!enabled_[static_cast<size_t>(j)] || row_of_[static_cast<size_t>(j)] >= 0)
            continue;
        Rational fj = (-(*src_a)[static_cast<size_t>(j)]).frac();
        if (!fj.is_zero()) {
            cut.a[static_cast<size_t>(j)] = fj;
            def.terms.emplace_back(j, fj);
        }
    }
    cut_defs_.push_back(std::move(def));
    if (cut_log) {
        *cut_log << "cut " << (cuts_ + 1) << " source="
                 << (from_objective ? std::string("objective") : "v" + std::to_string(var))
                 << " :";
        for (int j = 0; j < static_cast<int>(cut.a.size()); ++j)
            if (!cut.a[static_cast<size_t>(j)].is_zero())
                *cut_log << " " << cut.a[static_cast<size_t>(j)].str() << "*v" << j;
        *cut_log << " >= " << f0.str() << "\n";
    }
    rows_.push_back(std::move(cut));
    basic_.push_back(s);
    row_of_[static_cast<size_t>(s)] = static_cast<int>(rows_.size()) - 1;
    ++cuts_;
}

std::vector<Rational> Tableau::structural_values() const {
    std::vector<Rational> out(static_cast<size_t>(num_structural_), Rational(0));
    for (int v = 0; v < num_structural_; ++v) {
        int r = row_of_[static_cast<size_t>(v)];
        if (r >= 0) out[static_cast<size_t>(v)] = rows_[static_cast<size_t>(r)].b;
    }
    return out;
}

std::vector<Rational> Tableau::solution_snapshot() const {
    std::vector<Rational> out;
    out.push_back(obj_b_);
    for (int v = 0; v < static_cast<int>(var_class_.size()); ++v) {
        int r = row_of_[static_cast<size_t>(v)];
        out.push_back(r >= 0 && enabled_[static_cast<size_t>(v)]
                          ? rows_[static_cast<size_t>(r)].b
                          : Rational(0));
    }
    return out;
}

std::vector<Rational> Tableau::unbounded_ray() const {
    if (unbounded_col_ < 0) throw std::logic_error("no unbounded direction recorded");
    std::vector<Rational> ray(static_cast<size_t>(num_structural_), Rational(0));
    for (int v = 0; v < num_structural_; ++v)
        ray[static_cast<size_t>(v)] = col_entry(v, unbounded_col_);
    return ray;
}

std::vector<Rational> Tableau::farkas_row_multipliers() const {
    if (!infeasible_ || farkas_.empty())
        throw std::logic_error("no infeasibility certificate recorded");
    return farkas_;
}

}  // namespace dpn
