#include "dpn/encoder.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dpn {

namespace {

void expr_add(LinExpr& e, int var, const Rational& coef) {
    auto [it, inserted] = e.emplace(var, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second.is_zero()) e.erase(it);
    }
}

LinExpr expr_minus(const LinExpr& a, const LinExpr& b) {
    LinExpr out = a;
    for (const auto& [var, coef] : b) expr_add(out, var, -coef);
    return out;
}

std::string mode_tag(Disjunct::Kind kind) {
    switch (kind) {
        case Disjunct::Kind::NotInState: return "notin";
        case Disjunct::Kind::ReadBlocked: return "read";
        case Disjunct::Kind::WriteBlocked: return "write";
    }
    return "?";
}

/// The disjunct inequality as (expr, rhs) with relation <=, given the base
/// system (concrete d_f or symbolic z on the LHS).
std::pair<LinExpr, Rational> disjunct_row(const StateSystem& base, const TaskId& task,
                                          const Disjunct& d) {
    switch (d.kind) {
        case Disjunct::Kind::NotInState:
            return {base.gamma.at(task).at(d.state), Rational(0)};
        case Disjunct::Kind::ReadBlocked:
            return {expr_minus(base.produced.at(d.channel), base.consumed.at(d.channel)),
                    Rational(d.rate - 1)};
        case Disjunct::Kind::WriteBlocked: {
            LinExpr e = expr_minus(base.consumed.at(d.channel), base.produced.at(d.channel));
            if (base.symbolic) {
                expr_add(e, base.z_var, Rational(1));
                return {std::move(e), Rational(d.rate - 1)};
            }
            return {std::move(e), Rational(d.rate - base.dims->at(d.channel) - 1)};
        }
    }
    throw std::logic_error("unreachable");
}

std::string row_key(const LinExpr& e, Relation rel, const Rational& rhs) {
    std::ostringstream os;
    for (const auto& [var, coef] : e) os << var << ":" << coef.str() << ",";
    os << relation_str(rel) << rhs.str();
    return os.str();
}

}  // namespace

std::string Disjunct::describe() const {
    if (kind == Kind::NotInState) return "notin(" + state + ")";
    return mode_tag(kind) + "(" + transition + "," + channel + ")";
}

std::string BranchDescriptor::describe() const {
    std::string out;
    for (const auto& c : chosen) {
        if (!out.empty()) out += " & ";
        out += c;
    }
    return out.empty() ? "(no clauses)" : out;
}

StateSystem build_base_system(const Network& network, const DimSpec& dims) {
    StateSystem out;
    out.symbolic = std::holds_alternative<SymbolicZ>(dims);
    if (!out.symbolic) {
        out.dims = std::get<Dimensioning>(dims);
        require_valid_dimensioning(network, *out.dims);
    }

    // Execution-count variables: initial transition first, then declaration
    // order, tasks sorted by id. The symbolic capacity comes last.
    for (int ti : network.tasks_by_id()) {
        const Task& task = network.tasks[static_cast<size_t>(ti)];
        out.initial_var[task.id] =
            out.system.add_variable("n0(" + task.id + ")", VarKind::TransitionCount);
        for (const auto& tr : task.transitions)
            out.transition_var[task.id][tr.id] = out.system.add_variable(
                "n(" + task.id + "." + tr.id + ")", VarKind::TransitionCount);
    }
    if (out.symbolic) out.z_var = out.system.add_variable("z", VarKind::CapacityZ);

    // gamma_v = sum(incoming) - sum(outgoing); the initial transition counts
    // toward its target, the initial state itself has no row.
    for (int ti : network.tasks_by_id()) {
        const Task& task = network.tasks[static_cast<size_t>(ti)];
        std::vector<StateId> states = task.states;
        std::sort(states.begin(), states.end());
        for (const auto& v : states) {
            LinExpr gamma;
            if (task.initial_transition.target == v)
                expr_add(gamma, out.initial_var[task.id], Rational(1));
            for (const auto& tr : task.transitions) {
                int var = out.transition_var[task.id][tr.id];
                if (tr.target == v) expr_add(gamma, var, Rational(1));
                if (tr.source == v) expr_add(gamma, var, Rational(-1));
            }
            out.gamma[task.id][v] = std::move(gamma);
        }
    }

    // Channel flows; qp includes the initial productions.
    for (const auto& ch : network.channels) {
        LinExpr qp, qc;
        for (const auto& task : network.tasks) {
            if (task.id == ch.producer) {
                auto it = task.initial_transition.produce.find(ch.id);
                if (it != task.initial_transition.produce.end())
                    expr_add(qp, out.initial_var[task.id], Rational(it->second));
                for (const auto& tr : task.transitions) {
                    auto p = tr.produce.find(ch.id);
                    if (p != tr.produce.end())
                        expr_add(qp, out.transition_var[task.id][tr.id], Rational(p->second));
                }
            }
            if (task.id == ch.consumer)
                for (const auto& tr : task.transitions) {
                    auto c = tr.consume.find(ch.id);
                    if (c != tr.consume.end())
                        expr_add(qc, out.transition_var[task.id][tr.id], Rational(c->second));
                }
        }
        out.produced[ch.id] = std::move(qp);
        out.consumed[ch.id] = std::move(qc);
    }

    // Rows, in the paper's order: initialization, conservation (two-sided),
    // unicity, consistency, capacity, plus symbolic validity.
    for (int ti : network.tasks_by_id()) {
        const Task& task = network.tasks[static_cast<size_t>(ti)];
        out.system.add_constraint({{out.initial_var[task.id], Rational(1)}}, Relation::Eq,
                                  Rational(1), "init[" + task.id + "]");
    }
    for (int ti : network.tasks_by_id()) {
        const Task& task = network.tasks[static_cast<size_t>(ti)];
        std::vector<StateId> states = task.states;
        std::sort(states.begin(), states.end());
        LinExpr unicity;
        for (const auto& v : states) {
            const LinExpr& gamma = out.gamma[task.id][v];
            out.system.add_constraint(gamma, Relation::Ge, Rational(0),
                                      "conservation[" + task.id + "." + v + "]:lo");
            out.system.add_constraint(gamma, Relation::Le, Rational(1),
                                      "conservation[" + task.id + "." + v + "]:hi");
            for (const auto& [var, coef] : gamma) expr_add(unicity, var, coef);
        }
        out.system.add_constraint(std::move(unicity), Relation::Eq, Rational(1),
                                  "unicity[" + task.id + "]");
    }
    for (int ci : network.channels_by_id()) {
        const Channel& ch = network.channels[static_cast<size_t>(ci)];
        out.system.add_constraint(expr_minus(out.consumed[ch.id], out.produced[ch.id]),
                                  Relation::Le, Rational(0), "consistency[" + ch.id + "]");
        LinExpr cap = expr_minus(out.produced[ch.id], out.consumed[ch.id]);
        if (out.symbolic) {
            expr_add(cap, out.z_var, Rational(-1));
            out.system.add_constraint(std::move(cap), Relation::Le, Rational(0),
                                      "capacity[" + ch.id + "]");
        } else {
            out.system.add_constraint(std::move(cap), Relation::Le,
                                      Rational(out.dims->at(ch.id)),
                                      "capacity[" + ch.id + "]");
        }
    }
    if (out.symbolic)
        for (int ci : network.channels_by_id()) {
            const Channel& ch = network.channels[static_cast<size_t>(ci)];
            out.system.add_constraint({{out.z_var, Rational(1)}}, Relation::Ge,
                                      Rational(network.initial_tokens(ch.id)),
                                      "validity[" + ch.id + "]");
        }
    return out;
}

BlockClauseSet build_block_clauses(const Network& network, BlockOverride override_mode) {
    BlockClauseSet out;
    for (int ti : network.tasks_by_id()) {
        const Task& task = network.tasks[static_cast<size_t>(ti)];
        bool strong = task.mode == TaskMode::Nondeterministic;
        if (override_mode == BlockOverride::AllStrong) strong = true;
        if (override_mode == BlockOverride::AllWeak) strong = false;
        auto blocks_of = [](const Transition& tr, std::vector<Disjunct>& disjuncts) {
            for (const auto& [f, rate] : tr.consume)
                disjuncts.push_back(
                    Disjunct{Disjunct::Kind::ReadBlocked, "", tr.id, f, rate});
            for (const auto& [f, rate] : tr.produce)
                disjuncts.push_back(
                    Disjunct{Disjunct::Kind::WriteBlocked, "", tr.id, f, rate});
        };
        if (strong) {
            for (const auto& tr : task.transitions) {
                Clause clause{task.id, true, tr.id, {}};
                clause.disjuncts.push_back(
                    Disjunct{Disjunct::Kind::NotInState, tr.source, "", "", 0});
                blocks_of(tr, clause.disjuncts);
                out.clauses.push_back(std::move(clause));
            }
        } else {
            std::vector<StateId> states = task.states;
            std::sort(states.begin(), states.end());
            for (const auto& v : states) {
                Clause clause{task.id, false, v, {}};
                clause.disjuncts.push_back(
                    Disjunct{Disjunct::Kind::NotInState, v, "", "", 0});
                bool has_outgoing = false;
                for (const auto& tr : task.transitions) {
                    if (tr.source != v) continue;
                    has_outgoing = true;
                    blocks_of(tr, clause.disjuncts);
                }
                if (has_outgoing) out.clauses.push_back(std::move(clause));
            }
        }
    }
    return out;
}

EncodedProblem encode_big_m(const StateSystem& base, const BlockClauseSet& clauses) {
    if (base.symbolic)
        throw SymbolicZNotSupported(
            "big-M linearization needs concrete capacities: with d_f = z the "
            "tightest M depends on z");
    EncodedProblem out;
    out.variant = EncodedProblem::Variant::BigM;
    out.big_m = base.system;

    for (const auto& clause : clauses.clauses) {
        if (clause.disjuncts.empty()) {
            out.trivially_infeasible = true;
            out.empty_clause_owner = clause.task + "." + clause.owner;
            continue;
        }
        LinExpr cover;
        for (const auto& d : clause.disjuncts) {
            std::string label = clause.task + "." + clause.owner + "|" + d.describe();
            int y = out.big_m.add_variable("y(" + label + ")", VarKind::Indicator, 1);
            cover[y] = Rational(1);

            Rational big_m_value;
            switch (d.kind) {
                case Disjunct::Kind::NotInState:
                    big_m_value = Rational(1);
                    break;
                case Disjunct::Kind::ReadBlocked:
                    big_m_value = Rational(base.dims->at(d.channel) - d.rate + 1);
                    break;
                case Disjunct::Kind::WriteBlocked:
                    big_m_value = Rational(base.dims->at(d.channel) + 1 - d.rate);
                    break;
            }
            auto [expr, rhs] = disjunct_row(base, clause.task, d);
            // LHS <= rhs + M(1-y), i.e. LHS + M*y <= rhs + M.
            expr_add(expr, y, big_m_value);
            out.big_m.add_constraint(std::move(expr), Relation::Le, rhs + big_m_value,
                                     "clause[" + label + "]");
        }
        out.big_m.add_constraint(std::move(cover), Relation::Ge, Rational(1),
                                 "cover[" + clause.task + "." + clause.owner + "]");
    }
    return out;
}

EncodedProblem enumerate_branches(const StateSystem& base, const BlockClauseSet& clauses) {
    constexpr unsigned long long kBranchCap = 200000;
    EncodedProblem out;
    out.variant = EncodedProblem::Variant::Branches;

    unsigned long long raw = 1;
    for (const auto& clause : clauses.clauses) {
        if (clause.disjuncts.empty()) {
            out.trivially_infeasible = true;
            out.empty_clause_owner = clause.task + "." + clause.owner;
            out.raw_branch_count = 0;
            return out;
        }
        if (raw > kBranchCap / clause.disjuncts.size() + 1)
            throw std::length_error("disjunct expansion exceeds the branch cap");
        raw *= clause.disjuncts.size();
    }
    if (raw > kBranchCap)
        throw std::length_error("disjunct expansion exceeds the branch cap");
    out.raw_branch_count = raw;

    size_t k = clauses.clauses.size();
    std::vector<size_t> choice(k, 0);
    std::set<std::string> seen;
    for (;;) {
        // Materialize this selection; identical row sets collapse.
        std::set<std::string> keys;
        std::vector<std::tuple<LinExpr, Rational, std::string>> rows;
        BranchDescriptor desc;
        for (size_t i = 0; i < k; ++i) {
            const Clause& clause = clauses.clauses[i];
            const Disjunct& d = clause.disjuncts[choice[i]];
            std::string label = clause.task + "." + clause.owner + "|" + d.describe();
            desc.chosen.push_back(label);
            auto [expr, rhs] = disjunct_row(base, clause.task, d);
            std::string key = row_key(expr, Relation::Le, rhs);
            if (keys.insert(key).second)
                rows.emplace_back(std::move(expr), std::move(rhs), std::move(label));
        }
        std::string branch_key;
        for (const auto& key : keys) branch_key += key + ";";
        if (seen.insert(branch_key).second) {
            LinearSystem sys = base.system;
            for (auto& [expr, rhs, label] : rows)
                sys.add_constraint(std::move(expr), Relation::Le, std::move(rhs),
                                   "clause[" + label + "]");
            out.branches.push_back(std::move(sys));
            out.descriptors.push_back(std::move(desc));
        }

        size_t pos = 0;
        while (pos < k && choice[pos] + 1 == clauses.clauses[pos].disjuncts.size())
            choice[pos++] = 0;
        if (pos == k) break;
        ++choice[pos];
    }
    // With zero clauses the loop body ran once: the blocked-state system is
    // the base system itself (a conjunction over nothing is true).
    return out;
}

DimensioningProblem build_dimensioning_branches(const Network& network,
                                                BlockOverride override_mode) {
    DimensioningProblem out;
    out.base = build_base_system(network, SymbolicZ{});
    out.clauses = build_block_clauses(network, override_mode);
    out.branches = enumerate_branches(out.base, out.clauses);
    out.objective.sense = Objective::Sense::Maximize;
    out.objective.coeffs[out.base.z_var] = Rational(1);
    return out;
}

std::vector<Rational> counts_to_point(const StateSystem& base, const TraceCounts& counts) {
    std::vector<Rational> point(base.system.variables.size(), Rational(0));
    for (const auto& [task, n] : counts.initial) {
        auto it = base.initial_var.find(task);
        if (it == base.initial_var.end())
            throw std::invalid_argument("counts mention unknown task " + task);
        point[static_cast<size_t>(it->second)] = Rational(n);
    }
    for (const auto& [task, per_transition] : counts.transitions) {
        auto t = base.transition_var.find(task);
        if (t == base.transition_var.end())
            throw std::invalid_argument("counts mention unknown task " + task);
        for (const auto& [tid, n] : per_transition) {
            auto v = t->second.find(tid);
            if (v == t->second.end())
                throw std::invalid_argument("counts mention unknown transition " + task +
                                            "." + tid);
            point[static_cast<size_t>(v->second)] = Rational(n);
        }
    }
    return point;
}

}  // namespace dpn
