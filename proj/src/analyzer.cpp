#include "dpn/analyzer.hpp"

#include <chrono>
#include <future>

namespace dpn {

namespace {

using Clock = std::chrono::steady_clock;

void require_valid_network(const Network& network) {
    ValidationReport report = validate(network);
    if (!report.ok())
        throw std::invalid_argument("invalid network: " + report.violations.front().entity +
                                    ": " + report.violations.front().message);
}

Witness witness_from_point(const LinearSystem& system, const std::vector<Rational>& point,
                           std::string branch) {
    Witness w;
    w.branch = std::move(branch);
    for (size_t i = 0; i < system.variables.size(); ++i)
        w.values[system.variables[i].id] = point[i];
    return w;
}

/// Runs fn(i) for i in [0, count), possibly across threads. Each call writes
/// only to its own result slot; aggregation stays deterministic because it
/// reads slots in index order afterwards.
template <typename Fn>
void for_each_index(int parallelism, size_t count, Fn&& fn) {
    if (parallelism <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    int workers = std::min<int>(parallelism, static_cast<int>(count));
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (size_t i = static_cast<size_t>(w); i < count;
                 i += static_cast<size_t>(workers))
                fn(i);
        }));
    for (auto& f : futures) f.get();
}

struct Deadline {
    Clock::time_point start = Clock::now();
    long limit_ms = 0;
    bool expired() const {
        if (limit_ms <= 0) return false;
        return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
                   .count() >= limit_ms;
    }
};

}  // namespace

std::string method_str(Method m) {
    switch (m) {
        case Method::BigMLp: return "big-m-lp";
        case Method::BranchLp: return "branch-lp";
        case Method::BranchIlp: return "branch-ilp";
    }
    return "?";
}

CheckResult check_liveness(const Network& network, const Dimensioning& dims, Method method,
                           BlockOverride override_mode, const AnalyzeOptions& options) {
    require_valid_network(network);
    require_valid_dimensioning(network, dims);

    CheckResult result;
    result.verdict.method = method;
    StateSystem base = build_base_system(network, dims);
    BlockClauseSet clauses = build_block_clauses(network, override_mode);

    if (method == Method::BigMLp) {
        EncodedProblem problem = encode_big_m(base, clauses);
        result.tally.total = 1;
        if (problem.trivially_infeasible) {
            result.tally.infeasible = 1;
            result.verdict.kind = Verdict::Kind::Live;
            return result;
        }
        FeasibilityOutcome outcome = check_feasible(problem.big_m, &result.stats);
        if (std::holds_alternative<LpInfeasible>(outcome)) {
            result.tally.infeasible = 1;
            result.verdict.kind = Verdict::Kind::Live;
        } else {
            result.tally.feasible = 1;
            result.verdict.kind = Verdict::Kind::Unknown;
            result.verdict.witness = witness_from_point(
                problem.big_m, std::get<Feasible>(outcome).point, "big-m relaxation");
        }
        return result;
    }

    EncodedProblem problem = enumerate_branches(base, clauses);
    if (problem.trivially_infeasible) {
        result.verdict.kind = Verdict::Kind::Live;
        result.tally.total = 0;
        return result;
    }

    size_t count = problem.branches.size();
    result.tally.total = static_cast<long>(count);

    struct Slot {
        int status = -1;  // 0 infeasible, 1 feasible, 2 inconclusive
        std::vector<Rational> point;
        SolverCounters counters;
    };
    std::vector<Slot> slots(count);
    Deadline deadline{Clock::now(), options.deadline_ms};

    for_each_index(options.parallelism, count, [&](size_t i) {
        Slot& slot = slots[i];
        if (deadline.expired()) {
            slot.status = 2;
            return;
        }
        if (method == Method::BranchLp) {
            FeasibilityOutcome outcome = check_feasible(problem.branches[i], &slot.counters);
            if (auto* feasible = std::get_if<Feasible>(&outcome)) {
                slot.status = 1;
                slot.point = feasible->point;
            } else {
                slot.status = 0;
            }
        } else {
            IntegerFeasibility outcome =
                integer_feasible(problem.branches[i], options.cut_config, nullptr,
                                 &slot.counters);
            if (auto* point = std::get_if<std::vector<Rational>>(&outcome)) {
                slot.status = 1;
                slot.point = *point;
            } else if (std::holds_alternative<IntInfeasible>(outcome)) {
                slot.status = 0;
            } else {
                slot.status = 2;
            }
        }
    });

    int first_witness = -1;
    for (size_t i = 0; i < count; ++i) {
        result.stats.cuts += slots[i].counters.cuts;
        result.stats.pivots += slots[i].counters.pivots;
        switch (slots[i].status) {
            case 0: ++result.tally.infeasible; break;
            case 1:
                ++result.tally.feasible;
                if (first_witness < 0) first_witness = static_cast<int>(i);
                break;
            default: ++result.tally.inconclusive; break;
        }
    }

    if (first_witness >= 0) {
        result.verdict.kind = Verdict::Kind::Unknown;
        result.verdict.witness = witness_from_point(
            problem.branches[static_cast<size_t>(first_witness)],
            slots[static_cast<size_t>(first_witness)].point,
            problem.descriptors[static_cast<size_t>(first_witness)].describe());
    } else if (result.tally.inconclusive > 0) {
        result.verdict.kind = Verdict::Kind::Inconclusive;
        result.verdict.reason = deadline.expired() ? "deadline exhausted"
                                                   : "solver safeguards exhausted";
    } else {
        result.verdict.kind = Verdict::Kind::Live;
    }
    return result;
}

DimensionOutcome dimension(const Network& network, Method method,
                           BlockOverride override_mode, const AnalyzeOptions& options) {
    require_valid_network(network);
    if (network.channels.empty())
        throw NoChannels("dimensioning needs at least one channel");
    if (method == Method::BigMLp)
        throw SymbolicZNotSupported("dimensioning runs on branch methods only");

    DimensionOutcome outcome;
    outcome.method = method;
    for (const auto& ch : network.channels)
        outcome.minimal_valid.capacities[ch.id] = network.initial_tokens(ch.id);

    DimensioningProblem problem = build_dimensioning_branches(network, override_mode);
    if (problem.branches.trivially_infeasible) {
        outcome.kind = DimensionOutcome::Kind::LiveForAllValid;
        outcome.detail = "a blockedness clause is empty: no pseudo-state can be blocked";
        return outcome;
    }

    size_t count = problem.branches.branches.size();
    outcome.tally.total = static_cast<long>(count);
    outcome.branch_reports.resize(count);
    Deadline deadline{Clock::now(), options.deadline_ms};

    std::vector<SolverCounters> counters(count);
    for_each_index(options.parallelism, count, [&](size_t i) {
        BranchReport& report = outcome.branch_reports[i];
        report.descriptor = problem.branches.descriptors[i].describe();
        if (deadline.expired()) {
            report.lp = BranchReport::Status::Inconclusive;
            report.ilp = BranchReport::Status::Inconclusive;
            return;
        }
        LpOutcome lp = solve_lp(problem.branches.branches[i], problem.objective,
                                &counters[i]);
        if (auto* opt = std::get_if<LpOptimal>(&lp)) {
            report.lp = BranchReport::Status::Optimal;
            report.lp_value = opt->value;
        } else if (std::holds_alternative<LpUnbounded>(lp)) {
            report.lp = BranchReport::Status::Unbounded;
        } else {
            report.lp = BranchReport::Status::Infeasible;
        }

        if (method != Method::BranchIlp) return;
        IlpOutcome ilp = solve_ilp(problem.branches.branches[i], problem.objective,
                                   options.cut_config, nullptr, &counters[i]);
        if (auto* opt = std::get_if<IntOptimal>(&ilp)) {
            report.ilp = BranchReport::Status::Optimal;
            report.ilp_value = opt->value;
            report.integral_point = true;
        } else if (std::holds_alternative<IntUnbounded>(ilp)) {
            report.ilp = BranchReport::Status::Unbounded;
            report.integral_point = true;
        } else if (std::holds_alternative<IntInfeasible>(ilp)) {
            report.ilp = BranchReport::Status::Infeasible;
        } else {
            report.ilp = BranchReport::Status::Inconclusive;
        }
    });

    for (const auto& c : counters) {
        outcome.stats.pivots += c.pivots;
        outcome.stats.cuts += c.cuts;
    }

    // z_lp aggregates the relaxation across branches regardless of method.
    for (const auto& report : outcome.branch_reports) {
        switch (report.lp) {
            case BranchReport::Status::Unbounded:
                outcome.z_lp_unbounded = true;
                break;
            case BranchReport::Status::Optimal:
                if (!outcome.z_lp || *report.lp_value > *outcome.z_lp)
                    outcome.z_lp = report.lp_value;
                break;
            default: break;
        }
    }
    if (outcome.z_lp_unbounded) outcome.z_lp.reset();

    auto aggregate = [&](auto status_of, auto value_of) {
        bool any_unbounded = false, any_inconclusive = false, any_optimal = false;
        std::optional<Rational> best;
        int witness_branch = -1;
        for (size_t i = 0; i < count; ++i) {
            switch (status_of(outcome.branch_reports[i])) {
                case BranchReport::Status::Unbounded:
                    any_unbounded = true;
                    if (witness_branch < 0) witness_branch = static_cast<int>(i);
                    ++outcome.tally.unbounded;
                    break;
                case BranchReport::Status::Optimal: {
                    any_optimal = true;
                    ++outcome.tally.feasible;
                    auto v = value_of(outcome.branch_reports[i]);
                    if (!best || *v > *best) best = v;
                    break;
                }
                case BranchReport::Status::Infeasible:
                    ++outcome.tally.infeasible;
                    break;
                default:
                    any_inconclusive = true;
                    ++outcome.tally.inconclusive;
                    break;
            }
        }
        struct Agg {
            bool any_unbounded, any_inconclusive, any_optimal;
            std::optional<Rational> best;
            int witness_branch;
        };
        return Agg{any_unbounded, any_inconclusive, any_optimal, best, witness_branch};
    };

    if (method == Method::BranchLp) {
        auto agg = aggregate([](const BranchReport& r) { return r.lp; },
                             [](const BranchReport& r) { return r.lp_value; });
        if (agg.any_unbounded) {
            outcome.kind = DimensionOutcome::Kind::Unbounded;
            outcome.detail =
                outcome.branch_reports[static_cast<size_t>(agg.witness_branch)].descriptor;
        } else if (agg.any_inconclusive) {
            outcome.kind = DimensionOutcome::Kind::Inconclusive;
            outcome.detail = "deadline exhausted";
        } else if (!agg.any_optimal) {
            outcome.kind = DimensionOutcome::Kind::LiveForAllValid;
            outcome.detail =
                "every blocked branch is infeasible at every valid uniform capacity; "
                "initial tokens make this possible even with channels present";
        } else {
            outcome.kind = DimensionOutcome::Kind::BoundedLive;
            // The relaxation only bounds the integer optimum from above;
            // floor(z_lp) is the safe integral bound the LP method can offer.
            outcome.z_ip = static_cast<long>(agg.best->floor().get_si());
            outcome.recommended = Dimensioning::uniform(network, outcome.z_ip + 1);
            require_valid_dimensioning(network, outcome.recommended);
        }
        return outcome;
    }

    auto agg = aggregate([](const BranchReport& r) { return r.ilp; },
                         [](const BranchReport& r) { return r.ilp_value; });
    if (agg.any_unbounded) {
        outcome.kind = DimensionOutcome::Kind::Unbounded;
        size_t b = static_cast<size_t>(agg.witness_branch);
        outcome.detail = outcome.branch_reports[b].descriptor;
        // Re-solve the witness branch to surface the integral point.
        IlpOutcome ilp = solve_ilp(problem.branches.branches[b], problem.objective,
                                   options.cut_config);
        if (auto* ub = std::get_if<IntUnbounded>(&ilp))
            outcome.witness = witness_from_point(problem.branches.branches[b], ub->witness,
                                                 outcome.detail);
    } else if (agg.any_inconclusive) {
        outcome.kind = DimensionOutcome::Kind::Inconclusive;
        outcome.detail = deadline.expired() ? "deadline exhausted"
                                            : "solver safeguards exhausted";
    } else if (!agg.any_optimal) {
        outcome.kind = DimensionOutcome::Kind::LiveForAllValid;
        outcome.detail =
            "every blocked branch is integer-infeasible for every valid uniform "
            "capacity; initial tokens make this possible even with channels present";
    } else {
        outcome.kind = DimensionOutcome::Kind::BoundedLive;
        outcome.z_ip = static_cast<long>(agg.best->floor().get_si());
        outcome.recommended = Dimensioning::uniform(network, outcome.z_ip + 1);
        require_valid_dimensioning(network, outcome.recommended);
        if (outcome.z_lp && *outcome.z_lp < Rational(outcome.z_ip))
            throw std::logic_error("relaxation bound fell below the integer optimum");
    }
    return outcome;
}

HierarchyReport verdict_hierarchy(const Network& network, const Dimensioning& dims,
                                  BlockOverride override_mode,
                                  const AnalyzeOptions& options) {
    HierarchyReport report;
    report.big_m_lp = check_liveness(network, dims, Method::BigMLp, override_mode, options);
    report.branch_lp =
        check_liveness(network, dims, Method::BranchLp, override_mode, options);
    report.branch_ilp =
        check_liveness(network, dims, Method::BranchIlp, override_mode, options);

    auto live = [](const CheckResult& r) { return r.verdict.kind == Verdict::Kind::Live; };
    if (live(report.big_m_lp) && !live(report.branch_lp)) {
        report.inversion = true;
        report.violation = "big-m-lp proved live but branch-lp did not";
    } else if (live(report.branch_lp) && !live(report.branch_ilp)) {
        report.inversion = true;
        report.violation = "branch-lp proved live but branch-ilp did not";
    }
    return report;
}

}  // namespace dpn
