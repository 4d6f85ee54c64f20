#include "dpn/report.hpp"

#include <sstream>

#include "dpn/textio.hpp"
#include "json.hpp"

namespace dpn {

namespace {

using Json = nlohmann::ordered_json;

Json dims_json(const Dimensioning& dims) {
    Json out = Json::object();
    for (const auto& [ch, d] : dims.capacities) out[ch] = d;
    return out;
}

Json witness_json(const Witness& witness) {
    Json values = Json::object();
    for (const auto& [var, val] : witness.values) values[var] = val.str();
    return Json{{"branch", witness.branch}, {"values", values}};
}

Json tally_json(const BranchTally& tally) {
    Json out{{"total", tally.total},
             {"feasible", tally.feasible},
             {"infeasible", tally.infeasible},
             {"unbounded", tally.unbounded}};
    if (tally.inconclusive > 0) out["inconclusive"] = tally.inconclusive;
    return out;
}

void attach_stats(Json& out, const ReportMeta& meta, const SolveStats* stats) {
    if (!meta.include_stats) return;
    Json s = Json::object();
    if (meta.configs > 0) s["configs"] = meta.configs;
    if (stats) {
        s["cuts"] = stats->cuts;
        s["pivots"] = stats->pivots;
    }
    s["millis"] = meta.millis;
    out["stats"] = s;
}

std::string witness_text(const Witness& witness, bool dump_values) {
    std::ostringstream os;
    os << "witness branch: " << witness.branch << "\n";
    if (dump_values)
        for (const auto& [var, val] : witness.values)
            os << "  " << var << " = " << val.str() << "\n";
    return os.str();
}

}  // namespace

std::string emit_report(const CheckResult& result, const ReportMeta& meta) {
    const Verdict& verdict = result.verdict;
    if (meta.format == ReportFormat::Json) {
        Json out{{"command", meta.command}, {"network", meta.network},
                 {"method", method_str(verdict.method)}};
        switch (verdict.kind) {
            case Verdict::Kind::Live: out["verdict"] = "live"; break;
            case Verdict::Kind::Unknown:
                out["verdict"] = "unknown";
                out["witness"] = witness_json(verdict.witness);
                break;
            case Verdict::Kind::Inconclusive:
                out["verdict"] = "inconclusive";
                out["reason"] = verdict.reason;
                break;
        }
        out["branches"] = tally_json(result.tally);
        attach_stats(out, meta, &result.stats);
        return out.dump() + "\n";
    }

    std::ostringstream os;
    switch (verdict.kind) {
        case Verdict::Kind::Live:
            os << "LIVE (" << method_str(verdict.method) << ")\n";
            break;
        case Verdict::Kind::Unknown:
            os << "UNKNOWN (" << method_str(verdict.method)
               << "): a blocked pseudo-state is feasible\n";
            os << witness_text(verdict.witness, meta.dump_witness);
            break;
        case Verdict::Kind::Inconclusive:
            os << "INCONCLUSIVE (" << method_str(verdict.method) << "): " << verdict.reason
               << "\n";
            break;
    }
    if (meta.include_stats)
        os << "branches: " << result.tally.total << " (" << result.tally.infeasible
           << " infeasible), pivots: " << result.stats.pivots
           << ", cuts: " << result.stats.cuts << ", millis: " << meta.millis << "\n";
    return os.str();
}

std::string emit_report(const DimensionOutcome& outcome, const ReportMeta& meta) {
    auto z_lp_str = [&]() -> std::string {
        if (outcome.z_lp_unbounded) return "unbounded";
        if (!outcome.z_lp) return "-";
        return outcome.z_lp->str();
    };

    if (meta.format == ReportFormat::Json) {
        Json out{{"command", meta.command}, {"network", meta.network},
                 {"method", method_str(outcome.method)}};
        switch (outcome.kind) {
            case DimensionOutcome::Kind::BoundedLive:
                out["result"] = "bounded-live";
                out["z_ip"] = outcome.z_ip;
                out["z_lp"] = z_lp_str();
                out["recommended_dims"] = dims_json(outcome.recommended);
                break;
            case DimensionOutcome::Kind::Unbounded:
                out["result"] = "unbounded";
                out["z_ip"] = "unbounded";
                out["z_lp"] = "unbounded";
                if (!outcome.witness.values.empty())
                    out["witness"] = witness_json(outcome.witness);
                break;
            case DimensionOutcome::Kind::LiveForAllValid:
                out["result"] = "live-for-all-valid";
                out["minimal_valid"] = dims_json(outcome.minimal_valid);
                if (!outcome.z_lp_unbounded && outcome.z_lp) out["z_lp"] = z_lp_str();
                break;
            case DimensionOutcome::Kind::Inconclusive:
                out["result"] = "inconclusive";
                out["reason"] = outcome.detail;
                break;
        }
        out["branches"] = tally_json(outcome.tally);
        attach_stats(out, meta, &outcome.stats);
        return out.dump() + "\n";
    }

    std::ostringstream os;
    switch (outcome.kind) {
        case DimensionOutcome::Kind::BoundedLive: {
            os << "BOUNDED-LIVE (" << method_str(outcome.method) << ")\n";
            os << "z_ip = " << outcome.z_ip << "\n";
            os << "z_lp = " << z_lp_str() << "\n";
            os << "recommended dims:";
            for (const auto& [ch, d] : outcome.recommended.capacities)
                os << " " << ch << "=" << d;
            os << "\n";
            break;
        }
        case DimensionOutcome::Kind::Unbounded:
            os << "UNBOUNDED (" << method_str(outcome.method)
               << "): cannot conclude liveness or memory boundedness\n";
            os << "z_ip = unbounded\n";
            if (!outcome.detail.empty()) os << "unbounded branch: " << outcome.detail << "\n";
            if (!outcome.witness.values.empty())
                os << witness_text(outcome.witness, meta.dump_witness);
            break;
        case DimensionOutcome::Kind::LiveForAllValid: {
            os << "LIVE-FOR-ALL-VALID (" << method_str(outcome.method)
               << "): live at every dimensioning that can hold the initial tokens\n";
            os << "minimal valid dims:";
            for (const auto& [ch, d] : outcome.minimal_valid.capacities)
                os << " " << ch << "=" << d;
            os << "\n";
            break;
        }
        case DimensionOutcome::Kind::Inconclusive:
            os << "INCONCLUSIVE (" << method_str(outcome.method) << "): " << outcome.detail
               << "\n";
            break;
    }
    if (meta.include_stats)
        os << "branches: " << outcome.tally.total << ", pivots: " << outcome.stats.pivots
           << ", cuts: " << outcome.stats.cuts << ", millis: " << meta.millis << "\n";
    return os.str();
}

std::string emit_report(const ExplorationResult& result, const ReportMeta& meta) {
    if (meta.format == ReportFormat::Json) {
        Json out{{"command", meta.command}, {"network", meta.network}};
        out["result"] = result.blocked.empty() ? "no-blocked" : "blocked-found";
        out["configs"] = result.configurations_visited;
        out["blocked"] = static_cast<long>(result.blocked.size());
        out["truncated"] = result.truncated;
        if (!result.blocked.empty()) {
            Json trace = Json::array();
            for (const auto& step : result.blocked.front().trace)
                trace.push_back(step.task + "." + step.transition);
            out["witness_trace"] = trace;
        }
        attach_stats(out, meta, nullptr);
        return out.dump() + "\n";
    }

    std::ostringstream os;
    if (result.blocked.empty())
        os << "NO-DEADLOCK: " << result.configurations_visited
           << " configuration(s) explored\n";
    else {
        os << "BLOCKED-CONFIGURATION-FOUND: " << result.blocked.size() << " of "
           << result.configurations_visited << " configuration(s)\n";
        os << "shortest witness trace:\n" << format_trace(result.blocked.front().trace);
    }
    if (result.truncated) os << "TRUNCATED: exploration limit reached\n";
    return os.str();
}

std::string emit_report(const ValidationReport& report, const ReportMeta& meta) {
    if (meta.format == ReportFormat::Json) {
        Json out{{"command", meta.command}, {"network", meta.network}};
        out["result"] = report.ok() ? "valid" : "invalid";
        if (!report.ok()) {
            Json violations = Json::array();
            for (const auto& v : report.violations)
                violations.push_back(Json{{"entity", v.entity}, {"message", v.message}});
            out["violations"] = violations;
        }
        return out.dump() + "\n";
    }
    std::ostringstream os;
    if (report.ok())
        os << "VALID\n";
    else {
        os << "INVALID: " << report.violations.size() << " violation(s)\n";
        for (const auto& v : report.violations)
            os << "  " << v.entity << ": " << v.message << "\n";
    }
    return os.str();
}

std::string emit_mirror_report(const Network& mirrored, const ReportMeta& meta) {
    std::string text = emit_network(mirrored);
    if (meta.format == ReportFormat::Json) {
        Json out{{"command", meta.command}, {"network", meta.network}, {"output", text}};
        return out.dump() + "\n";
    }
    return text;
}

}  // namespace dpn
