#ifndef DPN_REPORT_HPP
#define DPN_REPORT_HPP

#include <optional>
#include <string>

#include "dpn/analyzer.hpp"
#include "dpn/oracle.hpp"

namespace dpn {

enum class ReportFormat { Text, Json };

struct ReportMeta {
    std::string command;
    std::string network;
    ReportFormat format = ReportFormat::Text;
    bool dump_witness = false;
    // Work counters are only emitted on request: wall-clock times would break
    // byte-identical output across runs.
    bool include_stats = false;
    long millis = 0;
    long configs = 0;
};

std::string emit_report(const CheckResult& result, const ReportMeta& meta);
std::string emit_report(const DimensionOutcome& outcome, const ReportMeta& meta);
std::string emit_report(const ExplorationResult& result, const ReportMeta& meta);
std::string emit_report(const ValidationReport& report, const ReportMeta& meta);

/// Mirror output: the transformed network text, JSON-wrapped on request.
std::string emit_mirror_report(const Network& mirrored, const ReportMeta& meta);

}  // namespace dpn

#endif
