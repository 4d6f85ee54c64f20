#ifndef DPN_ORACLE_HPP
#define DPN_ORACLE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpn/encoder.hpp"
#include "dpn/model.hpp"

namespace dpn {

struct Configuration {
    std::map<TaskId, StateId> task_state;
    std::map<ChannelId, Quantity> contents;

    bool operator==(const Configuration&) const = default;
    bool operator<(const Configuration& o) const {
        if (task_state != o.task_state) return task_state < o.task_state;
        return contents < o.contents;
    }
};

struct TraceStep {
    TaskId task;
    TransitionId transition;
};

struct BlockedRecord {
    Configuration config;
    std::map<TaskId, bool> task_blocked;  // per-task diagnosis (all true)
    std::vector<TraceStep> trace;         // one shortest reaching trace
};

struct ExplorationLimits {
    long max_configurations = 1000000;
};

struct ExplorationResult {
    long configurations_visited = 0;
    std::vector<BlockedRecord> blocked;
    bool truncated = false;
};

struct WrongSourceState : std::logic_error {
    using std::logic_error::logic_error;
};
struct IllegalTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Can `transition` of `task` fire? Requires enough tokens on every consumed
/// channel and enough free space on every produced one. The transition must
/// leave the task's current state.
bool enabled(const Network& network, const Dimensioning& dims, const Configuration& config,
             const TaskId& task, const TransitionId& transition);

Configuration initial_configuration(const Network& network, const Dimensioning& dims);

/// Exhaustive BFS over the finite configuration space (tasks in id order,
/// transitions in declaration order). A configuration is blocked when every
/// task is blocked under its own mode; a task whose state has no outgoing
/// transitions counts as blocked under both modes.
ExplorationResult explore(const Network& network, const Dimensioning& dims,
                          const ExplorationLimits& limits = {});

/// Execution counts of a legal trace (initial transitions at 1). Replays the
/// trace and throws IllegalTrace when a step is not enabled.
TraceCounts trace_counts(const std::vector<TraceStep>& trace, const Network& network,
                         const Dimensioning& dims);

/// Witness trace rendering: one task-qualified transition per line ("A.t1").
std::string format_trace(const std::vector<TraceStep>& trace);

}  // namespace dpn

#endif
