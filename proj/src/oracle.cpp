#include "dpn/oracle.hpp"

#include <algorithm>
#include <deque>

namespace dpn {

namespace {

bool rates_applicable(const Dimensioning& dims, const Configuration& config,
                      const Transition& tr) {
    for (const auto& [f, qc] : tr.consume)
        if (config.contents.at(f) < qc) return false;
    for (const auto& [f, qp] : tr.produce)
        if (config.contents.at(f) + qp > dims.at(f)) return false;
    return true;
}

bool task_blocked(const Dimensioning& dims, const Configuration& config,
                  const Task& task) {
    const StateId& at = config.task_state.at(task.id);
    bool strong = task.mode == TaskMode::Nondeterministic;
    bool any_outgoing = false;
    for (const auto& tr : task.transitions) {
        if (tr.source != at) continue;
        any_outgoing = true;
        bool ok = rates_applicable(dims, config, tr);
        if (strong && ok) return false;       // one executable transition suffices
        if (!strong && !ok) return true;      // one stuck transition blocks
    }
    if (!any_outgoing) return true;  // a terminated task never supplies progress
    return strong;  // strong: nothing fired above; weak: all were executable
}

Configuration apply(const Configuration& config, const Task& task, const Transition& tr) {
    Configuration next = config;
    next.task_state[task.id] = tr.target;
    for (const auto& [f, qc] : tr.consume) next.contents[f] -= qc;
    for (const auto& [f, qp] : tr.produce) next.contents[f] += qp;
    return next;
}

}  // namespace

bool enabled(const Network& network, const Dimensioning& dims, const Configuration& config,
             const TaskId& task_id, const TransitionId& transition) {
    const Task* task = network.find_task(task_id);
    if (!task) throw std::invalid_argument("unknown task " + task_id);
    const Transition* tr = task->find_transition(transition);
    if (!tr) throw std::invalid_argument("unknown transition " + task_id + "." + transition);
    if (config.task_state.at(task_id) != tr->source)
        throw WrongSourceState("task " + task_id + " is in state " +
                               config.task_state.at(task_id) + ", not " + tr->source);
    return rates_applicable(dims, config, *tr);
}

Configuration initial_configuration(const Network& network, const Dimensioning& dims) {
    require_valid_dimensioning(network, dims);
    Configuration config;
    for (const auto& task : network.tasks)
        config.task_state[task.id] = task.initial_transition.target;
    for (const auto& ch : network.channels)
        config.contents[ch.id] = network.initial_tokens(ch.id);
    return config;
}

ExplorationResult explore(const Network& network, const Dimensioning& dims,
                          const ExplorationLimits& limits) {
    ExplorationResult result;
    Configuration start = initial_configuration(network, dims);

    std::vector<Configuration> configs{start};
    std::map<Configuration, long> index{{start, 0}};
    // Parent pointers reconstruct one shortest trace per configuration.
    std::vector<std::pair<long, TraceStep>> parent{{-1, {}}};
    std::deque<long> frontier{0};

    std::vector<int> task_order = network.tasks_by_id();

    while (!frontier.empty()) {
        long cur = frontier.front();
        frontier.pop_front();
        Configuration config = configs[static_cast<size_t>(cur)];

        bool all_blocked = true;
        std::map<TaskId, bool> flags;
        for (int ti : task_order) {
            const Task& task = network.tasks[static_cast<size_t>(ti)];
            bool blocked = task_blocked(dims, config, task);
            flags[task.id] = blocked;
            if (!blocked) all_blocked = false;
        }
        if (all_blocked) {
            std::vector<TraceStep> trace;
            for (long walk = cur; parent[static_cast<size_t>(walk)].first >= 0;
                 walk = parent[static_cast<size_t>(walk)].first)
                trace.push_back(parent[static_cast<size_t>(walk)].second);
            std::reverse(trace.begin(), trace.end());
            result.blocked.push_back(BlockedRecord{config, std::move(flags), std::move(trace)});
        }

        for (int ti : task_order) {
            const Task& task = network.tasks[static_cast<size_t>(ti)];
            const StateId& at = config.task_state.at(task.id);
            for (const auto& tr : task.transitions) {
                if (tr.source != at || !rates_applicable(dims, config, tr)) continue;
                Configuration next = apply(config, task, tr);
                if (index.count(next)) continue;
                if (static_cast<long>(configs.size()) >=
                    limits.max_configurations) {
                    result.truncated = true;
                    result.configurations_visited = static_cast<long>(configs.size());
                    return result;
                }
                long id = static_cast<long>(configs.size());
                index.emplace(next, id);
                configs.push_back(std::move(next));
                parent.emplace_back(cur, TraceStep{task.id, tr.id});
                frontier.push_back(id);
            }
        }
    }
    result.configurations_visited = static_cast<long>(configs.size());
    return result;
}

TraceCounts trace_counts(const std::vector<TraceStep>& trace, const Network& network,
                         const Dimensioning& dims) {
    Configuration config = initial_configuration(network, dims);
    TraceCounts counts;
    for (const auto& task : network.tasks) {
        counts.initial[task.id] = 1;
        for (const auto& tr : task.transitions) counts.transitions[task.id][tr.id] = 0;
    }
    for (const auto& step : trace) {
        const Task* task = network.find_task(step.task);
        if (!task) throw IllegalTrace("unknown task " + step.task);
        const Transition* tr = task->find_transition(step.transition);
        if (!tr) throw IllegalTrace("unknown transition " + step.task + "." + step.transition);
        if (config.task_state.at(step.task) != tr->source)
            throw IllegalTrace("step " + step.task + "." + step.transition +
                               " does not leave the current state");
        if (!rates_applicable(dims, config, *tr))
            throw IllegalTrace("step " + step.task + "." + step.transition +
                               " is not enabled");
        config = apply(config, *task, *tr);
        ++counts.transitions[step.task][step.transition];
    }
    return counts;
}

std::string format_trace(const std::vector<TraceStep>& trace) {
    std::string out;
    for (const auto& step : trace) out += step.task + "." + step.transition + "\n";
    return out;
}

}  // namespace dpn
