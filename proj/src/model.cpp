#include "dpn/model.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace dpn {

const Transition* Task::find_transition(const TransitionId& tid) const {
    for (const auto& t : transitions)
        if (t.id == tid) return &t;
    return nullptr;
}

bool Task::has_state(const StateId& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}

const Task* Network::find_task(const TaskId& id) const {
    for (const auto& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

const Channel* Network::find_channel(const ChannelId& id) const {
    for (const auto& c : channels)
        if (c.id == id) return &c;
    return nullptr;
}

Quantity Network::initial_tokens(const ChannelId& f) const {
    Quantity total = 0;
    for (const auto& t : tasks) {
        auto it = t.initial_transition.produce.find(f);
        if (it != t.initial_transition.produce.end()) total += it->second;
    }
    return total;
}

std::vector<int> Network::tasks_by_id() const {
    std::vector<int> idx(tasks.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return tasks[a].id < tasks[b].id; });
    return idx;
}

std::vector<int> Network::channels_by_id() const {
    std::vector<int> idx(channels.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return channels[a].id < channels[b].id; });
    return idx;
}

Quantity Dimensioning::at(const ChannelId& f) const {
    auto it = capacities.find(f);
    if (it == capacities.end())
        throw InvalidDimensioning("no capacity given for channel '" + f + "'");
    return it->second;
}

Dimensioning Dimensioning::uniform(const Network& net, Quantity z) {
    Dimensioning d;
    for (const auto& c : net.channels) d.capacities[c.id] = z;
    return d;
}

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

void check_rate_map(const Network& net, const Task& task, const std::string& what,
                    const std::map<ChannelId, Quantity>& rates, bool producing,
                    ValidationReport& report) {
    for (const auto& [ch, qty] : rates) {
        const Channel* c = net.find_channel(ch);
        if (!c) {
            report.violations.push_back(
                {task.id, what + " references unknown channel '" + ch + "'"});
            continue;
        }
        const TaskId& owner = producing ? c->producer : c->consumer;
        if (owner != task.id)
            report.violations.push_back(
                {task.id, what + (producing ? " produces on channel '" : " consumes from channel '") +
                              ch + "' but task is not its " +
                              (producing ? "producer" : "consumer")});
        if (qty <= 0)
            report.violations.push_back(
                {task.id, what + " has non-positive quantity on channel '" + ch + "'"});
    }
}

}  // namespace

ValidationReport validate(const Network& network) {
    ValidationReport report;

    if (!valid_identifier(network.name))
        report.violations.push_back({network.name, "network name is not a valid identifier"});

    std::set<TaskId> task_ids;
    for (const auto& t : network.tasks) {
        if (!valid_identifier(t.id))
            report.violations.push_back({t.id, "task id is not a valid identifier"});
        if (!task_ids.insert(t.id).second)
            report.violations.push_back({t.id, "duplicate task id"});
    }

    std::set<ChannelId> channel_ids;
    for (const auto& c : network.channels) {
        if (!valid_identifier(c.id))
            report.violations.push_back({c.id, "channel id is not a valid identifier"});
        if (!channel_ids.insert(c.id).second)
            report.violations.push_back({c.id, "duplicate channel id"});
        if (!network.find_task(c.producer))
            report.violations.push_back({c.id, "producer task '" + c.producer + "' does not exist"});
        if (!network.find_task(c.consumer))
            report.violations.push_back({c.id, "consumer task '" + c.consumer + "' does not exist"});
        if (c.producer == c.consumer)
            report.violations.push_back({c.id, "producer and consumer must differ"});
    }

    for (const auto& t : network.tasks) {
        std::set<StateId> state_set;
        for (const auto& s : t.states) {
            if (!valid_identifier(s))
                report.violations.push_back({t.id + "." + s, "state id is not a valid identifier"});
            if (!state_set.insert(s).second)
                report.violations.push_back({t.id + "." + s, "duplicate state id"});
        }
        if (state_set.count(t.initial_state))
            report.violations.push_back(
                {t.id, "initial state '" + t.initial_state + "' must not be a member of V_t"});

        // Initial transition: target in V_t, produce-only, owned channels.
        if (!t.has_state(t.initial_transition.target))
            report.violations.push_back(
                {t.id, "initial transition targets unknown state '" +
                           t.initial_transition.target + "'"});
        check_rate_map(network, t, "initial transition", t.initial_transition.produce,
                       /*producing=*/true, report);

        std::set<TransitionId> transition_ids;
        for (const auto& tr : t.transitions) {
            std::string entity = t.id + "." + tr.id;
            if (!transition_ids.insert(tr.id).second)
                report.violations.push_back({entity, "duplicate transition id"});
            if (!t.has_state(tr.source))
                report.violations.push_back({entity, "source state '" + tr.source + "' not declared"});
            if (tr.source == t.initial_state)
                report.violations.push_back(
                    {entity, "initial state must have no outgoing transitions in A_t"});
            if (!t.has_state(tr.target))
                report.violations.push_back({entity, "target state '" + tr.target + "' not declared"});
            if (tr.target == t.initial_state)
                report.violations.push_back({entity, "initial state must have no incoming transitions"});
            check_rate_map(network, t, "transition " + tr.id, tr.consume, false, report);
            check_rate_map(network, t, "transition " + tr.id, tr.produce, true, report);

            Quantity effect = 0;
            for (const auto& [ch, q] : tr.produce) { (void)ch; effect += q; }
            for (const auto& [ch, q] : tr.consume) { (void)ch; effect += q; }
            if (effect <= 0)
                report.violations.push_back(
                    {entity, "transition has no effect on any channel"});
        }
    }

    // Weak connectivity of the network graph (tasks as vertices, channels as
    // arcs, direction ignored).
    if (!network.tasks.empty()) {
        std::map<TaskId, std::vector<TaskId>> adj;
        for (const auto& c : network.channels) {
            adj[c.producer].push_back(c.consumer);
            adj[c.consumer].push_back(c.producer);
        }
        std::set<TaskId> seen;
        std::queue<TaskId> frontier;
        frontier.push(network.tasks.front().id);
        seen.insert(network.tasks.front().id);
        while (!frontier.empty()) {
            TaskId cur = frontier.front();
            frontier.pop();
            for (const auto& next : adj[cur])
                if (seen.insert(next).second) frontier.push(next);
        }
        for (const auto& t : network.tasks)
            if (!seen.count(t.id))
                report.violations.push_back(
                    {t.id, "network graph is not connected: task unreachable from '" +
                               network.tasks.front().id + "'"});
    }

    return report;
}

void require_valid_dimensioning(const Network& network, const Dimensioning& dims) {
    for (const auto& c : network.channels) {
        Quantity d = dims.at(c.id);  // throws when missing
        if (d < 0)
            throw InvalidDimensioning("negative capacity on channel '" + c.id + "'");
        Quantity init = network.initial_tokens(c.id);
        if (d < init)
            throw InvalidDimensioning("capacity " + std::to_string(d) + " on channel '" +
                                      c.id + "' cannot hold its " + std::to_string(init) +
                                      " initial token(s)");
    }
}

Network mirror_transform(const Network& network, const Dimensioning& dims) {
    require_valid_dimensioning(network, dims);

    Network out = network;
    for (const auto& c : network.channels) {
        ChannelId mirror = c.id + "_mirror";
        out.channels.push_back(Channel{mirror, c.consumer, c.producer});

        for (auto& t : out.tasks) {
            if (t.id == c.producer) {
                for (auto& tr : t.transitions) {
                    auto it = tr.produce.find(c.id);
                    if (it != tr.produce.end()) tr.consume[mirror] = it->second;
                }
            }
            if (t.id == c.consumer) {
                for (auto& tr : t.transitions) {
                    auto it = tr.consume.find(c.id);
                    if (it != tr.consume.end()) tr.produce[mirror] = it->second;
                }
                Quantity seed = dims.at(c.id) - network.initial_tokens(c.id);
                if (seed > 0) t.initial_transition.produce[mirror] = seed;
            }
        }
    }
    return out;
}

namespace {

bool rate_maps_equal(const std::map<ChannelId, Quantity>& a,
                     const std::map<ChannelId, Quantity>& b) {
    return a == b;
}

bool tasks_equal_modulo_transition_ids(const Task& a, const Task& b) {
    if (a.id != b.id || a.mode != b.mode) return false;
    if (a.initial_state != b.initial_state) return false;
    std::set<StateId> sa(a.states.begin(), a.states.end());
    std::set<StateId> sb(b.states.begin(), b.states.end());
    if (sa != sb) return false;
    if (a.initial_transition.target != b.initial_transition.target) return false;
    if (!rate_maps_equal(a.initial_transition.produce, b.initial_transition.produce))
        return false;
    if (a.transitions.size() != b.transitions.size()) return false;
    for (size_t i = 0; i < a.transitions.size(); ++i) {
        const auto& ta = a.transitions[i];
        const auto& tb = b.transitions[i];
        if (ta.source != tb.source || ta.target != tb.target) return false;
        if (!rate_maps_equal(ta.consume, tb.consume)) return false;
        if (!rate_maps_equal(ta.produce, tb.produce)) return false;
    }
    return true;
}

}  // namespace

bool structurally_equal(const Network& a, const Network& b) {
    if (a.name != b.name) return false;
    if (a.tasks.size() != b.tasks.size() || a.channels.size() != b.channels.size())
        return false;
    for (const auto& ca : a.channels) {
        const Channel* cb = b.find_channel(ca.id);
        if (!cb || cb->producer != ca.producer || cb->consumer != ca.consumer) return false;
    }
    for (const auto& ta : a.tasks) {
        const Task* tb = b.find_task(ta.id);
        if (!tb || !tasks_equal_modulo_transition_ids(ta, *tb)) return false;
    }
    return true;
}

}  // namespace dpn
