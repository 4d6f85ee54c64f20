#ifndef DPN_MODEL_HPP
#define DPN_MODEL_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpn {

using TaskId = std::string;
using ChannelId = std::string;
using StateId = std::string;
using TransitionId = std::string;
using Quantity = std::int64_t;  // strictly positive in rate maps

enum class TaskMode { Deterministic, Nondeterministic };

struct Transition {
    TransitionId id;
    StateId source;
    StateId target;
    std::map<ChannelId, Quantity> consume;  // qc, channels the task consumes from
    std::map<ChannelId, Quantity> produce;  // qp, channels the task produces on
};

/// The unique unconditional first step of a task. It never consumes; its
/// productions model the tokens initially present on the task's channels.
struct InitialTransition {
    StateId target;
    std::map<ChannelId, Quantity> produce;
};

struct Task {
    TaskId id;
    TaskMode mode = TaskMode::Nondeterministic;
    StateId initial_state;  // the pre-first-step state, not a member of states
    std::vector<StateId> states;
    InitialTransition initial_transition;
    std::vector<Transition> transitions;

    const Transition* find_transition(const TransitionId& tid) const;
    bool has_state(const StateId& s) const;
};

struct Channel {
    ChannelId id;
    TaskId producer;
    TaskId consumer;
};

struct Network {
    std::string name;
    std::vector<Task> tasks;
    std::vector<Channel> channels;

    const Task* find_task(const TaskId& id) const;
    const Channel* find_channel(const ChannelId& id) const;

    /// Total tokens placed on `f` by initial transitions.
    Quantity initial_tokens(const ChannelId& f) const;

    /// Task indices sorted by id; the canonical iteration order used by the
    /// encoder, the oracle and the emitter.
    std::vector<int> tasks_by_id() const;
    std::vector<int> channels_by_id() const;
};

/// Per-channel buffer capacities d_f.
struct Dimensioning {
    std::map<ChannelId, Quantity> capacities;

    Quantity at(const ChannelId& f) const;
    static Dimensioning uniform(const Network& net, Quantity z);
};

struct Violation {
    std::string entity;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

struct InvalidDimensioning : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structural check of every model invariant. Violations are data, not
/// failures; an empty report means the network is analyzable.
ValidationReport validate(const Network& network);

/// Throws InvalidDimensioning unless dims covers every channel with
/// d_f >= initial tokens on f.
void require_valid_dimensioning(const Network& network, const Dimensioning& dims);

/// Capacity-to-blocking-read transform: adds a reverse channel f_mirror per
/// channel f, rewires every produce/consume to touch the mirror, and seeds
/// f_mirror with d_f minus f's initial tokens. The result has no meaningful
/// capacities left; explore it with capacity d_f on both halves of a pair
/// (token conservation keeps contents below that forever).
Network mirror_transform(const Network& network, const Dimensioning& dims);

/// Equality up to task/channel order and transition ids (transition sequences
/// are matched positionally per task).
bool structurally_equal(const Network& a, const Network& b);

}  // namespace dpn

#endif
