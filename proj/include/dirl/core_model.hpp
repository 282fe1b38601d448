#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirl {

// Agent-side moves. The order is fixed project-wide; every serialized
// vector indexes actions in this order.
enum class Action : int {
    Tweet = 0,    // tw: post new content
    Retweet = 1,  // rt: reshare existing content
    Reply = 2,    // rp: reply to or mention another user
    None = 3,     // nt: no action
};

// Network responses to the agent, exogenous to it. Order fixed as well.
enum class State : int {
    Reshared = 0,     // t:  the agent's message got reshared
    SupportReply = 1, // p+: supportive reply or mention received
    OpposeReply = 2,  // p-: opposing reply or mention received
    None = 3,         // n:  no network engagement
};

inline constexpr int kNumActions = 4;
inline constexpr int kNumStates = 4;
inline constexpr int kNumPairs = kNumStates * kNumActions; // 16
inline constexpr int kNumFeatures = 6;                     // (t, p+, p-, tw, rt, rp)

constexpr int action_index(Action a) { return static_cast<int>(a); }
constexpr int state_index(State s) { return static_cast<int>(s); }

constexpr std::array<Action, kNumActions> all_actions() {
    return {Action::Tweet, Action::Retweet, Action::Reply, Action::None};
}
constexpr std::array<State, kNumStates> all_states() {
    return {State::Reshared, State::SupportReply, State::OpposeReply, State::None};
}

// Bijection from the 16 (state, action) combinations onto [0, 16).
constexpr int pair_index(State s, Action a) {
    return kNumActions * state_index(s) + action_index(a);
}

constexpr State state_of_pair(int index) { return static_cast<State>(index / kNumActions); }
constexpr Action action_of_pair(int index) { return static_cast<Action>(index % kNumActions); }

struct StateActionPair {
    State state;
    Action action;

    int index() const { return pair_index(state, action); }
};

constexpr StateActionPair pair_from_index(int index) {
    return {state_of_pair(index), action_of_pair(index)};
}

// Short tags used in every file format: tw/rt/rp/nt and t/p+/p-/n.
std::string_view action_name(Action a);
std::string_view state_name(State s);
std::optional<Action> action_from_name(std::string_view name);
std::optional<State> state_from_name(std::string_view name);

struct Step {
    State state;
    Action action;
    std::int64_t ts = 0; // epoch seconds of the event that opened the step
};

// One user's chronological state-action record (the per-user MDP rollout).
// Immutable after construction; step timestamps are non-decreasing.
struct Trajectory {
    std::string user_id;
    std::vector<Step> steps;

    // Steps where the user actually did something (action != nt).
    int real_action_count() const;
    // Steps where the network actually responded (state != n).
    int real_response_count() const;
    bool timestamps_non_decreasing() const;
};

// Output of the reward estimation for one user.
struct RewardProfile {
    std::string user_id;
    std::array<double, kNumPairs> rewards{};     // indexed by pair_index
    std::array<double, kNumFeatures> weights{};  // theta, order (t, p+, p-, tw, rt, rp)
    bool converged = false;
    double final_gradient_norm = 0.0;
    int iterations = 0;
};

// Feature row labels, order matching RewardProfile::weights.
std::string_view feature_name(int row);

} // namespace dirl
