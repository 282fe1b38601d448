#include "dirl/core_model.hpp"

namespace dirl {

std::string_view action_name(Action a) {
    switch (a) {
    case Action::Tweet: return "tw";
    case Action::Retweet: return "rt";
    case Action::Reply: return "rp";
    case Action::None: return "nt";
    }
    return "?";
}

std::string_view state_name(State s) {
    switch (s) {
    case State::Reshared: return "t";
    case State::SupportReply: return "p+";
    case State::OpposeReply: return "p-";
    case State::None: return "n";
    }
    return "?";
}

std::optional<Action> action_from_name(std::string_view name) {
    for (Action a : all_actions())
        if (action_name(a) == name) return a;
    return std::nullopt;
}

std::optional<State> state_from_name(std::string_view name) {
    for (State s : all_states())
        if (state_name(s) == name) return s;
    return std::nullopt;
}

int Trajectory::real_action_count() const {
    int n = 0;
    for (const Step& st : steps)
        if (st.action != Action::None) ++n;
    return n;
}

int Trajectory::real_response_count() const {
    int n = 0;
    for (const Step& st : steps)
        if (st.state != State::None) ++n;
    return n;
}

bool Trajectory::timestamps_non_decreasing() const {
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (steps[i].ts < steps[i - 1].ts) return false;
    return true;
}

std::string_view feature_name(int row) {
    switch (row) {
    case 0: return "t";
    case 1: return "p+";
    case 2: return "p-";
    case 3: return "tw";
    case 4: return "rt";
    case 5: return "rp";
    }
    return "?";
}

} // namespace dirl
