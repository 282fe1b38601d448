#include "dirl/trajectory.hpp"

#include "dirl/format.hpp"

#include <stdexcept>

namespace dirl {

namespace {

Action own_action_of(EventKind k) {
    switch (k) {
    case EventKind::OwnPost: return Action::Tweet;
    case EventKind::OwnReshare: return Action::Retweet;
    case EventKind::OwnReply: return Action::Reply;
    default: throw std::logic_error("not an own action");
    }
}

State response_state_of(const RawEvent& ev, const StanceThresholds& thresholds) {
    if (ev.kind == EventKind::GotReshared) return State::Reshared;
    if (!ev.stance) throw std::invalid_argument("got_reply event without stance score");
    switch (apply_stance_threshold(*ev.stance, thresholds)) {
    case StanceClass::Support: return State::SupportReply;
    case StanceClass::Oppose: return State::OpposeReply;
    case StanceClass::Dropped: break;
    }
    throw std::logic_error("unclassified reply reached the builder");
}

} // namespace

Trajectory build_trajectory(std::string user_id, std::span<const RawEvent> events,
                            const BuildConfig& config) {
    Trajectory traj;
    traj.user_id = std::move(user_id);

    std::optional<Step> open; // response waiting for the user's reaction
    auto flush_open = [&] {
        if (open) {
            traj.steps.push_back(*open);
            open.reset();
        }
    };

    std::int64_t prev_ts = 0;
    bool first = true;
    for (const RawEvent& ev : events) {
        if (ev.user_id != traj.user_id)
            throw std::invalid_argument("events for several users passed to build_trajectory");
        if (!first && ev.ts < prev_ts)
            throw std::invalid_argument("events not sorted by timestamp");
        prev_ts = ev.ts;
        first = false;

        if (is_own_action(ev.kind)) {
            Action a = own_action_of(ev.kind);
            bool within_window =
                open && (!config.max_gap_seconds || ev.ts - open->ts <= *config.max_gap_seconds);
            if (within_window) {
                open->action = a;
                flush_open();
            } else {
                flush_open(); // expired window closes with nt
                traj.steps.push_back({State::None, a, ev.ts});
            }
        } else {
            if (ev.kind == EventKind::GotReply && ev.stance &&
                apply_stance_threshold(*ev.stance, config.stance) == StanceClass::Dropped)
                continue;
            flush_open();
            open = Step{response_state_of(ev, config.stance), Action::None, ev.ts};
        }
    }
    flush_open();
    return traj;
}

bool is_eligible(const Trajectory& traj, const EligibilityGates& gates) {
    return traj.real_action_count() >= gates.min_actions &&
           traj.real_response_count() >= gates.min_responses;
}

std::vector<Trajectory> filter_eligible(std::vector<Trajectory> trajectories,
                                        const EligibilityGates& gates) {
    if (gates.min_actions < 1 || gates.min_responses < 0)
        throw std::invalid_argument("eligibility gates require min_actions >= 1, min_responses >= 0");
    std::erase_if(trajectories, [&](const Trajectory& t) { return !is_eligible(t, gates); });
    return trajectories;
}

void write_trajectory_store(std::ostream& out, std::span<const Trajectory> trajectories) {
    out << "user_id,step,state,action,ts\n";
    for (const Trajectory& traj : trajectories) {
        for (std::size_t i = 0; i < traj.steps.size(); ++i) {
            const Step& s = traj.steps[i];
            out << traj.user_id << ',' << i << ',' << state_name(s.state) << ','
                << action_name(s.action) << ',' << s.ts << '\n';
        }
    }
    if (!out) throw std::runtime_error("I/O failure while writing trajectory store");
}

std::vector<Trajectory> read_trajectory_store(std::istream& in) {
    if (!in) throw std::runtime_error("trajectory store unreadable");
    std::vector<Trajectory> trajectories;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (line_no == 1 && trimmed == "user_id,step,state,action,ts") continue;
        auto fields = split(trimmed, ',');
        if (fields.size() != 5)
            throw std::runtime_error("trajectory store line " + std::to_string(line_no) +
                                     ": expected 5 fields");
        auto state = state_from_name(trim(fields[2]));
        auto action = action_from_name(trim(fields[3]));
        if (!state || !action)
            throw std::runtime_error("trajectory store line " + std::to_string(line_no) +
                                     ": unknown state or action tag");
        const std::string& user = fields[0];
        std::size_t step_no = 0;
        std::int64_t ts = 0;
        try {
            step_no = std::stoul(fields[1]);
            ts = std::stoll(fields[4]);
        } catch (const std::exception&) {
            throw std::runtime_error("trajectory store line " + std::to_string(line_no) +
                                     ": non-numeric step or ts field");
        }
        if (trajectories.empty() || trajectories.back().user_id != user) {
            if (step_no != 0)
                throw std::runtime_error("trajectory store line " + std::to_string(line_no) +
                                         ": steps of one user must be contiguous from 0");
            trajectories.push_back({user, {}});
        } else if (step_no != trajectories.back().steps.size()) {
            throw std::runtime_error("trajectory store line " + std::to_string(line_no) +
                                     ": step index out of sequence");
        }
        trajectories.back().steps.push_back({*state, *action, ts});
    }
    if (in.bad()) throw std::runtime_error("I/O failure while reading trajectory store");
    return trajectories;
}

} // namespace dirl
