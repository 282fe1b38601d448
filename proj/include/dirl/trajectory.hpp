#pragma once

#include "dirl/core_model.hpp"
#include "dirl/ingestion.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace dirl {

struct BuildConfig {
    StanceThresholds stance = StanceThresholds::standard();
    // A user action closes an open response step only if it follows within
    // this many seconds; unset means no window. Unclassifiable strict-mode
    // replies must be dropped upstream; the builder skips any stragglers.
    std::optional<std::int64_t> max_gap_seconds;
};

// Converts one user's chronologically ordered events into the state-action
// record. Pairing rule: a network response opens a step whose state is that
// response; the user's next own action closes it; a second response closes
// it with `nt` first; an own action with no open step stands alone as (n, a);
// a trailing open step closes with `nt`.
//
// Throws std::invalid_argument if events are unsorted or span several users.
Trajectory build_trajectory(std::string user_id, std::span<const RawEvent> events,
                            const BuildConfig& config = {});

// Eligibility gates: enough own actions and enough network responses.
struct EligibilityGates {
    int min_actions = 5;
    int min_responses = 5;
};

bool is_eligible(const Trajectory& traj, const EligibilityGates& gates);

std::vector<Trajectory> filter_eligible(std::vector<Trajectory> trajectories,
                                        const EligibilityGates& gates);

// Audit dump, one step per line: user_id,step,state,action,ts. Doubles as
// the on-disk trajectory store between the build and estimate stages.
void write_trajectory_store(std::ostream& out, std::span<const Trajectory> trajectories);

std::vector<Trajectory> read_trajectory_store(std::istream& in);

} // namespace dirl
