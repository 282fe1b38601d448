// Deterministic solver fixture whose matching target is exactly achievable:
// the trajectory's per-pair frequencies reproduce the model's own expected
// visitation at a known weight vector, so gradient ascent has a true
// stationary point inside the feasible set and the convergence flag can be
// exercised honestly. Sampled data at desk scale leaves an O(1/sqrt(N))
// feature gap instead, which is what the recovery experiments cover.
#pragma once

#include "dirl/maxent_irl.hpp"
#include "dirl/simulator.hpp"

#include <cmath>

namespace fixtures {

struct Matchable {
    std::array<double, dirl::kNumFeatures> theta0;
    dirl::TransitionModel transitions;
    dirl::SolverConfig config;
    dirl::Trajectory trajectory;
};

inline Matchable make_matchable() {
    Matchable fixture;
    fixture.theta0 = {0.4, -0.3, 0.2, 0.6, 1.4, -0.8};
    fixture.transitions = dirl::engagement_transitions();
    fixture.config.horizon = 300;
    fixture.config.max_iterations = 2000;

    const dirl::FeatureMatrix& f = dirl::feature_matrix();
    auto rewards = dirl::rewards_from_weights(fixture.theta0, f);
    dirl::Policy policy = dirl::soft_value_iteration(rewards, fixture.transitions,
                                                     fixture.config);
    std::array<double, dirl::kNumStates> initial{1.0, 0.0, 0.0, 0.0}; // point mass on t
    auto occupancy = dirl::expected_visitation(policy, fixture.transitions, initial,
                                               fixture.config.horizon);

    // Quantize the occupancy into 20,000 steps; the rounding error stays two
    // orders of magnitude below the 1e-3 gradient tolerance.
    const long steps = 20000;
    std::array<long, dirl::kNumPairs> counts{};
    long total = 0;
    for (int j = 0; j < dirl::kNumPairs; ++j) {
        counts[j] = std::lround(steps * occupancy[j] / fixture.config.horizon);
        total += counts[j];
    }
    counts[0] += steps - total;

    fixture.trajectory.user_id = "fixture";
    // leading (t, tw) step pins the empirical initial distribution on t
    fixture.trajectory.steps.push_back({dirl::State::Reshared, dirl::Action::Tweet, 1});
    --counts[0];
    for (int j = 0; j < dirl::kNumPairs; ++j)
        for (long k = 0; k < counts[j]; ++k)
            fixture.trajectory.steps.push_back(
                {dirl::state_of_pair(j), dirl::action_of_pair(j), 2});
    return fixture;
}

} // namespace fixtures
