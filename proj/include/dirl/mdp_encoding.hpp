#pragma once

#include "dirl/core_model.hpp"

#include <array>
#include <span>

namespace dirl {

// Fixed 6x16 binary encoding of the state-action space. Rows are the
// indicator features (t, p+, p-, tw, rt, rp); column j encodes the pair
// with pair_index j. The (n, nt) column is all zeros.
using FeatureMatrix = std::array<std::array<double, kNumPairs>, kNumFeatures>;

// One-hot rows 0-2 for the state unless s = n, one-hot rows 3-5 for the
// action unless a = nt.
std::array<double, kNumFeatures> encode_state_action(State s, Action a);

FeatureMatrix build_feature_matrix();

// Shared constant instance; two builds are bit-identical, so callers may
// use either interchangeably.
const FeatureMatrix& feature_matrix();

// Per-action state transition probabilities P[a][s][s']; every (a, s) row
// sums to 1.
struct TransitionModel {
    std::array<std::array<std::array<double, kNumStates>, kNumStates>, kNumActions> p{};

    double& at(Action a, State s, State next) {
        return p[action_index(a)][state_index(s)][state_index(next)];
    }
    double at(Action a, State s, State next) const {
        return p[action_index(a)][state_index(s)][state_index(next)];
    }

    bool row_stochastic(double tol = 1e-12) const;

    static TransitionModel uniform();
};

// Laplace-smoothed per-user estimate from consecutive steps:
//   P[a][s][s'] = (count(s,a -> s') + alpha) / (count(s,a) + 4*alpha).
// Rows with no observations and alpha = 0 fall back to uniform 0.25.
TransitionModel estimate_transitions(const Trajectory& traj, double alpha = 1.0);

// Pooled variant over several trajectories (transition counts summed).
TransitionModel estimate_transitions(std::span<const Trajectory> trajectories,
                                     double alpha = 1.0);

} // namespace dirl
