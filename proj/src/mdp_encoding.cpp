#include "dirl/mdp_encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace dirl {

std::array<double, kNumFeatures> encode_state_action(State s, Action a) {
    std::array<double, kNumFeatures> v{};
    if (s != State::None) v[state_index(s)] = 1.0;
    if (a != Action::None) v[3 + action_index(a)] = 1.0;
    return v;
}

FeatureMatrix build_feature_matrix() {
    FeatureMatrix f{};
    for (int j = 0; j < kNumPairs; ++j) {
        auto column = encode_state_action(state_of_pair(j), action_of_pair(j));
        for (int i = 0; i < kNumFeatures; ++i) f[i][j] = column[i];
    }
    return f;
}

const FeatureMatrix& feature_matrix() {
    static const FeatureMatrix f = build_feature_matrix();
    return f;
}

bool TransitionModel::row_stochastic(double tol) const {
    for (int a = 0; a < kNumActions; ++a) {
        for (int s = 0; s < kNumStates; ++s) {
            double sum = 0.0;
            for (int t = 0; t < kNumStates; ++t) {
                double v = p[a][s][t];
                if (!(v >= 0.0 && v <= 1.0)) return false;
                sum += v;
            }
            if (std::abs(sum - 1.0) > tol) return false;
        }
    }
    return true;
}

TransitionModel TransitionModel::uniform() {
    TransitionModel m;
    for (auto& per_action : m.p)
        for (auto& row : per_action) row.fill(1.0 / kNumStates);
    return m;
}

namespace {

using Counts = std::array<std::array<std::array<long, kNumStates>, kNumStates>, kNumActions>;

void count_transitions(const Trajectory& traj, Counts& counts) {
    for (std::size_t i = 0; i + 1 < traj.steps.size(); ++i) {
        const Step& cur = traj.steps[i];
        const Step& next = traj.steps[i + 1];
        ++counts[action_index(cur.action)][state_index(cur.state)][state_index(next.state)];
    }
}

TransitionModel from_counts(const Counts& counts, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("smoothing alpha must be >= 0");
    TransitionModel m;
    for (int a = 0; a < kNumActions; ++a) {
        for (int s = 0; s < kNumStates; ++s) {
            long row_total = 0;
            for (int t = 0; t < kNumStates; ++t) row_total += counts[a][s][t];
            if (row_total == 0 && alpha == 0.0) {
                m.p[a][s].fill(1.0 / kNumStates);
                continue;
            }
            double denom = static_cast<double>(row_total) + kNumStates * alpha;
            for (int t = 0; t < kNumStates; ++t)
                m.p[a][s][t] = (static_cast<double>(counts[a][s][t]) + alpha) / denom;
        }
    }
    return m;
}

} // namespace

TransitionModel estimate_transitions(const Trajectory& traj, double alpha) {
    Counts counts{};
    count_transitions(traj, counts);
    return from_counts(counts, alpha);
}

TransitionModel estimate_transitions(std::span<const Trajectory> trajectories, double alpha) {
    Counts counts{};
    for (const Trajectory& traj : trajectories) count_transitions(traj, counts);
    return from_counts(counts, alpha);
}

} // namespace dirl
