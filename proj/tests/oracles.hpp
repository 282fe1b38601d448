// Test-only reference implementations, written against the definitions
// rather than the library code so each check has two independent routes.
#pragma once

#include "dirl/core_model.hpp"
#include "dirl/maxent_irl.hpp"
#include "dirl/mdp_encoding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

using dirl::kNumActions;
using dirl::kNumFeatures;
using dirl::kNumPairs;
using dirl::kNumStates;

// Soft Bellman fixed point iterated on Q instead of V.
inline dirl::Policy q_iteration_policy(const std::array<double, kNumPairs>& rewards,
                                       const dirl::TransitionModel& transitions, double gamma,
                                       double tol = 1e-12, int max_sweeps = 1000000) {
    std::array<std::array<double, kNumActions>, kNumStates> q{};
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        std::array<std::array<double, kNumActions>, kNumStates> next{};
        double change = 0.0;
        for (int s = 0; s < kNumStates; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                double acc = rewards[kNumActions * s + a];
                for (int t = 0; t < kNumStates; ++t) {
                    double m = *std::max_element(q[t].begin(), q[t].end());
                    double z = 0.0;
                    for (int b = 0; b < kNumActions; ++b) z += std::exp(q[t][b] - m);
                    acc += gamma * transitions.p[a][s][t] * (m + std::log(z));
                }
                next[s][a] = acc;
                change = std::max(change, std::abs(acc - q[s][a]));
            }
        }
        q = next;
        if (change < tol) break;
    }
    dirl::Policy policy;
    for (int s = 0; s < kNumStates; ++s) {
        double m = *std::max_element(q[s].begin(), q[s].end());
        double z = 0.0;
        for (int a = 0; a < kNumActions; ++a) z += std::exp(q[s][a] - m);
        for (int a = 0; a < kNumActions; ++a) policy.pi[s][a] = std::exp(q[s][a] - m) / z;
    }
    return policy;
}

// Forward occupancy via explicit powers of the state flow matrix
// M[t][s] = sum_a pi(a|s) T[a][s][t].
inline std::array<double, kNumPairs>
matrix_power_visitation(const dirl::Policy& policy, const dirl::TransitionModel& transitions,
                        const std::array<double, kNumStates>& initial, int horizon) {
    std::array<std::array<double, kNumStates>, kNumStates> flow{};
    for (int s = 0; s < kNumStates; ++s)
        for (int a = 0; a < kNumActions; ++a)
            for (int t = 0; t < kNumStates; ++t)
                flow[t][s] += policy.pi[s][a] * transitions.p[a][s][t];

    std::array<double, kNumPairs> occupancy{};
    std::array<double, kNumStates> d = initial;
    for (int k = 0; k < horizon; ++k) {
        for (int s = 0; s < kNumStates; ++s)
            for (int a = 0; a < kNumActions; ++a)
                occupancy[kNumActions * s + a] += d[s] * policy.pi[s][a];
        std::array<double, kNumStates> next{};
        for (int t = 0; t < kNumStates; ++t)
            for (int s = 0; s < kNumStates; ++s) next[t] += flow[t][s] * d[s];
        d = next;
    }
    return occupancy;
}

// Normal equations (F F^T) theta = F r solved by Gaussian elimination with
// partial pivoting.
inline std::array<double, kNumFeatures>
normal_equations_weights(const std::array<double, kNumPairs>& rewards,
                         const dirl::FeatureMatrix& features) {
    constexpr int n = kNumFeatures;
    double a[n][n + 1] = {};
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < kNumPairs; ++j) a[i][k] += features[i][j] * features[k][j];
        for (int j = 0; j < kNumPairs; ++j) a[i][n] += features[i][j] * rewards[j];
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw std::runtime_error("normal equations singular");
        std::swap_ranges(a[pivot], a[pivot] + n + 1, a[col]);
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            double factor = a[row][col] / a[col][col];
            for (int j = col; j <= n; ++j) a[row][j] -= factor * a[col][j];
        }
    }
    std::array<double, kNumFeatures> theta{};
    for (int i = 0; i < n; ++i) theta[i] = a[i][n] / a[i][i];
    return theta;
}

// Direct Laplace estimate from hand-counted consecutive pairs.
inline dirl::TransitionModel laplace_transitions(const dirl::Trajectory& traj, double alpha) {
    long counts[kNumActions][kNumStates][kNumStates] = {};
    for (std::size_t i = 0; i + 1 < traj.steps.size(); ++i)
        ++counts[dirl::action_index(traj.steps[i].action)]
                [dirl::state_index(traj.steps[i].state)]
                [dirl::state_index(traj.steps[i + 1].state)];
    dirl::TransitionModel m;
    for (int a = 0; a < kNumActions; ++a) {
        for (int s = 0; s < kNumStates; ++s) {
            long total = 0;
            for (int t = 0; t < kNumStates; ++t) total += counts[a][s][t];
            for (int t = 0; t < kNumStates; ++t) {
                if (total == 0 && alpha == 0.0)
                    m.p[a][s][t] = 0.25;
                else
                    m.p[a][s][t] = (counts[a][s][t] + alpha) / (total + 4.0 * alpha);
            }
        }
    }
    return m;
}

struct MeanStderr {
    double mean;
    double stderr_;
};

inline MeanStderr brute_mean_stderr(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    double sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(values.size()))};
}

// Rank by counting, then the classic d^2 formula extended with average ties
// via Pearson on ranks; independent of the library's sort-based routine.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto rank_of = [](const std::vector<double>& v, std::size_t i) {
        double smaller = 0.0, equal = 0.0;
        for (double other : v) {
            if (other < v[i]) ++smaller;
            if (other == v[i]) ++equal;
        }
        return smaller + (equal + 1.0) / 2.0;
    };
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> rx(n), ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = rank_of(x, i);
        ry[i] = rank_of(y, i);
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    return cov / std::sqrt(vx * vy);
}

} // namespace oracle
