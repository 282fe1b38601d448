#pragma once

#include "dirl/core_model.hpp"
#include "dirl/mdp_encoding.hpp"

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace dirl {

struct SolverConfig {
    double gamma = 0.9;          // discount factor, strictly inside (0,1)
    double learning_rate = 0.1;  // gradient ascent step on theta
    int max_iterations = 500;    // gradient ascent cap
    double gradient_tolerance = 1e-3;        // sup-norm stop on the feature gap
    double value_iteration_tolerance = 1e-8; // sup-norm stop on the value sweep
    int value_iteration_max_sweeps = 100000;
    // Rollout length of the expected-visitation pass; 0 means "use the mean
    // trajectory length", the data scale the estimate should match.
    int horizon = 0;
    std::uint64_t seed = 0;
    // Both-actions-and-responses eligibility gate enforced by estimate_rewards.
    int min_length = 5;
    // Apply gamma inside feature-expectation accumulation (both the empirical
    // and the model side) instead of only inside planning.
    bool discount_features = false;
    enum class ThetaInit { Zero, Random, Custom };
    ThetaInit theta_init = ThetaInit::Zero;
    std::array<double, kNumFeatures> theta_start{}; // used when theta_init == Custom

    void validate() const; // throws std::invalid_argument
};

// Stochastic policy pi[s][a]; every row sums to 1.
struct Policy {
    std::array<std::array<double, kNumActions>, kNumStates> pi{};

    bool rows_sum_to_one(double tol = 1e-9) const;
};

// Thrown when a fixed-point pass fails to converge within its sweep cap.
struct SolverError : std::runtime_error {
    double residual;

    SolverError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
};

// Soft (log-sum-exp) Bellman fixed point:
//   Q(s,a) = R(s,a) + gamma * sum_s' T[a][s][s'] V(s'),  V(s) = logsumexp_a Q(s,a)
// iterated until the sup-norm change of V drops below the tolerance, then
// pi(a|s) = exp(Q(s,a) - V(s)).
Policy soft_value_iteration(const std::array<double, kNumPairs>& rewards,
                            const TransitionModel& transitions, const SolverConfig& config);

// Forward pass: D_1 = initial, D_{k+1}(s') = sum_{s,a} D_k(s) pi(a|s) T[a][s][s'].
// Returns the pair-level occupancy E[s,a] = sum_k discount^{k-1} D_k(s) pi(a|s)
// flattened by pair_index. With discount = 1 the entries sum to `horizon`.
std::array<double, kNumPairs> expected_visitation(const Policy& policy,
                                                  const TransitionModel& transitions,
                                                  const std::array<double, kNumStates>& initial,
                                                  int horizon, double discount = 1.0);

// Mean feature vector along the trajectory. Throws on an empty trajectory.
std::array<double, kNumFeatures> empirical_feature_expectations(const Trajectory& traj,
                                                                const FeatureMatrix& features);

// Pooled mean over all steps of all trajectories.
std::array<double, kNumFeatures>
empirical_feature_expectations(std::span<const Trajectory> trajectories,
                               const FeatureMatrix& features);

// Frequency of first states across trajectories; a single trajectory yields
// a point mass on its first state.
std::array<double, kNumStates>
empirical_initial_distribution(std::span<const Trajectory> trajectories);

// Maximum-entropy IRL: gradient ascent on theta matching the model's
// feature expectations to the empirical ones. The returned rewards are
// theta^T F under the final theta.
RewardProfile estimate_rewards(std::span<const Trajectory> trajectories,
                               const FeatureMatrix& features,
                               const TransitionModel& transitions, const SolverConfig& config);

RewardProfile estimate_rewards(const Trajectory& traj, const FeatureMatrix& features,
                               const TransitionModel& transitions, const SolverConfig& config);

// Least-squares solution of F^T theta = rewards (F has rank 6, so it is
// unique). Inverts the linear reward model to read feature importances off
// an estimated reward vector.
std::array<double, kNumFeatures> extract_weights(const std::array<double, kNumPairs>& rewards,
                                                 const FeatureMatrix& features);

// rewards[j] = sum_i theta[i] * F[i][j]
std::array<double, kNumPairs> rewards_from_weights(const std::array<double, kNumFeatures>& theta,
                                                   const FeatureMatrix& features);

// Per-user output record:
//   user_id,converged,grad_norm,r_0..r_15,w_t,w_p+,w_p-,w_tw,w_rt,w_rp
void write_profiles(std::ostream& out, std::span<const RewardProfile> profiles);

std::vector<RewardProfile> read_profiles(std::istream& in);

} // namespace dirl
