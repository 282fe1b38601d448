#pragma once

#include "dirl/core_model.hpp"
#include "dirl/ingestion.hpp"
#include "dirl/maxent_irl.hpp"
#include "dirl/mdp_encoding.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dirl {

// Forward model: samples trajectories from the soft-value-iteration policy
// of a known weight vector, so reward recovery can be validated without
// platform data.
struct SimConfig {
    std::array<double, kNumFeatures> theta_true{};
    int count = 1;  // trajectories (one synthetic user each)
    int length = 1; // steps per trajectory
    std::uint64_t seed = 0;
    std::string user_prefix = "sim";
    std::array<double, kNumStates> initial{0.25, 0.25, 0.25, 0.25};
};

// Sampling is reproducible across standard library implementations: each
// trajectory uses its own std::mt19937_64 engine seeded through
// std::seed_seq{seed_lo, seed_hi, index_lo, index_hi}, and categorical draws
// walk the cumulative row with u = (engine() >> 11) * 2^-53.
std::vector<Trajectory> generate_trajectories(const SimConfig& sim,
                                              const TransitionModel& transitions,
                                              const SolverConfig& solver);

// Action-dependent response mix: posting and resharing mostly attract
// reshares or silence, replying attracts replies, inaction attracts little.
TransitionModel engagement_transitions();

struct RecoveryReport {
    double spearman_rho = 0.0;
    // Rank correlation is undefined when either reward vector is constant
    // (a zero theta, say); spearman_rho is 0 and this flag is false then.
    bool rank_defined = true;
    int argmax_agreement = 0; // states where true and recovered best action match, 0..4
    bool low_data = false;    // fewer than kLowDataSteps usable steps
    int generated_count = 0;
    int eligible_count = 0;
    std::array<double, kNumPairs> true_rewards{};
    RewardProfile profile;
};

inline constexpr long kLowDataSteps = 100;

// Simulate-then-recover: samples trajectories from theta_true, keeps the
// eligible ones (all of them when the filter would leave nothing), runs
// estimate_rewards against the same transition model, and scores rank
// agreement between true and recovered rewards.
RecoveryReport recovery_experiment(const SimConfig& sim, const TransitionModel& transitions,
                                   const SolverConfig& solver);

// Spearman rank correlation with average ranks on ties.
double spearman_rank_correlation(std::span<const double> x, std::span<const double> y);

// Renders sampled steps as an ingestion-format event log. Steps (n, nt)
// carry no event and are not representable. An unwindowed rebuild merges a
// (s, nt) step directly followed by (n, a) into one (s, a) step; rebuilding
// with a pairing window below the one-hour step spacing (say
// --max-gap-seconds 60) reconstructs the remaining steps exactly. Support
// replies carry stance 0.9, opposing ones 0.1, so both standard and strict
// 0.7/0.3 thresholds classify them.
std::vector<RawEvent> trajectories_to_events(std::span<const Trajectory> trajectories,
                                             std::int64_t start_ts = 1650000000);

} // namespace dirl
