#pragma once

#include "dirl/analytics.hpp"
#include "dirl/ingestion.hpp"
#include "dirl/maxent_irl.hpp"
#include "dirl/simulator.hpp"
#include "dirl/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dirl {

// Stable exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyResult = 3;

struct BuildOptions {
    std::string events_path;
    std::string labels_path;
    std::string out_path;
    double bot_threshold = 0.5;
    StanceThresholds stance = StanceThresholds::standard();
    bool strict_parse = false;
    EligibilityGates gates;
    std::optional<std::int64_t> max_gap_seconds;
};

// Parse, threshold, build trajectories, filter, write the store. Prints a
// one-line summary with input/eligible/step counts.
int cmd_build(const BuildOptions& options);

struct EstimateOptions {
    std::string store_path;
    std::string out_path;
    SolverConfig solver;
    double transition_alpha = 1.0;
    bool pool_transitions = false;
    int jobs = 0; // 0 = hardware concurrency
};

// One profile row per eligible stored user, ordered by user_id regardless
// of worker scheduling.
int cmd_estimate(const EstimateOptions& options);

struct SimulateOptions {
    std::array<double, kNumFeatures> theta{};
    int count = 1;
    int length = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string user_prefix = "sim";
    std::string transitions = "engagement"; // or "uniform"
    SolverConfig solver;
};

// Emits a synthetic event log in the ingestion format and prints the
// simulate-then-recover metrics.
int cmd_simulate(const SimulateOptions& options);

struct ReportOptions {
    std::string profiles_path;
    std::string labels_path;
    std::string out_dir;
    double bot_threshold = 0.5;
    ReportFormat format = ReportFormat::Both;
    bool converged_only = false;
};

int cmd_report(const ReportOptions& options);

} // namespace dirl
