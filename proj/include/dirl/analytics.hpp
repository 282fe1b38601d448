#pragma once

#include "dirl/core_model.hpp"
#include "dirl/ingestion.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dirl {

// Per-cohort aggregate over reward profiles. Weights are aggregated twice:
// once as trained (the solver's theta) and once re-extracted from the reward
// vectors by least squares, since the two read differently off a
// non-converged run.
struct CohortReport {
    std::string cohort; // "all", "bot", "human" or "unlabeled"
    int user_count = 0;
    int converged_count = 0;
    bool single_user = false; // stderr reported as 0 by convention

    std::array<double, kNumPairs> mean_reward{};
    std::array<double, kNumPairs> stderr_reward{};
    std::array<double, kNumFeatures> mean_weight{};
    std::array<double, kNumFeatures> stderr_weight{};
    std::array<double, kNumFeatures> mean_extracted_weight{};
    std::array<double, kNumFeatures> stderr_extracted_weight{};
};

struct AggregateOptions {
    bool converged_only = false;
};

// Groups profiles by label cohort (profiles without a label fall under
// `unlabeled`) and computes means with stderr = sample std / sqrt(n).
// Cohorts come back in fixed order (all, bot, human, unlabeled); empty ones
// are omitted with a diagnostic.
std::vector<CohortReport> aggregate_cohorts(std::span<const RewardProfile> profiles,
                                            std::span<const UserLabel> labels,
                                            const AggregateOptions& options = {},
                                            std::vector<std::string>* diagnostics = nullptr);

struct TokenScore {
    std::string token;
    double score; // positive: support-indicative, negative: opposition-indicative
};

// Smoothed log odds ratio of per-token counts between the two corpora,
// sorted by descending score (ties broken by token for determinism).
std::vector<TokenScore> log_odds_tokens(const std::map<std::string, long>& support_counts,
                                        const std::map<std::string, long>& oppose_counts,
                                        double smoothing = 0.5);

enum class ReportFormat : int { Delimited = 0, Structured = 1, Both = 2 };

// Writes the cohort tables under out_dir:
//   reward_heatmap.csv       cohort x 16 pairs, mean rewards (16 rows per cohort)
//   reward_mean_stderr.csv   per-pair mean and stderr with user counts
//   feature_weights.csv      cohort x 6 features, trained and extracted
// plus, in structured mode, report_<cohort>.json mirrors. Identical inputs
// produce byte-identical files.
void emit_report(std::span<const CohortReport> reports, const std::filesystem::path& out_dir,
                 ReportFormat format);

} // namespace dirl
