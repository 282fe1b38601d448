#include "dirl/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

dirl::StanceThresholds stance_from_flags(const std::string& mode, double hi, double lo) {
    if (mode == "standard") return dirl::StanceThresholds::standard();
    if (mode == "strict") return dirl::StanceThresholds::strict_mode(hi, lo);
    throw CLI::ValidationError("--stance-mode", "must be 'standard' or 'strict'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioral-strategy reconstruction from social-media event logs:\n"
                 "per-user MDP trajectories, maximum-entropy IRL reward recovery and\n"
                 "cohort-level reporting."};
    app.require_subcommand(1);

    // ---- build ----
    dirl::BuildOptions build;
    std::string stance_mode = "standard";
    double stance_hi = 0.7, stance_lo = 0.3;
    std::int64_t max_gap = 0;
    auto* cmd_build = app.add_subcommand("build", "Parse an event log and write the trajectory store");
    cmd_build->add_option("--events", build.events_path, "event log (JSON lines)")->required();
    cmd_build->add_option("--labels", build.labels_path, "label file (user_id,bot_score)")->required();
    cmd_build->add_option("--out", build.out_path, "trajectory store to write")->required();
    cmd_build->add_option("--bot-threshold", build.bot_threshold, "bot if score > threshold");
    cmd_build->add_option("--stance-mode", stance_mode, "standard|strict");
    cmd_build->add_option("--stance-hi", stance_hi, "strict-mode support bound");
    cmd_build->add_option("--stance-lo", stance_lo, "strict-mode oppose bound");
    cmd_build->add_flag("--strict-parse", build.strict_parse, "abort on the first malformed line");
    cmd_build->add_option("--min-actions", build.gates.min_actions, "eligibility: own actions");
    cmd_build->add_option("--min-responses", build.gates.min_responses, "eligibility: network responses");
    cmd_build->add_option("--max-gap-seconds", max_gap, "pairing window; 0 = unlimited");

    // ---- estimate ----
    dirl::EstimateOptions estimate;
    std::string theta_init = "zero";
    auto* cmd_estimate = app.add_subcommand("estimate", "Recover per-user rewards from a trajectory store");
    cmd_estimate->add_option("--store", estimate.store_path, "trajectory store")->required();
    cmd_estimate->add_option("--out", estimate.out_path, "profile file to write")->required();
    cmd_estimate->add_option("--gamma", estimate.solver.gamma, "discount factor in (0,1)");
    cmd_estimate->add_option("--learning-rate", estimate.solver.learning_rate, "gradient step");
    cmd_estimate->add_option("--max-iterations", estimate.solver.max_iterations, "gradient ascent cap");
    cmd_estimate->add_option("--grad-tol", estimate.solver.gradient_tolerance, "gradient sup-norm stop");
    cmd_estimate->add_option("--vi-tol", estimate.solver.value_iteration_tolerance, "value sweep stop");
    cmd_estimate->add_option("--horizon", estimate.solver.horizon, "visitation rollout; 0 = trajectory length");
    cmd_estimate->add_option("--min-length", estimate.solver.min_length, "eligibility: actions and responses");
    cmd_estimate->add_option("--alpha", estimate.transition_alpha, "transition smoothing");
    cmd_estimate->add_flag("--pool-transitions", estimate.pool_transitions, "share one transition model");
    cmd_estimate->add_flag("--discount-features", estimate.solver.discount_features,
                           "apply gamma inside feature expectations");
    cmd_estimate->add_option("--theta-init", theta_init, "zero|random");
    cmd_estimate->add_option("--seed", estimate.solver.seed, "seed for random theta init");
    cmd_estimate->add_option("--jobs", estimate.jobs, "worker cap; 0 = hardware concurrency");

    // ---- simulate ----
    dirl::SimulateOptions simulate;
    std::vector<double> theta;
    auto* cmd_simulate = app.add_subcommand("simulate", "Sample synthetic users and score reward recovery");
    cmd_simulate->add_option("--theta", theta, "true weights: t p+ p- tw rt rp")
        ->required()
        ->delimiter(',')
        ->expected(dirl::kNumFeatures);
    cmd_simulate->add_option("--count", simulate.count, "synthetic users");
    cmd_simulate->add_option("--length", simulate.length, "steps per user");
    cmd_simulate->add_option("--seed", simulate.seed, "sampling seed");
    cmd_simulate->add_option("--out", simulate.out_path, "event log to write")->required();
    cmd_simulate->add_option("--user-prefix", simulate.user_prefix, "synthetic user id prefix");
    cmd_simulate->add_option("--transitions", simulate.transitions, "engagement|uniform");
    cmd_simulate->add_option("--gamma", simulate.solver.gamma, "discount factor in (0,1)");
    cmd_simulate->add_option("--min-length", simulate.solver.min_length, "recovery eligibility gate");

    // ---- report ----
    dirl::ReportOptions report;
    std::string format = "both";
    auto* cmd_report = app.add_subcommand("report", "Aggregate profiles into cohort tables");
    cmd_report->add_option("--profiles", report.profiles_path, "profile file")->required();
    cmd_report->add_option("--labels", report.labels_path, "label file")->required();
    cmd_report->add_option("--out-dir", report.out_dir, "report directory")->required();
    cmd_report->add_option("--bot-threshold", report.bot_threshold, "bot if score > threshold");
    cmd_report->add_option("--format", format, "delimited|structured|both");
    cmd_report->add_flag("--converged-only", report.converged_only, "drop non-converged profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? dirl::kExitOk : dirl::kExitInputError;
    }

    try {
        if (cmd_build->parsed()) {
            build.stance = stance_from_flags(stance_mode, stance_hi, stance_lo);
            if (max_gap > 0) build.max_gap_seconds = max_gap;
            return dirl::cmd_build(build);
        }
        if (cmd_estimate->parsed()) {
            if (theta_init == "random") {
                estimate.solver.theta_init = dirl::SolverConfig::ThetaInit::Random;
            } else if (theta_init != "zero") {
                throw std::invalid_argument("--theta-init must be 'zero' or 'random'");
            }
            return dirl::cmd_estimate(estimate);
        }
        if (cmd_simulate->parsed()) {
            for (int i = 0; i < dirl::kNumFeatures; ++i) simulate.theta[i] = theta[i];
            return dirl::cmd_simulate(simulate);
        }
        if (cmd_report->parsed()) {
            if (format == "delimited") {
                report.format = dirl::ReportFormat::Delimited;
            } else if (format == "structured") {
                report.format = dirl::ReportFormat::Structured;
            } else if (format == "both") {
                report.format = dirl::ReportFormat::Both;
            } else {
                throw std::invalid_argument("--format must be delimited, structured or both");
            }
            return dirl::cmd_report(report);
        }
    } catch (const std::exception& e) {
        std::cerr << "dirl: " << e.what() << '\n';
        return dirl::kExitInputError;
    }
    return dirl::kExitInputError;
}
