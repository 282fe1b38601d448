#include "dirl/cli.hpp"

#include "dirl/format.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

namespace dirl {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

int report_error(const char* command, const std::exception& e) {
    std::cerr << command << ": error: " << e.what() << '\n';
    return kExitInputError;
}

} // namespace

int cmd_build(const BuildOptions& options) {
    try {
        auto events_in = open_in(options.events_path);
        ParseResult parsed = parse_events(events_in, options.strict_parse);
        for (const std::string& diag : parsed.diagnostics)
            std::cerr << "build: skipped " << diag << '\n';

        auto labels_in = open_in(options.labels_path);
        LabelParseResult labels = parse_labels(labels_in, options.bot_threshold,
                                               options.strict_parse);
        for (const std::string& diag : labels.diagnostics)
            std::cerr << "build: label " << diag << '\n';

        std::size_t dropped = drop_unclassified_replies(parsed.events, options.stance);

        BuildConfig build_config{options.stance, options.max_gap_seconds};
        auto groups = group_by_user(parsed.events);
        std::vector<Trajectory> trajectories;
        trajectories.reserve(groups.size());
        for (auto& [user, user_events] : groups)
            trajectories.push_back(build_trajectory(user, user_events, build_config));

        std::size_t users_in = trajectories.size();
        trajectories = filter_eligible(std::move(trajectories), options.gates);
        std::size_t steps = 0;
        for (const Trajectory& t : trajectories) steps += t.steps.size();

        std::size_t bots = 0, humans = 0;
        for (const UserLabel& l : labels.labels)
            (l.cohort == Cohort::Bot ? bots : humans) += 1;

        std::cout << "build: users_in=" << users_in << " users_eligible=" << trajectories.size()
                  << " steps=" << steps << " events=" << parsed.events.size()
                  << " malformed=" << parsed.malformed << " replies_dropped=" << dropped
                  << " labels_bot=" << bots << " labels_human=" << humans << '\n';

        if (users_in == 0) {
            std::cerr << "build: no users in input\n";
            return kExitEmptyResult;
        }
        if (trajectories.empty()) {
            std::cerr << "build: no user passes the eligibility gates\n";
            return kExitEmptyResult;
        }

        auto out = open_out(options.out_path);
        write_trajectory_store(out, trajectories);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error("build", e);
    }
}

int cmd_estimate(const EstimateOptions& options) {
    try {
        options.solver.validate();
        auto in = open_in(options.store_path);
        std::vector<Trajectory> trajectories = read_trajectory_store(in);

        EligibilityGates gates{options.solver.min_length, options.solver.min_length};
        trajectories = filter_eligible(std::move(trajectories), gates);
        std::sort(trajectories.begin(), trajectories.end(),
                  [](const Trajectory& a, const Trajectory& b) { return a.user_id < b.user_id; });
        std::cout << "estimate: users_eligible=" << trajectories.size()
                  << " min_length=" << options.solver.min_length
                  << " gamma=" << format_double(options.solver.gamma) << '\n';
        if (trajectories.empty()) {
            std::cerr << "estimate: no eligible trajectories in store\n";
            return kExitEmptyResult;
        }

        std::optional<TransitionModel> pooled;
        if (options.pool_transitions)
            pooled = estimate_transitions(std::span<const Trajectory>(trajectories),
                                          options.transition_alpha);

        // Work pool: user i writes slot i, so the output order is the sorted
        // user order for any worker count.
        std::vector<RewardProfile> profiles(trajectories.size());
        std::vector<std::string> failures(trajectories.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= trajectories.size()) break;
                try {
                    TransitionModel transitions =
                        pooled ? *pooled
                               : estimate_transitions(trajectories[i], options.transition_alpha);
                    profiles[i] = estimate_rewards(trajectories[i], feature_matrix(),
                                                   transitions, options.solver);
                } catch (const std::exception& e) {
                    failures[i] = e.what();
                }
            }
        };
        unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                         : std::max(1u, std::thread::hardware_concurrency());
        jobs = std::min<unsigned>(jobs, trajectories.size());
        if (jobs <= 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
            for (std::thread& t : threads) t.join();
        }

        std::vector<RewardProfile> ok;
        ok.reserve(profiles.size());
        std::size_t converged = 0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (!failures[i].empty()) {
                std::cerr << "estimate: user " << trajectories[i].user_id << " failed: "
                          << failures[i] << '\n';
                continue;
            }
            if (profiles[i].converged) ++converged;
            ok.push_back(std::move(profiles[i]));
        }
        if (ok.empty()) {
            std::cerr << "estimate: every user failed\n";
            return kExitEmptyResult;
        }
        std::cout << "estimate: profiles=" << ok.size() << " converged=" << converged << '\n';

        auto out = open_out(options.out_path);
        write_profiles(out, ok);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error("estimate", e);
    }
}

int cmd_simulate(const SimulateOptions& options) {
    try {
        options.solver.validate();
        TransitionModel transitions;
        if (options.transitions == "uniform") {
            transitions = TransitionModel::uniform();
        } else if (options.transitions == "engagement") {
            transitions = engagement_transitions();
        } else {
            throw std::invalid_argument("unknown transition preset: " + options.transitions);
        }

        SimConfig sim;
        sim.theta_true = options.theta;
        sim.count = options.count;
        sim.length = options.length;
        sim.seed = options.seed;
        sim.user_prefix = options.user_prefix;

        RecoveryReport report = recovery_experiment(sim, transitions, options.solver);

        auto trajectories = generate_trajectories(sim, transitions, options.solver);
        auto events = trajectories_to_events(trajectories);
        auto out = open_out(options.out_path);
        write_events(out, events);

        std::cout << "simulate: users=" << report.generated_count
                  << " eligible=" << report.eligible_count << " spearman_rho="
                  << (report.rank_defined ? format_double(report.spearman_rho) : "undefined")
                  << " argmax_agreement=" << report.argmax_agreement << "/4"
                  << " converged=" << (report.profile.converged ? 1 : 0)
                  << (report.low_data ? " low_data=1" : "") << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error("simulate", e);
    }
}

int cmd_report(const ReportOptions& options) {
    try {
        auto profiles_in = open_in(options.profiles_path);
        std::vector<RewardProfile> profiles = read_profiles(profiles_in);
        if (profiles.empty()) {
            std::cerr << "report: no profiles in input\n";
            return kExitEmptyResult;
        }

        auto labels_in = open_in(options.labels_path);
        LabelParseResult labels = parse_labels(labels_in, options.bot_threshold);

        AggregateOptions aggregate{options.converged_only};
        std::vector<std::string> diagnostics;
        auto reports = aggregate_cohorts(profiles, labels.labels, aggregate, &diagnostics);
        for (const std::string& diag : diagnostics) std::cerr << "report: " << diag << '\n';
        if (reports.empty()) {
            std::cerr << "report: nothing to aggregate\n";
            return kExitEmptyResult;
        }

        emit_report(reports, options.out_dir, options.format);
        std::cout << "report: cohorts=" << reports.size() << " out=" << options.out_dir << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error("report", e);
    }
}

} // namespace dirl
