#include "dirl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace dirl {

namespace {

double next_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53; // 53-bit uniform in [0,1)
}

// Inverse-CDF draw over a probability row; the final index absorbs any
// rounding slack.
template <std::size_t N>
int sample_index(const std::array<double, N>& probs, std::mt19937_64& engine) {
    double u = next_unit(engine);
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        cumulative += probs[i];
        if (u < cumulative) return static_cast<int>(i);
    }
    return static_cast<int>(N - 1);
}

std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

std::string padded_id(const std::string& prefix, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", index);
    return prefix + "_" + buf;
}

} // namespace

std::vector<Trajectory> generate_trajectories(const SimConfig& sim,
                                              const TransitionModel& transitions,
                                              const SolverConfig& solver) {
    if (sim.count < 1 || sim.length < 1)
        throw std::invalid_argument("simulation needs count >= 1 and length >= 1");
    if (!transitions.row_stochastic(1e-9))
        throw std::invalid_argument("transition model is not row-stochastic");

    auto rewards = rewards_from_weights(sim.theta_true, feature_matrix());
    Policy policy = soft_value_iteration(rewards, transitions, solver);

    std::vector<Trajectory> trajectories;
    trajectories.reserve(sim.count);
    for (int i = 0; i < sim.count; ++i) {
        auto engine = engine_for(sim.seed, static_cast<std::uint64_t>(i));
        Trajectory traj;
        traj.user_id = padded_id(sim.user_prefix, i);
        traj.steps.reserve(sim.length);
        int s = sample_index(sim.initial, engine);
        for (int k = 0; k < sim.length; ++k) {
            int a = sample_index(policy.pi[s], engine);
            traj.steps.push_back({static_cast<State>(s), static_cast<Action>(a),
                                  static_cast<std::int64_t>(k + 1)});
            s = sample_index(transitions.p[a][s], engine);
        }
        trajectories.push_back(std::move(traj));
    }
    return trajectories;
}

TransitionModel engagement_transitions() {
    // What the next response looks like is a blend of what the user just did
    // and the momentum of the current engagement: replies attract replies,
    // reshares attract reshares, silence tends to persist. The state term
    // matters: it makes the induced policies state-dependent, so the six
    // feature expectations respond independently to the six weights.
    const std::array<std::array<double, kNumStates>, kNumActions> by_action = {{
        {0.30, 0.15, 0.15, 0.40}, // tw
        {0.40, 0.10, 0.10, 0.40}, // rt
        {0.10, 0.30, 0.30, 0.30}, // rp
        {0.10, 0.10, 0.10, 0.70}, // nt
    }};
    const std::array<std::array<double, kNumStates>, kNumStates> momentum = {{
        {0.55, 0.10, 0.10, 0.25}, // after t
        {0.10, 0.55, 0.10, 0.25}, // after p+
        {0.10, 0.10, 0.55, 0.25}, // after p-
        {0.05, 0.05, 0.05, 0.85}, // after n
    }};
    TransitionModel m;
    for (int a = 0; a < kNumActions; ++a)
        for (int s = 0; s < kNumStates; ++s)
            for (int t = 0; t < kNumStates; ++t)
                m.p[a][s][t] = 0.65 * by_action[a][t] + 0.35 * momentum[s][t];
    return m;
}

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("rank correlation needs two equally sized samples");
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (rx[i] - mean) * (ry[i] - mean);
        var_x += (rx[i] - mean) * (rx[i] - mean);
        var_y += (ry[i] - mean) * (ry[i] - mean);
    }
    if (var_x == 0.0 || var_y == 0.0)
        throw std::invalid_argument("rank correlation undefined for a constant sample");
    return cov / std::sqrt(var_x * var_y);
}

RecoveryReport recovery_experiment(const SimConfig& sim, const TransitionModel& transitions,
                                   const SolverConfig& solver) {
    RecoveryReport report;
    report.true_rewards = rewards_from_weights(sim.theta_true, feature_matrix());

    std::vector<Trajectory> generated = generate_trajectories(sim, transitions, solver);
    report.generated_count = static_cast<int>(generated.size());

    std::vector<Trajectory> eligible;
    for (const Trajectory& traj : generated)
        if (traj.real_action_count() >= solver.min_length &&
            traj.real_response_count() >= solver.min_length)
            eligible.push_back(traj);
    if (eligible.empty()) eligible = generated; // degenerate scale, keep going but flag it
    report.eligible_count = static_cast<int>(eligible.size());

    long usable_steps = 0;
    for (const Trajectory& traj : eligible) usable_steps += static_cast<long>(traj.steps.size());
    report.low_data = usable_steps < kLowDataSteps;

    SolverConfig recover = solver;
    recover.min_length = 1; // the pool was already screened above
    report.profile = estimate_rewards(eligible, feature_matrix(), transitions, recover);
    report.profile.user_id = "recovery";

    auto constant = [](const std::array<double, kNumPairs>& r) {
        for (double v : r)
            if (v != r[0]) return false;
        return true;
    };
    if (constant(report.true_rewards) || constant(report.profile.rewards)) {
        report.rank_defined = false;
        report.spearman_rho = 0.0;
    } else {
        report.spearman_rho =
            spearman_rank_correlation(report.true_rewards, report.profile.rewards);
    }

    report.argmax_agreement = 0;
    for (int s = 0; s < kNumStates; ++s) {
        auto best = [&](const std::array<double, kNumPairs>& r) {
            int arg = 0;
            for (int a = 1; a < kNumActions; ++a)
                if (r[kNumActions * s + a] > r[kNumActions * s + arg]) arg = a;
            return arg;
        };
        if (best(report.true_rewards) == best(report.profile.rewards))
            ++report.argmax_agreement;
    }
    return report;
}

std::vector<RawEvent> trajectories_to_events(std::span<const Trajectory> trajectories,
                                             std::int64_t start_ts) {
    // One step per hour, paired action 30 s after its response. Steps are
    // far apart so a build window like --max-gap-seconds 60 reconstructs
    // the exact step boundaries.
    std::vector<RawEvent> events;
    for (const Trajectory& traj : trajectories) {
        std::int64_t t = start_ts;
        for (const Step& step : traj.steps) {
            if (step.state != State::None) {
                RawEvent ev;
                ev.user_id = traj.user_id;
                ev.ts = t;
                switch (step.state) {
                case State::Reshared: ev.kind = EventKind::GotReshared; break;
                case State::SupportReply:
                    ev.kind = EventKind::GotReply;
                    ev.stance = 0.9;
                    break;
                case State::OpposeReply:
                    ev.kind = EventKind::GotReply;
                    ev.stance = 0.1;
                    break;
                case State::None: break;
                }
                events.push_back(std::move(ev));
            }
            if (step.action != Action::None) {
                RawEvent ev;
                ev.user_id = traj.user_id;
                ev.ts = t + 30;
                switch (step.action) {
                case Action::Tweet: ev.kind = EventKind::OwnPost; break;
                case Action::Retweet: ev.kind = EventKind::OwnReshare; break;
                case Action::Reply: ev.kind = EventKind::OwnReply; break;
                case Action::None: break;
                }
                events.push_back(std::move(ev));
            }
            t += 3600;
        }
    }
    return events;
}

} // namespace dirl
