#include "dirl/maxent_irl.hpp"

#include "dirl/format.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dirl {

void SolverConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie strictly inside (0,1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(gradient_tolerance > 0.0))
        throw std::invalid_argument("gradient tolerance must be > 0");
    if (!(value_iteration_tolerance > 0.0))
        throw std::invalid_argument("value iteration tolerance must be > 0");
    if (value_iteration_max_sweeps < 1)
        throw std::invalid_argument("value iteration sweep cap must be >= 1");
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (min_length < 1) throw std::invalid_argument("min_length must be >= 1");
}

bool Policy::rows_sum_to_one(double tol) const {
    for (int s = 0; s < kNumStates; ++s) {
        double sum = 0.0;
        for (int a = 0; a < kNumActions; ++a) {
            double v = pi[s][a];
            if (!(v >= 0.0 && v <= 1.0)) return false;
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
}

namespace {

// Max-subtraction keeps the exponentials bounded for any finite input.
double logsumexp4(const std::array<double, kNumActions>& x) {
    double m = *std::max_element(x.begin(), x.end());
    double sum = 0.0;
    for (double v : x) sum += std::exp(v - m);
    return m + std::log(sum);
}

} // namespace

Policy soft_value_iteration(const std::array<double, kNumPairs>& rewards,
                            const TransitionModel& transitions, const SolverConfig& config) {
    config.validate();
    for (double r : rewards)
        if (!std::isfinite(r)) throw std::invalid_argument("rewards must be finite");

    std::array<double, kNumStates> value{};
    std::array<std::array<double, kNumActions>, kNumStates> q{};
    double residual = 0.0;
    bool converged = false;

    for (int sweep = 0; sweep < config.value_iteration_max_sweeps; ++sweep) {
        residual = 0.0;
        std::array<double, kNumStates> next_value{};
        for (int s = 0; s < kNumStates; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                double expected = 0.0;
                for (int t = 0; t < kNumStates; ++t)
                    expected += transitions.p[a][s][t] * value[t];
                q[s][a] = rewards[kNumActions * s + a] + config.gamma * expected;
            }
            next_value[s] = logsumexp4(q[s]);
            if (!std::isfinite(next_value[s]))
                throw SolverError("soft value iteration diverged to a non-finite value",
                                  std::numeric_limits<double>::infinity());
            residual = std::max(residual, std::abs(next_value[s] - value[s]));
        }
        value = next_value;
        if (residual < config.value_iteration_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("soft value iteration hit the sweep cap, residual " +
                              format_double(residual),
                          residual);

    // One more backup against the converged values keeps Q and V consistent.
    Policy policy;
    for (int s = 0; s < kNumStates; ++s) {
        for (int a = 0; a < kNumActions; ++a) {
            double expected = 0.0;
            for (int t = 0; t < kNumStates; ++t) expected += transitions.p[a][s][t] * value[t];
            q[s][a] = rewards[kNumActions * s + a] + config.gamma * expected;
        }
        double v = logsumexp4(q[s]);
        double row_sum = 0.0;
        for (int a = 0; a < kNumActions; ++a) {
            policy.pi[s][a] = std::exp(q[s][a] - v);
            row_sum += policy.pi[s][a];
        }
        for (int a = 0; a < kNumActions; ++a) policy.pi[s][a] /= row_sum;
    }
    return policy;
}

std::array<double, kNumPairs> expected_visitation(const Policy& policy,
                                                  const TransitionModel& transitions,
                                                  const std::array<double, kNumStates>& initial,
                                                  int horizon, double discount) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    double mass = 0.0;
    for (double p : initial) {
        if (p < 0.0) throw std::invalid_argument("initial distribution has negative mass");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("initial distribution must sum to 1");

    std::array<double, kNumPairs> occupancy{};
    std::array<double, kNumStates> d = initial;
    double weight = 1.0;
    for (int k = 0; k < horizon; ++k) {
        for (int s = 0; s < kNumStates; ++s)
            for (int a = 0; a < kNumActions; ++a)
                occupancy[kNumActions * s + a] += weight * d[s] * policy.pi[s][a];
        if (k + 1 == horizon) break;
        std::array<double, kNumStates> next{};
        for (int s = 0; s < kNumStates; ++s) {
            if (d[s] == 0.0) continue;
            for (int a = 0; a < kNumActions; ++a) {
                double flow = d[s] * policy.pi[s][a];
                for (int t = 0; t < kNumStates; ++t) next[t] += flow * transitions.p[a][s][t];
            }
        }
        d = next;
        weight *= discount;
    }
    return occupancy;
}

std::array<double, kNumFeatures>
empirical_feature_expectations(std::span<const Trajectory> trajectories,
                               const FeatureMatrix& features) {
    std::size_t total_steps = 0;
    std::array<double, kNumFeatures> sum{};
    for (const Trajectory& traj : trajectories) {
        total_steps += traj.steps.size();
        for (const Step& step : traj.steps) {
            int j = pair_index(step.state, step.action);
            for (int i = 0; i < kNumFeatures; ++i) sum[i] += features[i][j];
        }
    }
    if (total_steps == 0)
        throw std::invalid_argument("feature expectations need a non-empty trajectory");
    for (double& v : sum) v /= static_cast<double>(total_steps);
    return sum;
}

std::array<double, kNumFeatures> empirical_feature_expectations(const Trajectory& traj,
                                                                const FeatureMatrix& features) {
    return empirical_feature_expectations(std::span<const Trajectory>(&traj, 1), features);
}

std::array<double, kNumStates>
empirical_initial_distribution(std::span<const Trajectory> trajectories) {
    std::array<double, kNumStates> dist{};
    int n = 0;
    for (const Trajectory& traj : trajectories) {
        if (traj.steps.empty()) continue;
        dist[state_index(traj.steps.front().state)] += 1.0;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("initial distribution needs a non-empty trajectory");
    for (double& v : dist) v /= n;
    return dist;
}

namespace {

// Discounted per-step feature average, the matching target when gamma is
// pushed into the accumulation.
std::array<double, kNumFeatures>
discounted_feature_expectations(std::span<const Trajectory> trajectories,
                                const FeatureMatrix& features, double gamma) {
    std::array<double, kNumFeatures> sum{};
    double total_weight = 0.0;
    for (const Trajectory& traj : trajectories) {
        double w = 1.0;
        for (const Step& step : traj.steps) {
            int j = pair_index(step.state, step.action);
            for (int i = 0; i < kNumFeatures; ++i) sum[i] += w * features[i][j];
            total_weight += w;
            w *= gamma;
        }
    }
    if (total_weight == 0.0)
        throw std::invalid_argument("feature expectations need a non-empty trajectory");
    for (double& v : sum) v /= total_weight;
    return sum;
}

int mean_length(std::span<const Trajectory> trajectories) {
    std::size_t total = 0;
    for (const Trajectory& traj : trajectories) total += traj.steps.size();
    double mean = static_cast<double>(total) / static_cast<double>(trajectories.size());
    return std::max(1, static_cast<int>(std::lround(mean)));
}

} // namespace

RewardProfile estimate_rewards(std::span<const Trajectory> trajectories,
                               const FeatureMatrix& features,
                               const TransitionModel& transitions, const SolverConfig& config) {
    config.validate();
    if (trajectories.empty())
        throw std::invalid_argument("estimate_rewards needs at least one trajectory");
    long actions = 0, responses = 0;
    for (const Trajectory& traj : trajectories) {
        actions += traj.real_action_count();
        responses += traj.real_response_count();
    }
    if (actions < config.min_length || responses < config.min_length)
        throw std::invalid_argument("trajectory below the eligibility minimum of " +
                                    std::to_string(config.min_length));

    const int horizon = config.horizon > 0 ? config.horizon : mean_length(trajectories);
    const double feature_discount = config.discount_features ? config.gamma : 1.0;
    const std::array<double, kNumStates> initial = empirical_initial_distribution(trajectories);
    const std::array<double, kNumFeatures> empirical =
        config.discount_features
            ? discounted_feature_expectations(trajectories, features, config.gamma)
            : empirical_feature_expectations(trajectories, features);
    // With feature discounting the occupancy mass is the geometric sum, not
    // the horizon; normalize by whatever mass the forward pass distributes.
    double occupancy_mass = 0.0;
    {
        double w = 1.0;
        for (int k = 0; k < horizon; ++k, w *= feature_discount) occupancy_mass += w;
    }

    std::array<double, kNumFeatures> theta{};
    if (config.theta_init == SolverConfig::ThetaInit::Random) {
        std::mt19937_64 engine(config.seed);
        for (double& w : theta)
            w = (static_cast<double>(engine() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    } else if (config.theta_init == SolverConfig::ThetaInit::Custom) {
        theta = config.theta_start;
    }

    RewardProfile profile;
    profile.user_id = trajectories.front().user_id;
    double grad_norm = 0.0;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        auto rewards = rewards_from_weights(theta, features);
        Policy policy = soft_value_iteration(rewards, transitions, config);
        auto occupancy =
            expected_visitation(policy, transitions, initial, horizon, feature_discount);

        std::array<double, kNumFeatures> model{};
        for (int i = 0; i < kNumFeatures; ++i) {
            for (int j = 0; j < kNumPairs; ++j)
                model[i] += features[i][j] * occupancy[j] / occupancy_mass;
        }

        grad_norm = 0.0;
        std::array<double, kNumFeatures> grad{};
        for (int i = 0; i < kNumFeatures; ++i) {
            grad[i] = empirical[i] - model[i];
            grad_norm = std::max(grad_norm, std::abs(grad[i]));
        }
        profile.iterations = iter + 1;
        if (grad_norm < config.gradient_tolerance) {
            profile.converged = true;
            break;
        }
        for (int i = 0; i < kNumFeatures; ++i) theta[i] += config.learning_rate * grad[i];
        if (!std::isfinite(theta[0]))
            throw SolverError("gradient ascent diverged", grad_norm);
    }
    profile.final_gradient_norm = grad_norm;
    profile.weights = theta;
    profile.rewards = rewards_from_weights(theta, features);
    return profile;
}

RewardProfile estimate_rewards(const Trajectory& traj, const FeatureMatrix& features,
                               const TransitionModel& transitions, const SolverConfig& config) {
    return estimate_rewards(std::span<const Trajectory>(&traj, 1), features, transitions, config);
}

std::array<double, kNumFeatures> extract_weights(const std::array<double, kNumPairs>& rewards,
                                                 const FeatureMatrix& features) {
    Eigen::Matrix<double, kNumPairs, kNumFeatures> ft;
    for (int i = 0; i < kNumFeatures; ++i)
        for (int j = 0; j < kNumPairs; ++j) ft(j, i) = features[i][j];
    Eigen::Matrix<double, kNumPairs, 1> r;
    for (int j = 0; j < kNumPairs; ++j) r(j) = rewards[j];

    Eigen::Matrix<double, kNumFeatures, 1> theta = ft.colPivHouseholderQr().solve(r);
    std::array<double, kNumFeatures> out{};
    for (int i = 0; i < kNumFeatures; ++i) out[i] = theta(i);
    return out;
}

std::array<double, kNumPairs> rewards_from_weights(const std::array<double, kNumFeatures>& theta,
                                                   const FeatureMatrix& features) {
    std::array<double, kNumPairs> rewards{};
    for (int j = 0; j < kNumPairs; ++j)
        for (int i = 0; i < kNumFeatures; ++i) rewards[j] += theta[i] * features[i][j];
    return rewards;
}

void write_profiles(std::ostream& out, std::span<const RewardProfile> profiles) {
    out << "user_id,converged,grad_norm";
    for (int j = 0; j < kNumPairs; ++j) out << ",r_" << j;
    for (int i = 0; i < kNumFeatures; ++i) out << ",w_" << feature_name(i);
    out << '\n';
    for (const RewardProfile& p : profiles) {
        out << p.user_id << ',' << (p.converged ? 1 : 0) << ','
            << format_double(p.final_gradient_norm);
        for (double r : p.rewards) out << ',' << format_double(r);
        for (double w : p.weights) out << ',' << format_double(w);
        out << '\n';
    }
    if (!out) throw std::runtime_error("I/O failure while writing profiles");
}

std::vector<RewardProfile> read_profiles(std::istream& in) {
    if (!in) throw std::runtime_error("profile stream unreadable");
    std::vector<RewardProfile> profiles;
    std::string line;
    std::size_t line_no = 0;
    constexpr std::size_t kFields = 3 + kNumPairs + kNumFeatures;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (line_no == 1 && trimmed.substr(0, 7) == "user_id") continue;
        auto fields = split(trimmed, ',');
        if (fields.size() != kFields)
            throw std::runtime_error("profile file line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(kFields) + " fields");
        RewardProfile p;
        p.user_id = fields[0];
        p.converged = fields[1] == "1";
        p.final_gradient_norm = std::stod(fields[2]);
        for (int j = 0; j < kNumPairs; ++j) p.rewards[j] = std::stod(fields[3 + j]);
        for (int i = 0; i < kNumFeatures; ++i)
            p.weights[i] = std::stod(fields[3 + kNumPairs + i]);
        profiles.push_back(std::move(p));
    }
    if (in.bad()) throw std::runtime_error("I/O failure while reading profiles");
    return profiles;
}

} // namespace dirl
