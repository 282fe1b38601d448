#include "dirl/analytics.hpp"

#include "dirl/format.hpp"
#include "dirl/maxent_irl.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dirl {

namespace {

// Mean and standard error (sample std with n-1, over sqrt n) of one
// component across profiles. Single observations report 0.
template <typename Getter>
void mean_stderr(std::span<const RewardProfile* const> group, Getter get, double& mean_out,
                 double& stderr_out) {
    const std::size_t n = group.size();
    double sum = 0.0;
    for (const RewardProfile* p : group) sum += get(*p);
    mean_out = sum / static_cast<double>(n);
    if (n < 2) {
        stderr_out = 0.0;
        return;
    }
    double sq = 0.0;
    for (const RewardProfile* p : group) {
        double d = get(*p) - mean_out;
        sq += d * d;
    }
    double sample_var = sq / static_cast<double>(n - 1);
    stderr_out = std::sqrt(sample_var / static_cast<double>(n));
}

CohortReport summarize(const std::string& name, std::span<const RewardProfile* const> group) {
    CohortReport report;
    report.cohort = name;
    report.user_count = static_cast<int>(group.size());
    report.single_user = group.size() == 1;
    for (const RewardProfile* p : group)
        if (p->converged) ++report.converged_count;

    for (int j = 0; j < kNumPairs; ++j)
        mean_stderr(
            group, [j](const RewardProfile& p) { return p.rewards[j]; }, report.mean_reward[j],
            report.stderr_reward[j]);
    for (int i = 0; i < kNumFeatures; ++i)
        mean_stderr(
            group, [i](const RewardProfile& p) { return p.weights[i]; }, report.mean_weight[i],
            report.stderr_weight[i]);

    std::vector<std::array<double, kNumFeatures>> extracted;
    extracted.reserve(group.size());
    for (const RewardProfile* p : group)
        extracted.push_back(extract_weights(p->rewards, feature_matrix()));
    for (int i = 0; i < kNumFeatures; ++i) {
        const std::size_t n = extracted.size();
        double sum = 0.0;
        for (const auto& w : extracted) sum += w[i];
        report.mean_extracted_weight[i] = sum / static_cast<double>(n);
        if (n < 2) {
            report.stderr_extracted_weight[i] = 0.0;
            continue;
        }
        double sq = 0.0;
        for (const auto& w : extracted) {
            double d = w[i] - report.mean_extracted_weight[i];
            sq += d * d;
        }
        report.stderr_extracted_weight[i] =
            std::sqrt(sq / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return report;
}

} // namespace

std::vector<CohortReport> aggregate_cohorts(std::span<const RewardProfile> profiles,
                                            std::span<const UserLabel> labels,
                                            const AggregateOptions& options,
                                            std::vector<std::string>* diagnostics) {
    std::vector<const RewardProfile*> all, bots, humans, unlabeled;
    for (const RewardProfile& p : profiles) {
        if (options.converged_only && !p.converged) continue;
        all.push_back(&p);
        const UserLabel* label = find_label(labels, p.user_id);
        if (!label) {
            unlabeled.push_back(&p);
        } else if (label->cohort == Cohort::Bot) {
            bots.push_back(&p);
        } else {
            humans.push_back(&p);
        }
    }

    std::vector<CohortReport> reports;
    auto emit = [&](const std::string& name, const std::vector<const RewardProfile*>& group) {
        if (group.empty()) {
            if (diagnostics) diagnostics->push_back("cohort " + name + " is empty, omitted");
            return;
        }
        reports.push_back(summarize(name, group));
    };
    emit("all", all);
    emit("bot", bots);
    emit("human", humans);
    emit("unlabeled", unlabeled);
    return reports;
}

std::vector<TokenScore> log_odds_tokens(const std::map<std::string, long>& support_counts,
                                        const std::map<std::string, long>& oppose_counts,
                                        double smoothing) {
    if (!(smoothing > 0.0)) throw std::invalid_argument("log-odds smoothing must be > 0");
    long support_total = 0, oppose_total = 0;
    for (const auto& [token, count] : support_counts) support_total += count;
    for (const auto& [token, count] : oppose_counts) oppose_total += count;
    if (support_total == 0 || oppose_total == 0)
        throw std::invalid_argument("log-odds needs non-empty corpora on both sides");

    std::map<std::string, std::pair<long, long>> joined;
    for (const auto& [token, count] : support_counts) joined[token].first = count;
    for (const auto& [token, count] : oppose_counts) joined[token].second = count;

    std::vector<TokenScore> scores;
    scores.reserve(joined.size());
    for (const auto& [token, counts] : joined) {
        auto [cs, co] = counts;
        double odds_s = (static_cast<double>(cs) + smoothing) /
                        (static_cast<double>(support_total - cs) + smoothing);
        double odds_o = (static_cast<double>(co) + smoothing) /
                        (static_cast<double>(oppose_total - co) + smoothing);
        scores.push_back({token, std::log(odds_s) - std::log(odds_o)});
    }
    std::sort(scores.begin(), scores.end(), [](const TokenScore& a, const TokenScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.token < b.token;
    });
    return scores;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // no platform newline translation
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_heatmap(std::span<const CohortReport> reports, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cohort,state,action,mean_reward\n";
    for (const CohortReport& r : reports)
        for (int j = 0; j < kNumPairs; ++j)
            out << r.cohort << ',' << state_name(state_of_pair(j)) << ','
                << action_name(action_of_pair(j)) << ',' << format_double(r.mean_reward[j])
                << '\n';
}

void write_mean_stderr(std::span<const CohortReport> reports,
                       const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cohort,pair_index,state,action,mean_reward,stderr,user_count,converged_count\n";
    for (const CohortReport& r : reports)
        for (int j = 0; j < kNumPairs; ++j)
            out << r.cohort << ',' << j << ',' << state_name(state_of_pair(j)) << ','
                << action_name(action_of_pair(j)) << ',' << format_double(r.mean_reward[j])
                << ',' << format_double(r.stderr_reward[j]) << ',' << r.user_count << ','
                << r.converged_count << '\n';
}

void write_weights(std::span<const CohortReport> reports, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cohort,weight_kind,feature,mean,stderr,user_count\n";
    for (const CohortReport& r : reports) {
        for (int i = 0; i < kNumFeatures; ++i)
            out << r.cohort << ",trained," << feature_name(i) << ','
                << format_double(r.mean_weight[i]) << ',' << format_double(r.stderr_weight[i])
                << ',' << r.user_count << '\n';
        for (int i = 0; i < kNumFeatures; ++i)
            out << r.cohort << ",extracted," << feature_name(i) << ','
                << format_double(r.mean_extracted_weight[i]) << ','
                << format_double(r.stderr_extracted_weight[i]) << ',' << r.user_count << '\n';
    }
}

void write_structured(const CohortReport& r, const std::filesystem::path& path) {
    nlohmann::json j;
    j["cohort"] = r.cohort;
    j["user_count"] = r.user_count;
    j["converged_count"] = r.converged_count;
    j["single_user"] = r.single_user;
    auto pairs = nlohmann::json::array();
    for (int idx = 0; idx < kNumPairs; ++idx) {
        pairs.push_back({{"pair_index", idx},
                         {"state", std::string(state_name(state_of_pair(idx)))},
                         {"action", std::string(action_name(action_of_pair(idx)))},
                         {"mean_reward", r.mean_reward[idx]},
                         {"stderr", r.stderr_reward[idx]}});
    }
    j["rewards"] = std::move(pairs);
    auto weights = nlohmann::json::array();
    for (int i = 0; i < kNumFeatures; ++i) {
        weights.push_back({{"feature", std::string(feature_name(i))},
                           {"trained_mean", r.mean_weight[i]},
                           {"trained_stderr", r.stderr_weight[i]},
                           {"extracted_mean", r.mean_extracted_weight[i]},
                           {"extracted_stderr", r.stderr_extracted_weight[i]}});
    }
    j["weights"] = std::move(weights);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace

void emit_report(std::span<const CohortReport> reports, const std::filesystem::path& out_dir,
                 ReportFormat format) {
    if (reports.empty()) throw std::invalid_argument("emit_report needs at least one report");
    std::filesystem::create_directories(out_dir);
    if (format == ReportFormat::Delimited || format == ReportFormat::Both) {
        write_heatmap(reports, out_dir / "reward_heatmap.csv");
        write_mean_stderr(reports, out_dir / "reward_mean_stderr.csv");
        write_weights(reports, out_dir / "feature_weights.csv");
    }
    if (format == ReportFormat::Structured || format == ReportFormat::Both) {
        for (const CohortReport& r : reports)
            write_structured(r, out_dir / ("report_" + r.cohort + ".json"));
    }
}

} // namespace dirl
