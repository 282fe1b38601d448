#include "dirl/ingestion.hpp"

#include "dirl/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace dirl {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxDiagnostics = 20;

void add_diagnostic(std::vector<std::string>& diags, std::size_t line_no,
                    const std::string& what) {
    if (diags.size() < kMaxDiagnostics)
        diags.push_back("line " + std::to_string(line_no) + ": " + what);
}

RawEvent parse_event_line(const std::string& line) {
    json j = json::parse(line);
    RawEvent ev;
    ev.user_id = j.at("user_id").get<std::string>();
    if (ev.user_id.empty()) throw std::runtime_error("empty user_id");
    if (ev.user_id.find(',') != std::string::npos ||
        ev.user_id.find('\n') != std::string::npos)
        throw std::runtime_error("user_id must not contain ',' or newline");
    ev.ts = j.at("ts").get<std::int64_t>();
    if (ev.ts <= 0) throw std::runtime_error("ts must be positive");
    auto kind = event_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown kind");
    ev.kind = *kind;
    if (j.contains("stance")) {
        if (ev.kind != EventKind::GotReply)
            throw std::runtime_error("stance only allowed on got_reply");
        double s = j.at("stance").get<double>();
        if (!(s >= 0.0 && s <= 1.0)) throw std::runtime_error("stance outside [0,1]");
        ev.stance = s;
    } else if (ev.kind == EventKind::GotReply) {
        throw std::runtime_error("got_reply missing stance");
    }
    if (j.contains("ref_id")) ev.ref_id = j.at("ref_id").get<std::string>();
    return ev;
}

} // namespace

std::string_view event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::OwnPost: return "own_post";
    case EventKind::OwnReshare: return "own_reshare";
    case EventKind::OwnReply: return "own_reply";
    case EventKind::GotReshared: return "got_reshared";
    case EventKind::GotReply: return "got_reply";
    }
    return "?";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
    for (EventKind k : {EventKind::OwnPost, EventKind::OwnReshare, EventKind::OwnReply,
                        EventKind::GotReshared, EventKind::GotReply})
        if (event_kind_name(k) == name) return k;
    return std::nullopt;
}

bool is_own_action(EventKind k) {
    return k == EventKind::OwnPost || k == EventKind::OwnReshare || k == EventKind::OwnReply;
}

std::string_view cohort_name(Cohort c) {
    switch (c) {
    case Cohort::Bot: return "bot";
    case Cohort::Human: return "human";
    case Cohort::Unlabeled: return "unlabeled";
    }
    return "?";
}

Cohort apply_bot_threshold(double bot_score, double threshold) {
    if (!(bot_score >= 0.0 && bot_score <= 1.0))
        throw std::invalid_argument("bot score outside [0,1]");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("bot threshold outside (0,1)");
    return bot_score > threshold ? Cohort::Bot : Cohort::Human;
}

StanceThresholds StanceThresholds::strict_mode(double hi, double lo) {
    if (!(hi > lo)) throw std::invalid_argument("strict stance thresholds require hi > lo");
    return {true, hi, lo};
}

StanceClass apply_stance_threshold(double score, const StanceThresholds& thresholds) {
    if (!(score >= 0.0 && score <= 1.0))
        throw std::invalid_argument("stance score outside [0,1]");
    if (!thresholds.strict)
        return score > 0.5 ? StanceClass::Support : StanceClass::Oppose;
    if (score > thresholds.hi) return StanceClass::Support;
    if (score < thresholds.lo) return StanceClass::Oppose;
    return StanceClass::Dropped;
}

ParseResult parse_events(std::istream& in, bool strict) {
    if (!in) throw std::runtime_error("event stream unreadable");
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            result.events.push_back(parse_event_line(line));
        } catch (const std::exception& e) {
            if (strict)
                throw std::runtime_error("event log line " + std::to_string(line_no) + ": " +
                                         e.what());
            ++result.malformed;
            add_diagnostic(result.diagnostics, line_no, e.what());
        }
    }
    if (in.bad()) throw std::runtime_error("I/O failure while reading event log");
    // Ties in ts keep input order, so repeated parses are stable.
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const RawEvent& a, const RawEvent& b) {
                         if (a.user_id != b.user_id) return a.user_id < b.user_id;
                         return a.ts < b.ts;
                     });
    return result;
}

void write_events(std::ostream& out, std::span<const RawEvent> events) {
    for (const RawEvent& ev : events) {
        json j;
        j["user_id"] = ev.user_id;
        j["ts"] = ev.ts;
        j["kind"] = std::string(event_kind_name(ev.kind));
        if (ev.stance) j["stance"] = *ev.stance;
        if (ev.ref_id) j["ref_id"] = *ev.ref_id;
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("I/O failure while writing event log");
}

std::size_t drop_unclassified_replies(std::vector<RawEvent>& events,
                                      const StanceThresholds& thresholds) {
    if (!thresholds.strict) return 0;
    auto dead_zone = [&](const RawEvent& ev) {
        return ev.kind == EventKind::GotReply && ev.stance &&
               apply_stance_threshold(*ev.stance, thresholds) == StanceClass::Dropped;
    };
    std::size_t before = events.size();
    events.erase(std::remove_if(events.begin(), events.end(), dead_zone), events.end());
    return before - events.size();
}

LabelParseResult parse_labels(std::istream& in, double bot_threshold, bool strict) {
    if (!in) throw std::runtime_error("label stream unreadable");
    LabelParseResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto fields = split(trimmed, ',');
        try {
            if (fields.size() != 2) throw std::runtime_error("expected user_id,bot_score");
            std::string user_id(trim(fields[0]));
            std::string score_text(trim(fields[1]));
            if (line_no == 1 && score_text == "bot_score") continue; // optional header
            if (user_id.empty()) throw std::runtime_error("empty user_id");
            double score = std::stod(score_text);
            Cohort cohort = apply_bot_threshold(score, bot_threshold);
            result.labels.push_back({std::move(user_id), score, cohort});
        } catch (const std::exception& e) {
            if (strict)
                throw std::runtime_error("label file line " + std::to_string(line_no) + ": " +
                                         e.what());
            ++result.malformed;
            add_diagnostic(result.diagnostics, line_no, e.what());
        }
    }
    if (in.bad()) throw std::runtime_error("I/O failure while reading label file");
    return result;
}

const UserLabel* find_label(std::span<const UserLabel> labels, std::string_view user_id) {
    for (const UserLabel& l : labels)
        if (l.user_id == user_id) return &l;
    return nullptr;
}

std::vector<std::pair<std::string, std::vector<RawEvent>>>
group_by_user(std::span<const RawEvent> events) {
    std::vector<std::pair<std::string, std::vector<RawEvent>>> groups;
    for (const RawEvent& ev : events) {
        if (groups.empty() || groups.back().first != ev.user_id)
            groups.emplace_back(ev.user_id, std::vector<RawEvent>{});
        groups.back().second.push_back(ev);
    }
    return groups;
}

} // namespace dirl
