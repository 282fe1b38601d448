#pragma once

#include "dirl/core_model.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dirl {

// One timestamped atom of a user's timeline: an own action or a network
// response. Stance scores and bot scores are inputs produced by external
// classifiers, never computed here.
enum class EventKind : int {
    OwnPost = 0,     // the user posted new content
    OwnReshare = 1,  // the user reshared someone
    OwnReply = 2,    // the user replied to or mentioned someone
    GotReshared = 3, // someone reshared the user
    GotReply = 4,    // someone replied to or mentioned the user
};

std::string_view event_kind_name(EventKind k);
std::optional<EventKind> event_kind_from_name(std::string_view name);
bool is_own_action(EventKind k);

struct RawEvent {
    std::string user_id;
    std::int64_t ts = 0;
    EventKind kind = EventKind::OwnPost;
    std::optional<double> stance;      // in [0,1]; present iff kind == GotReply
    std::optional<std::string> ref_id; // opaque message id, optional
};

enum class Cohort : int { Bot = 0, Human = 1, Unlabeled = 2 };

std::string_view cohort_name(Cohort c);

struct UserLabel {
    std::string user_id;
    double bot_score = 0.0;
    Cohort cohort = Cohort::Unlabeled;
};

// Bot if the score strictly exceeds the threshold, human otherwise.
// Throws std::invalid_argument if the score is outside [0,1] or the
// threshold outside (0,1).
Cohort apply_bot_threshold(double bot_score, double threshold);

// Reply stance thresholding. Standard mode splits at 0.5 and never drops;
// strict mode keeps only clear-cut replies and drops the dead zone [lo, hi].
struct StanceThresholds {
    bool strict = false;
    double hi = 0.5;
    double lo = 0.5;

    static StanceThresholds standard() { return {false, 0.5, 0.5}; }
    // Throws std::invalid_argument if hi <= lo.
    static StanceThresholds strict_mode(double hi, double lo);
};

enum class StanceClass : int { Support = 0, Oppose = 1, Dropped = 2 };

StanceClass apply_stance_threshold(double score, const StanceThresholds& thresholds);

// Event log format: one JSON object per line, UTF-8, fields
//   user_id (string), ts (integer seconds), kind (enum string),
//   stance (float, required for got_reply), ref_id (optional string).
struct ParseResult {
    std::vector<RawEvent> events; // sorted by (user_id, ts), input order kept on ties
    std::size_t malformed = 0;
    std::vector<std::string> diagnostics; // first few malformed-line messages
};

// Parses an event log. Malformed lines are skipped, counted and reported;
// with strict=true the first malformed line throws std::runtime_error.
ParseResult parse_events(std::istream& in, bool strict = false);

void write_events(std::ostream& out, std::span<const RawEvent> events);

// Removes got_reply events that strict-mode thresholding cannot classify.
// Returns the number of dropped replies. No-op in standard mode.
std::size_t drop_unclassified_replies(std::vector<RawEvent>& events,
                                      const StanceThresholds& thresholds);

// Label file: delimiter-separated rows `user_id,bot_score`.
struct LabelParseResult {
    std::vector<UserLabel> labels;
    std::size_t malformed = 0;
    std::vector<std::string> diagnostics;
};

LabelParseResult parse_labels(std::istream& in, double bot_threshold, bool strict = false);

const UserLabel* find_label(std::span<const UserLabel> labels, std::string_view user_id);

// Splits a (user_id, ts)-sorted event list into per-user streams, preserving order.
std::vector<std::pair<std::string, std::vector<RawEvent>>>
group_by_user(std::span<const RawEvent> events);

} // namespace dirl
