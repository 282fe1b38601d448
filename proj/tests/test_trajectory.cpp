#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dirl/trajectory.hpp"
#include "test_util.hpp"

#include <random>
#include <sstream>

using namespace dirl;

namespace {

RawEvent make(const std::string& user, std::int64_t ts, EventKind kind,
              std::optional<double> stance = std::nullopt) {
    RawEvent ev;
    ev.user_id = user;
    ev.ts = ts;
    ev.kind = kind;
    ev.stance = stance;
    return ev;
}

} // namespace

TEST_CASE("worked example: reply arrives before the user reacts") {
    std::vector<RawEvent> events{
        make("u", 10, EventKind::OwnPost),
        make("u", 20, EventKind::GotReply, 0.8),
        make("u", 30, EventKind::GotReply, 0.2),
        make("u", 40, EventKind::OwnReply),
    };
    Trajectory traj = build_trajectory("u", events);
    REQUIRE(traj.steps.size() == 3);
    CHECK(traj.steps[0].state == State::None);
    CHECK(traj.steps[0].action == Action::Tweet);
    CHECK(traj.steps[1].state == State::SupportReply);
    CHECK(traj.steps[1].action == Action::None);
    CHECK(traj.steps[2].state == State::OpposeReply);
    CHECK(traj.steps[2].action == Action::Reply);
    CHECK(traj.timestamps_non_decreasing());
}

TEST_CASE("a burst of posts before anyone reacts") {
    std::vector<RawEvent> events{
        make("u", 1, EventKind::OwnPost),
        make("u", 2, EventKind::OwnPost),
    };
    Trajectory traj = build_trajectory("u", events);
    REQUIRE(traj.steps.size() == 2);
    for (const Step& s : traj.steps) {
        CHECK(s.state == State::None);
        CHECK(s.action == Action::Tweet);
    }
}

TEST_CASE("repeated reshares before the user has time to react") {
    std::vector<RawEvent> events{
        make("u", 1, EventKind::GotReshared),
        make("u", 2, EventKind::GotReshared),
    };
    Trajectory traj = build_trajectory("u", events);
    REQUIRE(traj.steps.size() == 2);
    for (const Step& s : traj.steps) {
        CHECK(s.state == State::Reshared);
        CHECK(s.action == Action::None);
    }
}

TEST_CASE("empty event list gives an empty trajectory") {
    Trajectory traj = build_trajectory("u", {});
    CHECK(traj.steps.empty());
    CHECK(traj.user_id == "u");
}

TEST_CASE("own action kinds map one-to-one onto actions") {
    std::vector<RawEvent> events{
        make("u", 1, EventKind::OwnPost),
        make("u", 2, EventKind::OwnReshare),
        make("u", 3, EventKind::OwnReply),
    };
    Trajectory traj = build_trajectory("u", events);
    REQUIRE(traj.steps.size() == 3);
    CHECK(traj.steps[0].action == Action::Tweet);
    CHECK(traj.steps[1].action == Action::Retweet);
    CHECK(traj.steps[2].action == Action::Reply);
}

TEST_CASE("precondition violations throw") {
    std::vector<RawEvent> unsorted{
        make("u", 10, EventKind::OwnPost),
        make("u", 5, EventKind::OwnPost),
    };
    CHECK_THROWS_AS(build_trajectory("u", unsorted), std::invalid_argument);

    std::vector<RawEvent> mixed{
        make("u", 1, EventKind::OwnPost),
        make("v", 2, EventKind::OwnPost),
    };
    CHECK_THROWS_AS(build_trajectory("u", mixed), std::invalid_argument);
}

TEST_CASE("max gap window expires a pending response") {
    std::vector<RawEvent> events{
        make("u", 100, EventKind::GotReshared),
        make("u", 500, EventKind::OwnReply),
    };
    Trajectory paired = build_trajectory("u", events);
    REQUIRE(paired.steps.size() == 1);
    CHECK(paired.steps[0].state == State::Reshared);
    CHECK(paired.steps[0].action == Action::Reply);

    BuildConfig narrow;
    narrow.max_gap_seconds = 100;
    Trajectory split = build_trajectory("u", events, narrow);
    REQUIRE(split.steps.size() == 2);
    CHECK(split.steps[0].state == State::Reshared);
    CHECK(split.steps[0].action == Action::None);
    CHECK(split.steps[1].state == State::None);
    CHECK(split.steps[1].action == Action::Reply);
}

TEST_CASE("conservation: events in equal non-inert steps out") {
    std::mt19937_64 rng(123);
    for (int round = 0; round < 300; ++round) {
        auto events = testutil::random_event_stream(rng, "u", 1 + static_cast<int>(rng() % 60));
        Trajectory traj = build_trajectory("u", events);
        int own = 0, responses = 0;
        for (const RawEvent& ev : events) (is_own_action(ev.kind) ? own : responses) += 1;
        CHECK(traj.real_action_count() == own);
        CHECK(traj.real_response_count() == responses);
        CHECK(traj.timestamps_non_decreasing());
    }
}

TEST_CASE("build_trajectory is a pure function of the event list") {
    std::mt19937_64 rng(9);
    auto events = testutil::random_event_stream(rng, "u", 40);
    Trajectory a = build_trajectory("u", events);
    Trajectory b = build_trajectory("u", events);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].state == b.steps[i].state);
        CHECK(a.steps[i].action == b.steps[i].action);
        CHECK(a.steps[i].ts == b.steps[i].ts);
    }
}

TEST_CASE("eligibility gates") {
    std::vector<Trajectory> trajectories;
    // five real actions, five real responses
    Trajectory good{"good", {}};
    for (int i = 0; i < 5; ++i) {
        good.steps.push_back({State::Reshared, Action::None, 2 * i});
        good.steps.push_back({State::None, Action::Tweet, 2 * i + 1});
    }
    // only four real actions
    Trajectory short_actions{"short", {}};
    for (int i = 0; i < 4; ++i) {
        short_actions.steps.push_back({State::Reshared, Action::None, 2 * i});
        short_actions.steps.push_back({State::None, Action::Tweet, 2 * i + 1});
    }
    short_actions.steps.push_back({State::Reshared, Action::None, 100});
    trajectories.push_back(good);
    trajectories.push_back(short_actions);

    auto kept = filter_eligible(trajectories, {});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].user_id == "good");

    Trajectory tiny{"tiny", {{State::Reshared, Action::Tweet, 1}}};
    auto kept_tiny = filter_eligible({tiny}, {1, 1});
    CHECK(kept_tiny.size() == 1);

    CHECK_THROWS_AS(filter_eligible({tiny}, {0, 0}), std::invalid_argument);
}

TEST_CASE("store round-trips through write and read") {
    std::mt19937_64 rng(77);
    std::vector<Trajectory> trajectories;
    for (int u = 0; u < 4; ++u)
        trajectories.push_back(
            testutil::random_trajectory(rng, "user" + std::to_string(u), 10 + u));

    std::ostringstream out;
    write_trajectory_store(out, trajectories);
    std::istringstream in(out.str());
    auto back = read_trajectory_store(in);
    REQUIRE(back.size() == trajectories.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].user_id == trajectories[i].user_id);
        REQUIRE(back[i].steps.size() == trajectories[i].steps.size());
        for (std::size_t j = 0; j < back[i].steps.size(); ++j) {
            CHECK(back[i].steps[j].state == trajectories[i].steps[j].state);
            CHECK(back[i].steps[j].action == trajectories[i].steps[j].action);
            CHECK(back[i].steps[j].ts == trajectories[i].steps[j].ts);
        }
    }
}

TEST_CASE("store rejects out-of-sequence step indices") {
    std::istringstream in("user_id,step,state,action,ts\nu,0,t,tw,1\nu,2,t,tw,2\n");
    CHECK_THROWS_AS(read_trajectory_store(in), std::runtime_error);
}

TEST_CASE("strict-mode dead-zone replies never reach the steps") {
    std::vector<RawEvent> events{
        make("u", 1, EventKind::GotReply, 0.5), // dead zone under strict 0.7/0.3
        make("u", 2, EventKind::OwnPost),
    };
    BuildConfig config;
    config.stance = StanceThresholds::strict_mode(0.7, 0.3);
    Trajectory traj = build_trajectory("u", events, config);
    REQUIRE(traj.steps.size() == 1);
    CHECK(traj.steps[0].state == State::None);
    CHECK(traj.steps[0].action == Action::Tweet);
}
