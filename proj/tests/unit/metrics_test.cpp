#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "genem/metrics/distance.hpp"
#include "genem/robots/simulator.hpp"
#include "oracles.hpp"

using namespace genem;
using namespace genem::metrics;

namespace {

Trajectory one_channel(const std::vector<double>& values) {
    Trajectory t;
    t.channels = {"v"};
    for (std::size_t i = 0; i < values.size(); ++i) t.frames.push_back({static_cast<double>(i) * 0.1, {values[i]}});
    return t;
}

MetricConfig unit_config() {
    MetricConfig cfg;
    cfg.weights["v"] = 1.0;
    cfg.ranges["v"] = {0.0, 1.0};
    return cfg;
}

Trajectory sim(const std::string& src, const robots::EmbodimentManifest& m = fixtures::mobile()) {
    static const auto empty = robots::load_scenario("empty", fixtures::data_dir());
    return robots::simulate(BehaviorProgram::from_source(src), m, empty, fixtures::no_skills());
}

}  // namespace

TEST(Dtw, StretchedSequenceIsFree) {
    EXPECT_DOUBLE_EQ(dtw_distance(one_channel({0, 1}), one_channel({0, 0, 1}), unit_config()), 0.0);
}

TEST(Dtw, MatchesEnumerationOracle) {
    std::mt19937 rng(2024);
    const std::vector<std::string> channels = {"x", "heading_deg", "light_r"};
    const std::vector<std::pair<double, double>> bounds = {{-5, 5}, {-180, 180}, {0, 255}};
    MetricConfig cfg;
    cfg.weights = {{"x", 1.0}, {"heading_deg", 0.5}, {"light_r", 2.0}};
    cfg.ranges = {{"x", {-5, 5}}, {"heading_deg", {-180, 180}}, {"light_r", {0, 255}}};
    cfg.angular = {"heading_deg"};
    const std::vector<double> w = {1.0, 0.5, 2.0}, span = {10, 360, 255};
    const std::vector<bool> ang = {false, true, false};
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = oracle::random_trajectory(rng, len(rng), channels, bounds);
        const auto b = oracle::random_trajectory(rng, len(rng), channels, bounds);
        const double expected = oracle::dtw_by_enumeration(a.frames.size(), b.frames.size(), [&](std::size_t i, std::size_t j) {
            return oracle::frame_cost(a.frames[i].values, b.frames[j].values, w, span, ang);
        });
        EXPECT_NEAR(dtw_distance(a, b, cfg), expected, 1e-9);
    }
}

TEST(Dtw, IdentitySymmetryNonnegativity) {
    std::mt19937 rng(5);
    const auto& m = fixtures::mobile();
    const auto cfg = default_metric_config(m);
    std::vector<std::pair<double, double>> bounds;
    for (const auto& c : m.channels) bounds.emplace_back(c.min, c.max);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_trajectory(rng, 1 + rng() % 40, m.channel_names(), bounds);
        const auto b = oracle::random_trajectory(rng, 1 + rng() % 40, m.channel_names(), bounds);
        EXPECT_EQ(dtw_distance(a, a, cfg), 0.0);
        EXPECT_EQ(dtw_distance(a, b, cfg), dtw_distance(b, a, cfg));
        EXPECT_GE(dtw_distance(a, b, cfg), 0.0);
    }
}

TEST(Dtw, PerturbationBound) {
    // Noise of amplitude eps in normalized units moves each diagonal frame
    // cost by at most eps * sqrt(sum of weights).
    std::mt19937 rng(9);
    const auto& m = fixtures::mobile();
    auto cfg = default_metric_config(m);
    std::vector<std::pair<double, double>> bounds;
    for (const auto& c : m.channels) bounds.emplace_back(c.min, c.max);
    double weight_sum = 0.0;
    for (const auto& [_, w] : cfg.weights) weight_sum += w;
    for (const double eps : {0.001, 0.01, 0.05}) {
        const auto a = oracle::random_trajectory(rng, 30, m.channel_names(), bounds);
        auto b = a;
        std::uniform_real_distribution<double> noise(-eps, eps);
        for (auto& f : b.frames)
            for (std::size_t c = 0; c < f.values.size(); ++c) {
                const double span = m.channels[c].angular ? 360.0 : m.channels[c].max - m.channels[c].min;
                f.values[c] += noise(rng) * span;
            }
        EXPECT_LE(dtw_distance(a, b, cfg), eps * 30 * std::sqrt(weight_sum) + 1e-12);
    }
    // Single channel: the plain eps * frames * max-weight bound.
    const auto a = one_channel({0.1, 0.5, 0.9, 0.3});
    const auto b = one_channel({0.11, 0.49, 0.91, 0.29});
    EXPECT_LE(dtw_distance(a, b, unit_config()), 0.01 * 4 * 1.0 + 1e-12);
}

TEST(Dtw, Errors) {
    EXPECT_THROW(dtw_distance(Trajectory{}, one_channel({1}), unit_config()), EmptyTrajectory);
    MetricConfig zero;
    zero.weights["v"] = 0;
    EXPECT_THROW(zero.check(), PreconditionError);
}

TEST(EventEdit, MatchesRecursiveOracle) {
    std::mt19937 rng(3);
    const std::vector<std::pair<EventKind, std::string>> pool = {
        {EventKind::Speech, "hi"}, {EventKind::Speech, "bye"}, {EventKind::Sound, "chime"}, {EventKind::LightPattern, "off"}};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<TrajectoryEvent> a, b;
        for (auto n = rng() % 6; n > 0; --n) a.push_back({a.size() * 1.0, pool[rng() % 4].first, pool[rng() % 4].second});
        for (auto n = rng() % 6; n > 0; --n) b.push_back({b.size() * 1.0, pool[rng() % 4].first, pool[rng() % 4].second});
        EXPECT_EQ(event_edit_distance(a, b), oracle::event_edit_recursive(a, b));
    }
    std::vector<TrajectoryEvent> three(3, TrajectoryEvent{0, EventKind::Sound, "beep"});
    EXPECT_EQ(event_edit_distance(three, {}), 3u);
    EXPECT_EQ(event_edit_distance(three, three), 0u);
}

TEST(Expressive, OrderingOnSimulatedFixtures) {
    const auto cfg = default_metric_config(fixtures::mobile());
    const auto nod = sim("skill a() { repeat 2 { head_tilt(angle_deg=20) head_tilt(angle_deg=0) } }");
    const auto delayed = sim("skill a() { wait 0.5 repeat 2 { head_tilt(angle_deg=20) head_tilt(angle_deg=0) } }");
    ASSERT_EQ(nod.frames.size(), 1u + 4u * 3u);
    const auto still = sim("skill a() { wait 1.2 }");
    ASSERT_EQ(still.frames.size(), nod.frames.size());
    EXPECT_EQ(expressive_distance(nod, nod, cfg).total, 0.0);
    const auto d_still = expressive_distance(nod, still, cfg).total;
    const auto d_delay = expressive_distance(nod, delayed, cfg).total;
    EXPECT_GT(d_still, 0.0);
    EXPECT_GT(d_still, d_delay);
}

TEST(Expressive, CrossEmbodimentIsChannelMismatch) {
    const auto a = sim("skill a() { wait 1 }");
    const auto b = sim("skill a() { wait 1 }", fixtures::quadruped());
    EXPECT_THROW(expressive_distance(a, b, default_metric_config(fixtures::mobile())), ChannelMismatch);
}

TEST(Expressive, EventWeight) {
    auto cfg = default_metric_config(fixtures::mobile());
    cfg.event_weight = 2.5;
    const auto a = sim("skill a() { say(text=\"hello\") }");
    const auto b = sim("skill a() { play_sound(sound=\"beep\") }");
    const auto d = expressive_distance(a, b, cfg);
    EXPECT_EQ(d.edit, 1u);
    EXPECT_DOUBLE_EQ(d.total, d.dtw + 2.5);
}
