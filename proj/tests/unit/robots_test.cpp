#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <regex>

#include "fixtures.hpp"
#include "genem/domain/json.hpp"
#include "genem/robots/simulator.hpp"

using namespace genem;
using namespace genem::robots;

namespace {

const WorldScenario& scenario(const std::string& id) {
    static std::map<std::string, WorldScenario> cache;
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, load_scenario(id, fixtures::data_dir())).first;
    return it->second;
}

Trajectory run(const std::string& src, const EmbodimentManifest& m = fixtures::mobile(),
               const std::string& scene = "empty") {
    return simulate(BehaviorProgram::from_source(src), m, scenario(scene), fixtures::no_skills());
}

// Strict local maxima of a series, counting plateaus once.
int count_peaks(const std::vector<double>& v, double above) {
    int peaks = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) continue;
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        if ((j + 1 == v.size() || v[j + 1] < v[i]) && v[i] > above) ++peaks;
        i = j;
    }
    return peaks;
}

}  // namespace

TEST(Manifest, MobileAndQuadrupedContents) {
    EXPECT_NE(fixtures::mobile().find_primitive("head_pan"), nullptr);
    EXPECT_NE(fixtures::quadruped().find_primitive("bow"), nullptr);
    EXPECT_EQ(fixtures::quadruped().find_primitive("say"), nullptr);
    EXPECT_EQ(fixtures::quadruped().find_primitive("head_tilt"), nullptr);
    EXPECT_THROW(load_manifest("hexapod_v9", fixtures::data_dir()), UnknownEmbodiment);
}

TEST(Manifest, CapabilityProseMentionsEachPrimitiveOnce) {
    for (const auto* m : {&fixtures::mobile(), &fixtures::quadruped()}) {
        for (const auto& p : m->primitives) {
            const std::regex word("\\b" + p.name + "\\(");
            const auto n = std::distance(std::sregex_iterator(m->capability_prose.begin(), m->capability_prose.end(), word),
                                         std::sregex_iterator());
            EXPECT_EQ(n, 1) << p.name;
        }
        EXPECT_EQ(render_capability_prose(*m), m->capability_prose);
    }
}

TEST(Scenario, LoadsAllFive) {
    EXPECT_EQ(known_scenario_ids(fixtures::data_dir()),
              (std::vector<std::string>{"empty", "person_approaches_and_talks", "person_stops", "person_walks_by",
                                        "person_waves"}));
    EXPECT_THROW(load_scenario("nope", fixtures::data_dir()), UnknownScenario);
    const auto p = scenario("person_walks_by").person_at(6.0);
    ASSERT_TRUE(p);
    EXPECT_NEAR(p->x, 2.5, 1e-12);
    EXPECT_NEAR(p->y, 0.0, 1e-12);
    EXPECT_FALSE(scenario("empty").person_at(1.0));
}

TEST(Sensors, Geometry) {
    WorldScenario s;
    s.waypoints = {{0, 3, 0}};
    WorldState w{0, 0, 0, 0, &s};
    EXPECT_EQ(sensor_eval("person_visible", {}, w), 1.0);
    EXPECT_DOUBLE_EQ(sensor_eval("person_distance", {}, w), 3.0);
    s.waypoints = {{0, -3, 0}};
    EXPECT_EQ(sensor_eval("person_visible", {}, w), 0.0);
    s.waypoints = {{0, 1.2, 0}};
    ebl::ArgMap args{{"distance_m", ebl::NumberLit{1.5, ebl::Unit::M, false}}};
    EXPECT_EQ(sensor_eval("person_distance_lt", args, w), 1.0);
    EXPECT_THROW(sensor_eval("person_mood", {}, w), UnknownSensor);
    WorldState nobody{0, 0, 0, 0, &scenario("empty")};
    EXPECT_TRUE(std::isinf(sensor_eval("person_distance", {}, nobody)));
}

TEST(Simulator, EmptyProgramIsOneFrame) {
    const auto t = run("skill a() { }");
    ASSERT_EQ(t.frames.size(), 1u);
    EXPECT_EQ(t.frames[0].t, 0.0);
}

TEST(Simulator, WaitOneSecondIsElevenFrames) {
    const auto t = run("skill a() { wait 1.0s }");
    ASSERT_EQ(t.frames.size(), 11u);
    EXPECT_NEAR(t.frames.back().t, 1.0, 1e-12);
    EXPECT_TRUE(t.events.empty());
}

TEST(Simulator, RotationRate) {
    const auto t = run("skill a() { base_rotate(angle_deg=90) }");
    const auto h = t.channel("heading_deg");
    const auto first = std::find_if(h.begin(), h.end(), [](double v) { return std::abs(v - 90) < 1e-9; });
    ASSERT_NE(first, h.end());
    EXPECT_NEAR(t.frames[static_cast<std::size_t>(first - h.begin())].t, 2.0, 1e-9);
}

TEST(Simulator, HeadingWraps) {
    const auto t = run("skill a() { base_rotate(angle_deg=170) base_rotate(angle_deg=30) }");
    EXPECT_NEAR(t.channel("heading_deg").back(), -160.0, 1e-9);
}

TEST(Simulator, ArenaFault) {
    EXPECT_THROW(run("skill a() { navigate_to(x_m=5, y_m=0) base_translate(distance_m=1) }"), ebl::ExecutorFault);
    EXPECT_NO_THROW(run("skill a() { navigate_to(x_m=5, y_m=5) }"));
}

TEST(Simulator, NavigateTurnsFirst) {
    const auto t = run("skill a() { navigate_to(x_m=0, y_m=1) }");
    // 90 deg at 45 deg/s, then 1 m at 0.5 m/s.
    EXPECT_EQ(t.frames.size(), 1u + 20u + 20u);
    EXPECT_NEAR(t.channel("heading_deg")[20], 90.0, 1e-9);
    EXPECT_NEAR(t.channel("y")[20], 0.0, 1e-9);
    EXPECT_NEAR(t.channel("y").back(), 1.0, 1e-9);
}

TEST(Simulator, RepeatedNodGivesThreePeaks) {
    const auto t = run(R"(
skill nod() { """Nod once.""" head_tilt(angle_deg=15deg) head_tilt(angle_deg=0deg) }
skill a() { repeat 3 { nod() } }
)");
    EXPECT_EQ(count_peaks(t.channel("head_tilt_deg"), 5.0), 3);
}

TEST(Simulator, LightAndSpeechEvents) {
    const auto t = run(R"(skill a() {
        light_set(color=#00FF00)
        light_pattern(pattern="blink", color=#FF0000, times=2)
        say(text="Excuse me")
        play_sound(sound="chime")
        light_off()
    })");
    ASSERT_EQ(t.events.size(), 5u);
    EXPECT_EQ(t.events[0].payload, "set #00FF00");
    EXPECT_EQ(t.events[1].payload, "blink #FF0000 x2");
    EXPECT_EQ(t.events[2].kind, EventKind::Speech);
    EXPECT_EQ(t.events[3].kind, EventKind::Sound);
    EXPECT_EQ(t.events[4].payload, "off");
    // set(1) + 2 x (2 on + 2 off) + restore(1) = 10 frames before speech.
    EXPECT_NEAR(t.events[2].t, 1.0, 1e-9);
    const auto g = t.channel("light_g");
    EXPECT_EQ(g[10], 255.0);  // previous color restored
    EXPECT_EQ(t.channel("light_r")[2], 255.0);
    EXPECT_NEAR(t.events[3].t - t.events[2].t, 0.6, 1e-9);  // 9 chars * 0.06 s = 0.54 -> 6 steps
}

TEST(Simulator, QuadrupedBowHolds) {
    const auto t = run("skill a() { bow(pitch_deg=20deg) wait 1 }", fixtures::quadruped());
    EXPECT_NEAR(t.channel("body_height_m").back(), 0.4, 1e-12);
    EXPECT_NEAR(t.channel("body_pitch_deg").back(), 20.0, 1e-12);
    // 0.1 m at 0.1 m/s dominates: 10 steps, then 10 held.
    EXPECT_EQ(t.frames.size(), 21u);
}

TEST(Simulator, RateCapsHoldOnRandomPrograms) {
    std::mt19937 rng(11);
    const std::vector<std::string> moves = {
        "head_pan(angle_deg=%)", "head_tilt(angle_deg=%)", "base_rotate(angle_deg=%)", "base_translate(distance_m=0.4)",
        "navigate_to(x_m=1, y_m=-1)", "light_set(color=#102030)", "wait 0.3"};
    std::uniform_int_distribution<int> angle(-30, 30);
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    const auto& m = fixtures::mobile();
    for (int trial = 0; trial < 50; ++trial) {
        std::string body;
        for (int k = 0; k < 8; ++k) {
            auto s = moves[pick(rng)];
            if (const auto pos = s.find('%'); pos != std::string::npos) s.replace(pos, 1, std::to_string(angle(rng)));
            body += s + " ";
        }
        const auto t = run("skill a() { " + body + "}");
        for (std::size_t c = 0; c < t.channels.size(); ++c) {
            const auto& spec = m.channels[c];
            if (!spec.max_rate) continue;
            for (std::size_t i = 1; i < t.frames.size(); ++i) {
                double d = t.frames[i].values[c] - t.frames[i - 1].values[c];
                if (spec.angular) d = wrap_deg(d);
                EXPECT_LE(std::abs(d), *spec.max_rate * t.step_s + 1e-9) << spec.name;
            }
        }
    }
}

TEST(Simulator, Deterministic) {
    const auto src = "skill a() { if person_visible() { head_pan(angle_deg=20) say(text=\"hi\") } navigate_to(x_m=1, y_m=1) }";
    const auto a = run(src, fixtures::mobile(), "person_stops");
    const auto b = run(src, fixtures::mobile(), "person_stops");
    EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
    check_trajectory(a);
}

TEST(Simulator, TrajectoryJsonRoundTrip) {
    const auto t = run("skill a() { light_pattern(pattern=\"pulse\", color=#FF00FF, times=1) base_rotate(angle_deg=-45) }");
    const nlohmann::json j = t;
    EXPECT_EQ(j.get<Trajectory>(), t);
    EXPECT_EQ(j["frames"][0].count("heading_deg"), 1u);
}
