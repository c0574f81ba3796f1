#include <chrono>
#include <regex>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "genem/harness/checks.hpp"
#include "genem/harness/suites.hpp"
#include "genem/robots/scenario.hpp"
#include "genem/robots/simulator.hpp"
#include "genem/util/files.hpp"

using namespace genem;
using namespace genem::harness;
using nlohmann::json;

namespace {

SuiteContext replay_context() {
    return SuiteContext::with_gateway(llm::Gateway::replay(llm::Transcript::load_dir(fixtures::data_dir() / "transcripts")),
                                      fixtures::data_dir(), "replay");
}

const BehaviorCatalog& catalog() {
    static const auto c = BehaviorCatalog::load(behaviors_file(fixtures::data_dir()));
    return c;
}

json expected(const std::string& name) { return util::read_json(fixtures::data_dir() / "expected" / name); }

Trajectory run(const std::string& src, const robots::EmbodimentManifest& m, const std::string& scenario = "empty") {
    return robots::simulate(BehaviorProgram::from_source(src), m, robots::load_scenario(scenario, fixtures::data_dir()),
                            fixtures::no_skills());
}

std::optional<bool> check(const std::string& name, const std::string& src, const robots::EmbodimentManifest& m,
                          const std::string& scenario = "empty") {
    const auto program = BehaviorProgram::from_source(src);
    const auto s = robots::load_scenario(scenario, fixtures::data_dir());
    const auto t = robots::simulate(program, m, s, fixtures::no_skills());
    return run_check(name, {program.ast, fixtures::no_skills(), s, &t});
}

// Every identifier followed by "(" in the source, minus skill definitions.
std::set<std::string> called_names(const std::string& src) {
    static const std::regex call(R"(([A-Za-z_][A-Za-z0-9_]*)\s*\()");
    static const std::regex def(R"(skill\s+([A-Za-z_][A-Za-z0-9_]*))");
    std::set<std::string> defined, out;
    for (auto it = std::sregex_iterator(src.begin(), src.end(), def); it != std::sregex_iterator(); ++it)
        defined.insert((*it)[1]);
    for (auto it = std::sregex_iterator(src.begin(), src.end(), call); it != std::sregex_iterator(); ++it)
        if (!defined.count((*it)[1])) out.insert((*it)[1]);
    return out;
}

}  // namespace

// ---- checks ------------------------------------------------------------------

TEST(Checks, ColorClassesUseChannelThresholds) {
    EXPECT_TRUE(is_red(0xFF0000));
    EXPECT_TRUE(is_red(0xB46363));   // 180, 99, 99
    EXPECT_FALSE(is_red(0xB36363));  // red channel 179
    EXPECT_FALSE(is_red(0xFF6400));  // green channel 100
    EXPECT_FALSE(is_red(0xFFA500));
    EXPECT_TRUE(is_green(0x00FF00));
    EXPECT_TRUE(is_green(0x33FF33));
    EXPECT_FALSE(is_green(0x00AAFF));
}

TEST(Checks, ExcursionsNeedAReturnPastHalfThreshold) {
    EXPECT_EQ(excursions({0, 6, 2, 6, 0}, 0.1, 5).size(), 2u);
    EXPECT_EQ(excursions({0, 6, 3, 6, 0}, 0.1, 5).size(), 1u);
    EXPECT_EQ(excursions({0, 4.9, 0}, 0.1, 5).size(), 0u);
    const auto e = excursions({0, -6, 0, 7}, 0.1, 5);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0].sign, -1);
    EXPECT_EQ(e[1].sign, 1);
    EXPECT_DOUBLE_EQ(e[1].t, 0.3);
}

TEST(Checks, LightEventsDecodePayloads) {
    Trajectory t;
    t.events = {{0.1, EventKind::LightPattern, "set #00FF00"},
                {0.5, EventKind::LightPattern, "blink #FF0000 x3"},
                {0.9, EventKind::LightPattern, "off"},
                {1.0, EventKind::Sound, "chime"}};
    const auto ev = light_events(t);
    ASSERT_EQ(ev.size(), 3u);
    EXPECT_EQ(ev[0].mode, "set");
    EXPECT_EQ(ev[0].rgb, 0x00FF00u);
    EXPECT_EQ(ev[1].mode, "blink");
    EXPECT_EQ(ev[1].rgb, 0xFF0000u);
    EXPECT_EQ(ev[2].mode, "off");
}

TEST(Checks, MotionChecksOnSimulatedPrograms) {
    const auto& m = fixtures::mobile();
    EXPECT_EQ(check("nods", "skill a() {\n head_tilt(angle_deg=15deg)\n head_tilt(angle_deg=0deg)\n}\n", m), true);
    EXPECT_EQ(check("nods", "skill a() {\n head_tilt(angle_deg=4deg)\n head_tilt(angle_deg=0deg)\n}\n", m), false);
    EXPECT_EQ(check("shakes", "skill a() {\n head_pan(angle_deg=20deg)\n head_pan(angle_deg=-20deg)\n}\n", m), true);
    EXPECT_EQ(check("shakes", "skill a() {\n head_pan(angle_deg=20deg)\n head_pan(angle_deg=0deg)\n}\n", m), false);
    EXPECT_EQ(check("moves", "skill a() {\n base_translate(distance_m=0.5m)\n}\n", m), true);
    EXPECT_EQ(check("moves", "skill a() {\n base_translate(distance_m=0.2m)\n}\n", m), false);
    EXPECT_EQ(check("no_speech", "skill a() {\n say(text=\"hi\")\n}\n", m), false);
    EXPECT_EQ(check("shows_red", "skill a() {\n light_set(color=#FF0000)\n}\n", m), true);
    EXPECT_EQ(check("shows_red", "skill a() {\n light_set(color=#FFA500)\n}\n", m), false);
}

TEST(Checks, StandoffAndFacing) {
    const auto& m = fixtures::mobile();
    // The caller ends up at (3, 0).
    EXPECT_EQ(check("standoff", "skill a() {\n wait 5s\n navigate_to(x_m=2.2m, y_m=0m)\n}\n", m, "person_approaches_and_talks"), true);
    EXPECT_EQ(check("standoff", "skill a() {\n wait 5s\n navigate_to(x_m=3m, y_m=0m)\n}\n", m, "person_approaches_and_talks"), false);
    // Waving person at (2.5, 0.5): about 11 degrees to the left.
    EXPECT_EQ(check("faces_person", "skill a() {\n head_pan(angle_deg=11deg)\n}\n", m, "person_waves"), true);
    EXPECT_EQ(check("faces_person", "skill a() {\n base_rotate(angle_deg=120deg)\n}\n", m, "person_waves"), false);
    EXPECT_EQ(check("faces_person", "skill a() {\n body_pose(yaw_deg=11deg)\n}\n", fixtures::quadruped(), "person_waves"), true);
}

TEST(Checks, StaticCheckFollowsLibrarySkillsAndTrajectoryChecksNeedATrajectory) {
    SkillLibrary lib;
    lib.add(SkillEntry::from_source("skill near() {\n \"\"\"d\"\"\"\n if person_distance_lt(distance_m=2m) {\n wait 1s\n }\n}\n",
                                    SkillProvenance::Learned));
    const auto program = ebl::parse("skill a() {\n near()\n}\n");
    const auto s = robots::load_scenario("empty", fixtures::data_dir());
    EXPECT_EQ(run_check("uses_person_distance", {program, lib, s, nullptr}), true);
    EXPECT_EQ(run_check("uses_person_distance", {program, SkillLibrary{}, s, nullptr}), false);
    EXPECT_EQ(run_check("nods", {program, lib, s, nullptr}), std::nullopt);
    EXPECT_THROW(run_check("smiles", {program, lib, s, nullptr}), FormatError);
}

// ---- reference programs ------------------------------------------------------------

TEST(Reference, RecoverableShowsRedPatternThenGreenSet) {
    const auto t = run(util::read_file(fixtures::data_dir() / "reference" / "quadruped_recoverable.ebl"), fixtures::quadruped());
    const auto ev = light_events(t);
    std::size_t red = ev.size();
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (ev[i].mode != "set" && ev[i].mode != "off" && is_red(ev[i].rgb)) {
            red = i;
            break;
        }
    ASSERT_LT(red, ev.size());
    bool green_after = false;
    for (std::size_t i = red + 1; i < ev.size(); ++i) green_after |= ev[i].mode == "set" && is_green(ev[i].rgb);
    EXPECT_TRUE(green_after);
    // Turned away and came back.
    const auto heading = t.channel("heading_deg");
    EXPECT_LT(*std::min_element(heading.begin(), heading.end()), -30.0);
    EXPECT_NEAR(heading.back(), 0.0, 1e-6);
}

TEST(Reference, UnrecoverableShowsRedPatternThenHoldsABow) {
    const auto t = run(util::read_file(fixtures::data_dir() / "reference" / "quadruped_unrecoverable.ebl"), fixtures::quadruped());
    const auto ev = light_events(t);
    ASSERT_FALSE(ev.empty());
    EXPECT_TRUE(is_red(ev.front().rgb));
    EXPECT_NE(ev.front().mode, "set");
    const auto pitch = t.channel("body_pitch_deg");
    const auto height = t.channel("body_height_m");
    // The bow starts after the red pattern and is still held at the end for at least 2 s.
    std::size_t held = 0;
    for (std::size_t i = pitch.size(); i-- > 0 && pitch[i] >= 5.0 && height[i] < 0.45;) ++held;
    EXPECT_GE(held * t.step_s, 2.0);
    EXPECT_GT(t.frames[t.frames.size() - held].t, ev.front().t);
}

// ---- catalogs ---------------------------------------------------------------------------

TEST(Catalog, ShipsTheTenStudyBehaviors) {
    ASSERT_EQ(catalog().behaviors.size(), 10u);
    for (const auto id : kStudyBehaviors) EXPECT_NE(catalog().find(id), nullptr) << id;
    EXPECT_EQ(catalog().find("Acknowledge")->instruction, "Acknowledge a person walking by. You cannot speak.");
    EXPECT_EQ(catalog().find("Approach")->forbidden, std::vector<std::string>{"speech"});
}

TEST(Catalog, RejectsIncompleteDocuments) {
    auto doc = util::read_json(behaviors_file(fixtures::data_dir()));
    doc["behaviors"].erase(doc["behaviors"].begin());
    EXPECT_THROW(BehaviorCatalog::from_json(doc), FormatError);
    auto bad = util::read_json(behaviors_file(fixtures::data_dir()));
    bad["behaviors"][0]["checks"] = {"smiles"};
    EXPECT_THROW(BehaviorCatalog::from_json(bad), FormatError);
}

TEST(Catalog, FeedbackBankCoversTheGrid) {
    const auto bank = FeedbackBank::load(feedback_bank_file(fixtures::data_dir()));
    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& c : bank.cases) cells.insert({c.behavior, std::string(to_string(c.type))});
    EXPECT_EQ(cells.size(), 12u);
    for (const auto t : {FeedbackType::Insert, FeedbackType::Swap, FeedbackType::Loop, FeedbackType::Remove})
        EXPECT_EQ(feedback_type_from_string(to_string(t)), t);
    EXPECT_EQ(feedback_type_from_string("Rename"), std::nullopt);
}

// ---- suites under replay ---------------------------------------------------------------------

TEST(Suites, MobileBehaviorsAllSucceedAndHashIsStable) {
    std::set<std::string> hashes;
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 3; ++i) {
        auto ctx = replay_context();
        const auto r = run_behavior_suite(ctx, catalog(), "mobile_v1", 5);
        int ok = 0;
        for (const auto& row : r.rows) ok += row.success;
        EXPECT_EQ(ok, 50);
        hashes.insert(to_json(r).at("hash").get<std::string>());
    }
    EXPECT_EQ(hashes.size(), 1u);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(60));
}

TEST(Suites, ModularProgramsCarryNormsMarkers) {
    auto ctx = replay_context();
    const auto r = run_behavior_suite(ctx, catalog(), "mobile_v1", 5);
    // Excuse checks the distance; Approach never speaks and always nods first.
    for (const auto& s : r.row("Excuse")->slots) EXPECT_EQ(s.checks.at("uses_person_distance"), true);
    for (const auto& s : r.row("Approach")->slots) {
        EXPECT_EQ(s.checks.at("no_speech"), true);
        EXPECT_GT(s.calls.count("nod_once"), 0u);
    }
    EXPECT_EQ(r.row("Approach")->norm_violations, 1);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.docstring_warnings, 0) << row.behavior;
        EXPECT_EQ(row.positional_warnings, 0) << row.behavior;
    }
}

TEST(Suites, QuadrupedCountsAndClosure) {
    auto ctx = replay_context();
    const auto r = run_behavior_suite(ctx, catalog(), "quadruped_v1", 5);
    const auto exp = expected("behaviors_quadruped.json");
    std::set<std::string> allowed;
    for (const auto& p : fixtures::quadruped().primitives) allowed.insert(p.name);
    for (const auto& s : fixtures::quadruped().sensors) allowed.insert(s.name);
    for (const auto& [behavior, n] : exp.at("execution").items()) {
        const auto* row = r.row(behavior);
        ASSERT_NE(row, nullptr) << behavior;
        EXPECT_EQ(row->success, n.get<int>()) << behavior;
        EXPECT_TRUE(row->closure) << behavior;
        for (const auto& s : row->slots) {
            if (!s.success) continue;
            for (const auto& name : called_names(s.program->source)) EXPECT_TRUE(allowed.count(name)) << behavior << ": " << name;
        }
    }
    EXPECT_EQ(r.row("Approach")->norm_violations, exp.at("norms").at("Approach").get<int>());
}

TEST(Suites, AblationCountsAndFailureModes) {
    auto ctx = replay_context();
    const auto r = run_ablation_suite(ctx, catalog(), "mobile_v1", 5);
    const auto exp = expected("ablation.json");
    for (const auto& [behavior, n] : exp.at("ablated_execution").items()) {
        EXPECT_EQ(r.ablated.row(behavior)->success, n.get<int>()) << behavior;
        EXPECT_EQ(r.modular.row(behavior)->success, 5) << behavior;
    }
    EXPECT_EQ(r.ablated.row("Approach")->norm_violations, exp.at("ablated_norms").at("Approach").get<int>());
    // No ablated Excuse checks the distance; Follow hits undefined functions and wrong types.
    for (const auto& s : r.ablated.row("Excuse")->slots) {
        ASSERT_TRUE(s.program);
        for (const auto& name : called_names(s.program->source)) EXPECT_EQ(name.find("person_distance"), std::string::npos);
    }
    const auto& follow = r.ablated.row("Follow")->slots;
    EXPECT_TRUE(std::all_of(follow.begin(), follow.end(), [](const SlotResult& s) { return s.code == "UndefinedFunction"; }));
    bool wrong_type = false;
    for (const auto& s : follow) wrong_type |= s.message.find("TypeMismatch") != std::string::npos;
    EXPECT_TRUE(wrong_type);
    // Ablated Approach never nods.
    for (const auto& s : r.ablated.row("Approach")->slots) EXPECT_EQ(s.program->source.find("head_tilt"), std::string::npos);
    int ablated_doc = 0, modular_doc = 0;
    for (const auto& row : r.ablated.rows) ablated_doc += row.docstring_warnings;
    for (const auto& row : r.modular.rows) modular_doc += row.docstring_warnings;
    EXPECT_GE(ablated_doc, 40);
    EXPECT_EQ(modular_doc, 0);
}

TEST(Suites, ComposabilityMatrixMatchesExpected) {
    auto ctx = replay_context();
    const auto m = run_composability_suite(ctx, ComposeCatalog::load(compose_file(fixtures::data_dir())),
                                           SkillLibrary::load(seed_skills_file(fixtures::data_dir())), 5);
    const auto exp = expected("composability.json");
    EXPECT_EQ(m.columns, exp.at("columns").get<std::vector<std::string>>());
    ASSERT_EQ(m.rows.size(), exp.at("rows").size());
    for (const auto& row : m.rows) {
        const auto& e = exp.at("rows").at(row.target);
        for (const auto& col : m.columns) {
            const auto& cell = row.cells.at(col);
            if (e.at(col).is_null()) EXPECT_FALSE(cell.has_value()) << row.target << "/" << col;
            else EXPECT_EQ(cell, std::optional<int>(e.at(col).get<int>())) << row.target << "/" << col;
        }
    }
}

TEST(Suites, FeedbackGridSingleSampleVerifiesEveryCell) {
    auto ctx = replay_context();
    const auto r = run_feedback_suite(ctx, catalog(), FeedbackBank::load(feedback_bank_file(fixtures::data_dir())), "mobile_v1", 1);
    ASSERT_EQ(r.cells.size(), 12u);
    for (const auto& c : r.cells) {
        EXPECT_EQ(c.success, 1) << c.behavior << "/" << to_string(c.type);
        ASSERT_EQ(c.slots.size(), 1u);
        EXPECT_TRUE(c.slots[0].diff_applies) << c.behavior << "/" << to_string(c.type);
    }
}

TEST(Suites, FeedbackGridFiveSamplesMatchesExpectedCounts) {
    auto ctx = replay_context();
    const auto r = run_feedback_suite(ctx, catalog(), FeedbackBank::load(feedback_bank_file(fixtures::data_dir())), "mobile_v1", 5);
    const auto exp = expected("feedback.json").at("success");
    for (const auto& [behavior, row] : exp.items())
        for (const auto& [type, n] : row.items()) {
            const auto* c = r.cell(behavior, *feedback_type_from_string(type));
            ASSERT_NE(c, nullptr);
            EXPECT_EQ(c->success, n.get<int>()) << behavior << "/" << type;
        }
    // Removing a capability fails by calling functions that do not exist.
    for (const auto* b : {"Approach", "Acknowledge Stop"})
        EXPECT_EQ(r.cell(b, FeedbackType::Remove)->failures.at("UndefinedFunction"), 2) << b;
}

TEST(Suites, ScriptedSessionRunsTenRoundsThenHitsTheCap) {
    auto ctx = replay_context();
    auto script = ScriptedSession::load(scripted_session_file(fixtures::data_dir()));
    pipeline::MemoryLog log;
    const auto s = run_scripted_session(ctx, catalog(), script, &log);
    ASSERT_EQ(s.rounds.size(), 11u);
    EXPECT_EQ(s.round_index, 10);
    const std::vector<FeedbackRoute> routes = {
        FeedbackRoute::CodeOnly, FeedbackRoute::CodeOnly, FeedbackRoute::BehaviorAndCode, FeedbackRoute::CodeOnly,
        FeedbackRoute::BehaviorAndCode, FeedbackRoute::CodeOnly, FeedbackRoute::CodeOnly, FeedbackRoute::BehaviorAndCode,
        FeedbackRoute::CodeOnly, FeedbackRoute::BehaviorAndCode};
    for (std::size_t k = 1; k < s.rounds.size(); ++k) {
        EXPECT_EQ(s.rounds[k].feedback->route, routes[k - 1]) << k;
        EXPECT_EQ(s.rounds[k].robot_plan == s.rounds[k - 1].robot_plan, routes[k - 1] == FeedbackRoute::CodeOnly) << k;
    }
    script.feedback.push_back("One more, please.");
    auto again = replay_context();
    EXPECT_THROW(run_scripted_session(again, catalog(), script), MaxRoundsExceeded);
}

TEST(Suites, RecordingThroughAReplayBackendReproducesTheReport) {
    // A backend that answers from the shipped transcripts, recorded afresh.
    struct FromReplay : llm::CompletionBackend {
        std::shared_ptr<llm::Gateway> inner =
            llm::Gateway::replay(llm::Transcript::load_dir(fixtures::data_dir() / "transcripts"));
        std::string complete(const llm::CompletionRequest& r) override { return inner->complete(r); }
    };
    const auto dir = std::filesystem::temp_directory_path() / "genem_harness_record";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto rec = SuiteContext::with_gateway(llm::Gateway::record(std::make_shared<FromReplay>(), dir / "t.json"),
                                          fixtures::data_dir(), "replay");
    const auto first = to_json(run_behavior_suite(rec, catalog(), "quadruped_v1", 5));
    auto replay = SuiteContext::with_gateway(llm::Gateway::replay(llm::Transcript::load(dir / "t.json")), fixtures::data_dir(),
                                             "replay");
    const auto second = to_json(run_behavior_suite(replay, catalog(), "quadruped_v1", 5));
    EXPECT_EQ(first.at("hash"), second.at("hash"));
    std::filesystem::remove_all(dir);
}
