#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "genem/ebl/validator.hpp"

using namespace genem;
using namespace genem::ebl;

namespace {

ValidationReport check(const std::string& src, const std::vector<std::string>& forbidden = {},
                       const robots::EmbodimentManifest& m = fixtures::mobile(),
                       const SkillLibrary& lib = fixtures::no_skills()) {
    return validate(parse(src), m, lib, forbidden);
}

}  // namespace

TEST(Validator, UndefinedFunction) {
    const auto r = check("skill a() { \"\"\"d\"\"\" do_a_flip() }");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].code, ErrorCode::UndefinedFunction);
}

TEST(Validator, StringForAngleIsTypeMismatch) {
    const auto r = check("skill a() { \"\"\"d\"\"\" base_rotate(angle_deg=\"left\") }");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].code, ErrorCode::TypeMismatch);
}

TEST(Validator, CleanProgram) {
    const auto r = check(R"(skill a() {
        """Look and light."""
        head_pan(angle_deg=30deg)
        base_translate(distance_m=0.5)
        light_pattern(pattern="blink", color=#FF0000, times=2)
        if person_distance_lt(distance_m=2m) { say(text="hello") }
        wait 1s
    })");
    EXPECT_TRUE(r.valid()) << r.summary();
    EXPECT_TRUE(r.warnings.empty()) << r.summary();
}

TEST(Validator, ArgumentFindings) {
    EXPECT_TRUE(check("skill a() { head_pan(angel_deg=3deg) }").has(ErrorCode::UnknownArgument));
    EXPECT_TRUE(check("skill a() { head_pan() }").has(ErrorCode::MissingRequiredArgument));
    EXPECT_TRUE(check("skill a() { head_pan(angle_deg=1m) }").has(ErrorCode::UnitMismatch));
    EXPECT_TRUE(check("skill a() { head_pan(angle_deg=120deg) }").has(ErrorCode::RangeViolation));
    EXPECT_TRUE(check("skill a() { play_sound(sound=\"moo\") }").has(ErrorCode::RangeViolation));
    EXPECT_TRUE(check("skill a() { light_pattern(pattern=\"blink\", color=#FFFFFF, times=1.5) }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a() { light_set(color=\"red\") }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a() { head_pan(angle_deg=nowhere) }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a(d: distance) { head_pan(angle_deg=d) }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a(n: count) { light_pattern(pattern=\"blink\", color=#FFFFFF, times=n) }").valid());
    EXPECT_TRUE(check("skill a() { wait 61s }").has(ErrorCode::RangeViolation));
    EXPECT_TRUE(check("skill a() { wait 2deg }").has(ErrorCode::UnitMismatch));
}

TEST(Validator, PredicatesMustBeBooleanSensors) {
    EXPECT_TRUE(check("skill a() { if head_pan(angle_deg=1) { wait 1 } }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a() { if person_distance() { wait 1 } }").has(ErrorCode::TypeMismatch));
    EXPECT_TRUE(check("skill a() { person_visible() }").has(ErrorCode::TypeMismatch));
}

TEST(Validator, RepeatAndNestingBounds) {
    EXPECT_TRUE(check("skill a() { repeat 101 { wait 1 } }").has(ErrorCode::RangeViolation));
    EXPECT_TRUE(check("skill a() { repeat 0 { wait 1 } }").has(ErrorCode::RangeViolation));
    std::string eight = "skill a() { ", nine = "skill a() { ";
    for (int i = 0; i < 7; ++i) eight += "repeat 1 { ";
    for (int i = 0; i < 8; ++i) nine += "repeat 1 { ";
    eight += "wait 1 " + std::string(7, '}') + " }";
    nine += "wait 1 " + std::string(8, '}') + " }";
    EXPECT_TRUE(check(eight).valid()) << check(eight).summary();
    EXPECT_TRUE(check(nine).has(ErrorCode::RangeViolation));
}

TEST(Validator, Recursion) {
    EXPECT_TRUE(check("skill a() { a() }").has(ErrorCode::RecursionDetected));
    EXPECT_TRUE(check("skill b() { c() }\nskill c() { b() }\nskill a() { b() }").has(ErrorCode::RecursionDetected));
    EXPECT_FALSE(check("skill b() { wait 1 }\nskill a() { b() b() }").has(ErrorCode::RecursionDetected));
}

TEST(Validator, ForbiddenModality) {
    const auto r = check("skill a() { say(text=\"hi\") }", {"speech"});
    EXPECT_TRUE(r.has(ErrorCode::ModalityForbidden));
    // Through a helper too.
    EXPECT_TRUE(check("skill h() { say(text=\"hi\") }\nskill a() { h() }", {"speech"}).has(ErrorCode::ModalityForbidden));
    EXPECT_TRUE(check("skill a() { play_sound(sound=\"beep\") }", {"speech"}).valid());
}

TEST(Validator, Warnings) {
    const auto r = check("skill unused() { wait 1 }\nskill a() { head_pan(30deg) }");
    EXPECT_TRUE(r.valid()) << r.summary();
    EXPECT_TRUE(r.has(WarningCode::MissingDocstring));
    EXPECT_TRUE(r.has(WarningCode::PositionalStyle));
    EXPECT_TRUE(r.has(WarningCode::UnusedSkill));
}

TEST(Validator, QuadrupedHasNoSpeechOrHead) {
    const auto& q = fixtures::quadruped();
    EXPECT_TRUE(check("skill a() { say(text=\"x\") }", {}, q).has(ErrorCode::UndefinedFunction));
    EXPECT_TRUE(check("skill a() { head_pan(angle_deg=1) }", {}, q).has(ErrorCode::UndefinedFunction));
    EXPECT_TRUE(check("skill a() { bow() body_pose(pitch_deg=10deg) stand() }", {}, q).valid());
}

TEST(Validator, LibrarySkills) {
    SkillLibrary lib;
    lib.add(SkillEntry::from_source(
        "skill nod_head(times: count = 2) { \"\"\"Nod.\"\"\" repeat 2 { head_tilt(angle_deg=15deg) head_tilt(angle_deg=0deg) } }",
        SkillProvenance::BuiltinExample));
    lib.add(SkillEntry::from_source("skill greet() { \"\"\"Say hi.\"\"\" say(text=\"hi\") }", SkillProvenance::Learned));
    EXPECT_TRUE(check("skill a() { nod_head(times=3) }", {}, fixtures::mobile(), lib).valid());
    EXPECT_TRUE(check("skill a() { nod_head(speed=3) }", {}, fixtures::mobile(), lib).has(ErrorCode::UnknownArgument));
    EXPECT_TRUE(check("skill a() { greet() }", {"speech"}, fixtures::mobile(), lib).has(ErrorCode::ModalityForbidden));
    // nod_head uses the head, which the quadruped lacks.
    EXPECT_TRUE(check("skill a() { nod_head() }", {}, fixtures::quadruped(), lib).has(ErrorCode::UndefinedFunction));
    const auto mods = modalities_used(parse("skill a() { greet() nod_head() }"), fixtures::mobile(), lib);
    EXPECT_EQ(mods, (std::vector<std::string>{"head", "speech"}));
}

TEST(Validator, ReportJson) {
    const auto j = to_json(check("skill a() { do_a_flip() }"));
    EXPECT_EQ(j["valid"], false);
    EXPECT_EQ(j["errors"][0]["code"], "UndefinedFunction");
    EXPECT_EQ(j["warnings"][0]["code"], "MissingDocstring");
}
