#include <gtest/gtest.h>

#include <random>

#include "genem/ebl/diff.hpp"
#include "genem/ebl/parser.hpp"
#include "genem/ebl/printer.hpp"

using namespace genem::ebl;

namespace {

EditScript diff(const std::string& a, const std::string& b) { return ast_diff(parse(a), parse(b)); }

void expect_replays(const std::string& a, const std::string& b) {
    const auto script = diff(a, b);
    EXPECT_EQ(apply_edit_script(flatten(parse(a)).body, script), flatten(parse(b)).body) << a << "\n=>\n" << b;
}

}  // namespace

TEST(Diff, IdenticalIsEmpty) {
    const auto src = "skill a() { head_pan(angle_deg=10) wait 1 }";
    EXPECT_TRUE(diff(src, src).empty());
}

TEST(Diff, InsertBefore) {
    const auto script = diff("skill nod() { head_tilt(angle_deg=10) head_tilt(angle_deg=0) }\nskill a() { base_rotate(angle_deg=90) }",
                             "skill nod() { head_tilt(angle_deg=10) head_tilt(angle_deg=0) }\nskill a() { nod() base_rotate(angle_deg=90) }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(describe(script[0]), "InsertedCall(nod, before=base_rotate)");
    EXPECT_EQ(script[0].statements.size(), 2u);
}

TEST(Diff, AdjacentSwap) {
    const auto script = diff("skill a() { say(text=\"x\") base_translate(distance_m=1) }",
                             "skill a() { base_translate(distance_m=1) say(text=\"x\") }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(script[0].kind, EditKind::SwappedOrder);
    EXPECT_EQ(describe(script[0]), "SwappedOrder(say, base_translate)");
}

TEST(Diff, SwapOfInlinedHelpers) {
    const auto helpers = std::string("skill p() { head_pan(angle_deg=10) head_pan(angle_deg=0) }\n"
                                     "skill q() { light_set(color=#FF0000) wait 1 light_off() }\n");
    const auto script = diff(helpers + "skill a() { p() q() }", helpers + "skill a() { q() p() }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(script[0].kind, EditKind::SwappedOrder);
    EXPECT_EQ(script[0].length, 2u);
    EXPECT_EQ(script[0].second_length, 3u);
}

TEST(Diff, WrapInRepeat) {
    const auto script = diff("skill a() { wait 1 head_tilt(angle_deg=10) head_tilt(angle_deg=0) }",
                             "skill a() { wait 1 repeat 3 { head_tilt(angle_deg=10) head_tilt(angle_deg=0) } }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(script[0].kind, EditKind::WrappedInRepeat);
    EXPECT_EQ(script[0].repeat_count, 3);
    EXPECT_EQ(script[0].length, 2u);
}

TEST(Diff, RemoveAndRetarget) {
    auto script = diff("skill a() { say(text=\"x\") wait 1 }", "skill a() { wait 1 }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(describe(script[0]), "RemovedCall(say)");
    script = diff("skill a() { say(text=\"x\") wait 1 }", "skill a() { play_sound(sound=\"beep\") wait 1 }");
    ASSERT_EQ(script.size(), 1u);
    EXPECT_EQ(describe(script[0]), "RetargetedCall(say -> play_sound)");
}

TEST(Diff, ReplaysHandPickedPairs) {
    expect_replays("skill a() { wait 1 }", "skill a() { }");
    expect_replays("skill a() { }", "skill a() { wait 1 light_off() }");
    expect_replays("skill a() { wait 1 wait 2 wait 3 }", "skill a() { wait 3 wait 1 wait 2 }");
    expect_replays("skill h(x: angle) { head_pan(angle_deg=x) }\nskill a() { h(x=5) wait 1 }",
                   "skill h(x: angle) { head_pan(angle_deg=x) }\nskill a() { wait 1 h(x=7) h(x=5) }");
}

// Random statement sequences over a small alphabet; the script must replay exactly.
TEST(Diff, ReplaysRandomPairs) {
    std::mt19937 rng(7);
    const std::vector<std::string> alphabet = {"wait 1", "light_off()", "head_pan(angle_deg=10)",
                                               "say(text=\"a\")", "repeat 2 { wait 1 light_off() }",
                                               "repeat 3 { head_pan(angle_deg=10) }"};
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 7);
    for (int trial = 0; trial < 300; ++trial) {
        std::string a = "skill a() { ", b = "skill a() { ";
        for (auto n = len(rng); n > 0; --n) a += alphabet[pick(rng)] + " ";
        for (auto n = len(rng); n > 0; --n) b += alphabet[pick(rng)] + " ";
        expect_replays(a + "}", b + "}");
    }
}

TEST(Diff, FlattenSubstitutesArguments) {
    const auto flat = flatten(parse("skill h(x: angle = 3deg) { head_pan(angle_deg=x) }\nskill a(y: angle) { h() h(x=y) }"));
    ASSERT_EQ(flat.body.size(), 2u);
    EXPECT_EQ(print(flat.body[0]), "head_pan(angle_deg=3deg)");
    EXPECT_EQ(print(flat.body[1]), "head_pan(angle_deg=y)");
    EXPECT_EQ(flat.origin, (std::vector<std::size_t>{0, 1}));
}
