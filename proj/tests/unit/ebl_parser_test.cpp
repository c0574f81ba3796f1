#include <gtest/gtest.h>

#include "genem/ebl/parser.hpp"
#include "genem/ebl/printer.hpp"

using namespace genem::ebl;

TEST(Parser, MinimalSkillWithOneWait) {
    const auto p = parse("skill idle() { wait 1s }");
    ASSERT_EQ(p.skills.size(), 1u);
    ASSERT_EQ(p.skills[0].body.size(), 1u);
    const auto* w = std::get_if<Wait>(&p.skills[0].body[0].node);
    ASSERT_NE(w, nullptr);
    EXPECT_DOUBLE_EQ(std::get<NumberLit>(w->duration).value, 1.0);
}

TEST(Parser, UnterminatedDocstringPointsAtOpeningQuote) {
    try {
        parse("skill a() {\n  \"\"\"never closed\n  wait 1s\n}\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.code(), "ParseError");
    }
}

TEST(Parser, ReportsExpectedTokens) {
    try {
        parse("skill a( { }");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_FALSE(e.expected().empty());
        EXPECT_EQ(e.line(), 1);
    }
}

TEST(Parser, FullGrammar) {
    const auto p = parse(R"(
// helper first
skill nod(times: count = 2, depth: angle = 15deg) {
    """Nod the head."""
    repeat 3 {
        head_tilt(angle_deg=depth)
        head_tilt(angle_deg=-5.5)
    }
}

skill greet() {
    """Greet."""
    if person_distance_lt(distance_m=1.5m) {
        say(text="hi \"there\"")
    } else {
        light_set(color=#00ff7F);
    }
    nod(times=1)
    wait 0.5s
}
)");
    ASSERT_EQ(p.skills.size(), 2u);
    EXPECT_EQ(p.entry()->name, "greet");
    const auto& nod = p.skills[0];
    EXPECT_EQ(nod.docstring, "Nod the head.");
    ASSERT_EQ(nod.params.size(), 2u);
    EXPECT_EQ(nod.params[1].type, SemanticType::Angle);
    const auto& rep = std::get<Repeat>(nod.body[0].node);
    EXPECT_EQ(rep.count, 3);
    const auto& branch = std::get<If>(p.skills[1].body[0].node);
    EXPECT_EQ(branch.predicate.target, "person_distance_lt");
    ASSERT_TRUE(branch.else_body.has_value());
    const auto& set = std::get<Call>((*branch.else_body)[0].node);
    EXPECT_EQ(std::get<ColorLit>(set.args[0].value).rgb, 0x00FF7Fu);
    EXPECT_EQ(std::get<TextLit>(std::get<Call>(branch.then_body[0].node).args[0].value).value, "hi \"there\"");
}

TEST(Parser, PositionalArgumentsParse) {
    const auto p = parse("skill a() { head_pan(30deg) }");
    EXPECT_TRUE(std::get<Call>(p.skills[0].body[0].node).args[0].name.empty());
}

TEST(Printer, RoundTripsCorpus) {
    const char* corpus[] = {
        "skill a() { wait 1s }",
        "skill a(x: distance = 1.25m, c: color = #0A0B0C, t: text = \"hey\") { \"\"\"Doc.\"\"\" base_translate(distance_m=x) }",
        "skill h() { head_tilt(angle_deg=-10deg) }\nskill a() { repeat 2 { h() } if person_visible() { say(text=\"a\\\\b\") } }",
        "skill a() { if person_visible() { wait 1 } else { repeat 100 { light_off() } } }",
        "skill a() { light_pattern(pattern=\"blink\", color=#FF0000, times=3) wait 0.25s }",
    };
    for (const auto* src : corpus) {
        const auto p = parse(src);
        const auto printed = print(p);
        EXPECT_EQ(parse(printed), p) << printed;
        EXPECT_EQ(print(parse(printed)), printed);
    }
}

TEST(Printer, NumberFormatting) {
    EXPECT_EQ(format_number(NumberLit{90, Unit::Deg, true}), "90deg");
    EXPECT_EQ(format_number(NumberLit{0.5, Unit::S, false}), "0.5s");
    EXPECT_EQ(format_number(NumberLit{2, Unit::None, false}), "2.0");
}
