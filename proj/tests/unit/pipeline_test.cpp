#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "genem/pipeline/pipeline.hpp"

using namespace genem;
using namespace genem::pipeline;
using llm::StageTag;

namespace {

std::shared_ptr<const TemplateSet> templates() {
    static const auto t = std::make_shared<const TemplateSet>(TemplateSet::load(fixtures::data_dir() / "templates"));
    return t;
}

const std::string kHuman = "REASONING: A person would look at the other and smile.\nANSWER: Look at the person and nod.";
const std::string kPlan = "REASONING: Use the head.\nANSWER:\n1. Pan the head toward the person.\n2. Blink the light green.";
const std::string kCode = R"(REASONING: Two primitives.
ANSWER:
```ebl
skill greet() {
    """Look and blink."""
    head_pan(angle_deg=30deg)
    light_pattern(pattern="blink", color=#00FF00, times=2)
}
```)";
const std::string kBadCode = R"(REASONING: Oops.
ANSWER:
```ebl
skill greet() {
    """Look."""
    head_pan(angle_deg=120deg)
}
```)";

struct Rig {
    std::shared_ptr<llm::QueueBackend> backend = std::make_shared<llm::QueueBackend>();
    SkillLibrary library;
    MemoryLog log;
    Pipeline pipeline{llm::Gateway::passthrough(backend), templates(), fixtures::mobile(), library};
    Rig() { pipeline.set_log(&log); }

    void generation(const std::string& code = kCode) {
        backend->push(StageTag::InstructionFollowing, kHuman);
        backend->push(StageTag::RobotMotion, kPlan);
        backend->push(StageTag::CodeGen, code);
    }
    Session session() const {
        Session s;
        s.id = "s";
        s.instruction = {"Greet the person. You cannot speak.", {"speech"}, "mobile_v1"};
        return s;
    }
    const std::string& user(std::size_t i) const { return backend->requests().at(i).messages.at(1).content; }
};

std::size_t pos(const std::string& text, const std::string& needle) {
    const auto p = text.find(needle);
    EXPECT_NE(p, std::string::npos) << needle;
    return p;
}

}  // namespace

TEST(Sections, SplitAndWarnings) {
    auto o = split_sections("REASONING: because\nANSWER: do it", "REASONING:", "ANSWER:");
    EXPECT_EQ(o.reasoning, "because");
    EXPECT_EQ(o.answer, "do it");
    EXPECT_TRUE(o.warnings.empty());
    o = split_sections("just thinking\nANSWER: x", "REASONING:", "ANSWER:");
    EXPECT_EQ(o.reasoning, "just thinking");
    EXPECT_EQ(o.warnings.size(), 1u);
    o = split_sections("REASONING: only this", "REASONING:", "ANSWER:");
    EXPECT_FALSE(o.answer);
    // Marker must start a line.
    EXPECT_FALSE(split_sections("REASONING: the ANSWER: is inline", "REASONING:", "ANSWER:").answer);
}

TEST(Sections, NumberedSteps) {
    EXPECT_EQ(parse_numbered_steps("1. a\n2) b\n3. c d\n   e"), (std::vector<std::string>{"a", "b", "c d e"}));
    EXPECT_EQ(parse_numbered_steps("1. turn 2. wait 3. go"), (std::vector<std::string>{"turn", "wait", "go"}));
    EXPECT_EQ(parse_numbered_steps("1. move 0.5 m 2. stop"), (std::vector<std::string>{"move 0.5 m", "stop"}));
    EXPECT_TRUE(parse_numbered_steps("no list here").empty());
    EXPECT_TRUE(parse_numbered_steps("2. starts late").empty());
}

TEST(Sections, CodeBlock) {
    EXPECT_EQ(extract_code_block("x\n```ebl\nskill a() {}\n```\n"), "skill a() {}\n");
    EXPECT_FALSE(extract_code_block("no fence"));
    EXPECT_FALSE(extract_code_block("```ebl\nunterminated"));
}

TEST(Pipeline, GenerationThreadsArtifacts) {
    Rig rig;
    rig.generation();
    auto s = rig.session();
    rig.pipeline.run_generation(s);
    ASSERT_EQ(s.rounds.size(), 1u);
    EXPECT_EQ(s.human_plan()->expressive_motion, "Look at the person and nod.");
    EXPECT_EQ(s.current().robot_plan->steps.size(), 2u);
    EXPECT_EQ(s.current().program->entry_skill, "greet");
    ASSERT_EQ(rig.backend->requests().size(), 3u);

    const auto& u1 = rig.user(1);
    EXPECT_LT(pos(u1, "### Instruction"), pos(u1, "### Human expressive motion"));
    EXPECT_NE(u1.find("A person would look at the other and smile."), std::string::npos);
    const auto& u2 = rig.user(2);
    EXPECT_LT(pos(u2, "### Human expressive motion"), pos(u2, "### Robot plan"));
    EXPECT_NE(u2.find("1. Pan the head toward the person.\n2. Blink the light green."), std::string::npos);
    // Stage 3 sees only the expressive motion, not the reasoning.
    EXPECT_EQ(u2.find("smile"), std::string::npos);
    EXPECT_NE(rig.backend->requests()[2].messages[0].content.find("head_pan"), std::string::npos);

    int rounds = 0;
    for (const auto& e : rig.log.events) rounds += e["type"] == kRoundEvent;
    EXPECT_EQ(rounds, 1);
    EXPECT_THROW(rig.pipeline.run_generation(s), PreconditionError);
}

TEST(Pipeline, LibrarySignaturesInPrompts) {
    Rig rig;
    rig.library.add(SkillEntry::from_source("skill wave_hi(times: count = 2) {\n    \"\"\"Wave hello.\"\"\"\n    head_pan(angle_deg=10deg)\n}",
                                            SkillProvenance::Learned));
    rig.generation();
    auto s = rig.session();
    rig.pipeline.run_generation(s);
    const auto sig = render_signature(*rig.library.find("wave_hi"));
    EXPECT_NE(rig.backend->requests()[1].messages[0].content.find(sig), std::string::npos);
    EXPECT_NE(rig.backend->requests()[2].messages[0].content.find(sig), std::string::npos);
}

TEST(Pipeline, MissingAnswerReprompts) {
    Rig rig;
    rig.backend->push(StageTag::InstructionFollowing, "REASONING: hmm");
    rig.backend->push(StageTag::InstructionFollowing, kHuman);
    const auto h = rig.pipeline.expressive_instruction_following(rig.session().instruction);
    EXPECT_EQ(h.expressive_motion, "Look at the person and nod.");
    const auto& second = rig.backend->requests().at(1).messages;
    ASSERT_EQ(second.size(), 4u);
    EXPECT_EQ(second[2].role, "assistant");
    EXPECT_EQ(second[2].content, "REASONING: hmm");
}

TEST(Pipeline, MalformedAfterRepromptsExhausted) {
    Rig rig;
    for (int i = 0; i < 3; ++i) rig.backend->push(StageTag::RobotMotion, "REASONING: x\nANSWER: no steps");
    HumanMotionPlan h{"c", "e", {}};
    try {
        rig.pipeline.human_to_robot_motion(rig.session().instruction, h, nullptr, nullptr);
        FAIL();
    } catch (const MalformedStageOutput& e) {
        EXPECT_EQ(e.stage(), StageTag::RobotMotion);
        EXPECT_EQ(e.raw(), "REASONING: x\nANSWER: no steps");
    }
    EXPECT_EQ(rig.backend->requests().size(), 3u);
    EXPECT_EQ(rig.log.events.back()["type"], kStageErrorEvent);
}

TEST(Pipeline, MissingFenceIsImmediatelyMalformed) {
    Rig rig;
    rig.generation("REASONING: x\nANSWER: skill a() {}");
    auto s = rig.session();
    EXPECT_THROW(rig.pipeline.run_generation(s), MalformedStageOutput);
    EXPECT_EQ(rig.backend->requests().size(), 3u);
    EXPECT_FALSE(s.generated());
}

TEST(Pipeline, RepairRound) {
    Rig rig;
    rig.generation(kBadCode);
    rig.backend->push(StageTag::CodeGen, kCode);
    auto s = rig.session();
    rig.pipeline.run_generation(s);
    const auto& repair = rig.backend->requests().at(3).messages;
    ASSERT_EQ(repair.size(), 4u);
    EXPECT_NE(repair[3].content.find("### Validation errors"), std::string::npos);
    EXPECT_NE(repair[3].content.find("RangeViolation"), std::string::npos);
}

TEST(Pipeline, StillInvalidAfterRepairIsRejected) {
    Rig rig;
    rig.generation(kBadCode);
    rig.backend->push(StageTag::CodeGen, kBadCode);
    auto s = rig.session();
    try {
        rig.pipeline.run_generation(s);
        FAIL();
    } catch (const CodeRejected& e) {
        EXPECT_EQ(e.primary_code(), "RangeViolation");
    }
}

TEST(Pipeline, ForbiddenModalityRejected) {
    Rig rig;
    const std::string speaks = "REASONING: r\nANSWER:\n```ebl\nskill a() {\n    \"\"\"d\"\"\"\n    say(text=\"hi\")\n}\n```";
    rig.generation(speaks);
    rig.backend->push(StageTag::CodeGen, speaks);
    auto s = rig.session();
    try {
        rig.pipeline.run_generation(s);
        FAIL();
    } catch (const CodeRejected& e) {
        EXPECT_EQ(e.primary_code(), "ModalityForbidden");
    }
}

TEST(Pipeline, RepairReplayMissKeepsFirstReport) {
    Rig rig;
    rig.generation(kBadCode);  // nothing queued for the repair
    auto s = rig.session();
    try {
        rig.pipeline.run_generation(s);
        FAIL();
    } catch (const CodeRejected& e) {
        EXPECT_TRUE(e.report().has(ebl::ErrorCode::RangeViolation));
    }
}

TEST(Pipeline, ParseErrorIsRejected) {
    Rig rig;
    const std::string broken = "REASONING: r\nANSWER:\n```ebl\nskill a( {\n```";
    rig.generation(broken);
    rig.backend->push(StageTag::CodeGen, broken);
    auto s = rig.session();
    try {
        rig.pipeline.run_generation(s);
        FAIL();
    } catch (const CodeRejected& e) {
        EXPECT_EQ(e.primary_code(), "ParseError");
        EXPECT_TRUE(e.parse_error());
    }
}

TEST(Pipeline, FeedbackRouting) {
    Rig rig;
    rig.generation();
    auto s = rig.session();
    rig.pipeline.run_generation(s);

    rig.backend->push(StageTag::Feedback, "REASONING: slower\nANSWER: [Change: How robot does it] Blink three times.\nROUTE: CodeOnly");
    rig.backend->push(StageTag::CodeGen, kCode);
    rig.pipeline.run_feedback_round(s, "blink more");
    ASSERT_EQ(s.rounds.size(), 2u);
    EXPECT_EQ(s.round_index, 1);
    EXPECT_EQ(s.rounds[1].robot_plan, s.rounds[0].robot_plan);
    EXPECT_EQ(s.rounds[1].feedback->route, FeedbackRoute::CodeOnly);
    EXPECT_EQ(s.rounds[1].feedback->change_summary, "[Change: How robot does it] Blink three times.");
    EXPECT_FALSE(s.rounds[1].human_plan);
    const auto& code_user = rig.user(4);
    EXPECT_LT(pos(code_user, "### Previous code"), pos(code_user, "### Feedback"));
    EXPECT_NE(code_user.find("Blink three times."), std::string::npos);
    EXPECT_EQ(code_user.find("ROUTE:"), std::string::npos);

    rig.backend->push(StageTag::Feedback, "REASONING: r\nANSWER: [Change: What robot should do] Also turn.\nROUTE: BehaviorAndCode");
    rig.backend->push(StageTag::RobotMotion, kPlan);
    rig.backend->push(StageTag::CodeGen, kCode);
    rig.pipeline.run_feedback_round(s, "turn too");
    EXPECT_NE(s.rounds[2].robot_plan, s.rounds[1].robot_plan);
    const auto& plan_user = rig.user(6);
    EXPECT_LT(pos(plan_user, "### Previous robot plan"), pos(plan_user, "### Feedback"));
    EXPECT_NE(plan_user.find("Also turn."), std::string::npos);
}

TEST(Pipeline, AmbiguousRouteReprompts) {
    Rig rig;
    rig.backend->push(StageTag::Feedback, "REASONING: r\nANSWER: x\nROUTE: CodeOnly\nROUTE: BehaviorAndCode");
    rig.backend->push(StageTag::Feedback, "REASONING: r\nANSWER: x\nROUTE: Sometimes");
    rig.backend->push(StageTag::Feedback, "REASONING: r\nANSWER: x\nROUTE: CodeOnly");
    const auto program = BehaviorProgram::from_source("skill a() {\n    \"\"\"d\"\"\"\n    wait 1s\n}");
    const auto f = rig.pipeline.propagate_feedback(rig.session().instruction, {"c", {"wait"}}, program, "faster");
    EXPECT_EQ(f.route, FeedbackRoute::CodeOnly);
    EXPECT_EQ(rig.backend->requests().size(), 3u);
}

TEST(Pipeline, MaxRounds) {
    Rig rig;
    rig.generation();
    auto s = rig.session();
    s.max_rounds = 1;
    rig.pipeline.run_generation(s);
    rig.backend->push(StageTag::Feedback, "REASONING: r\nANSWER: more\nROUTE: CodeOnly");
    rig.backend->push(StageTag::CodeGen, kCode);
    rig.pipeline.run_feedback_round(s, "more");
    EXPECT_THROW(rig.pipeline.run_feedback_round(s, "more"), MaxRoundsExceeded);
    Session fresh = rig.session();
    EXPECT_THROW(rig.pipeline.run_feedback_round(fresh, "x"), PreconditionError);
}

TEST(Pipeline, AblationIsOneCallWithoutRepair) {
    Rig rig;
    rig.backend->push(StageTag::EndToEndAblation, kBadCode);
    EXPECT_THROW(rig.pipeline.end_to_end_ablation(rig.session().instruction), CodeRejected);
    EXPECT_EQ(rig.backend->requests().size(), 1u);
    EXPECT_EQ(rig.user(0), "### Instruction\nGreet the person. You cannot speak.");
}

TEST(Pipeline, SampleCandidates) {
    Rig rig;
    rig.generation();
    rig.generation(kBadCode);
    rig.backend->push(StageTag::CodeGen, kBadCode);
    const auto c = sample_candidates(rig.pipeline, rig.session().instruction, 2);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_TRUE(c[0].error_code.empty());
    EXPECT_TRUE(c[0].program);
    EXPECT_EQ(c[1].error_code, "RangeViolation");
    EXPECT_EQ(rig.backend->requests()[3].sample_index, 1);
    EXPECT_EQ(rig.pipeline.options().sample_index, 0);
}
