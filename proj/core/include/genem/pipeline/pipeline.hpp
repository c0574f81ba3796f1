#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/skill_library.hpp"
#include "genem/domain/types.hpp"
#include "genem/ebl/validator.hpp"
#include "genem/llm/gateway.hpp"
#include "genem/pipeline/templates.hpp"
#include "genem/robots/manifest.hpp"

namespace genem::pipeline {

class MalformedStageOutput : public Error {
public:
    MalformedStageOutput(llm::StageTag stage, const std::string& message, std::string raw)
        : Error("MalformedStageOutput", std::string(llm::to_string(stage)) + ": " + message), stage_(stage),
          raw_(std::move(raw)) {}
    llm::StageTag stage() const noexcept { return stage_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    llm::StageTag stage_;
    std::string raw_;
};

// Generated code that is still invalid after the repair round (or, in the
// ablation, at once). `parse_error` is set when the code did not parse.
class CodeRejected : public Error {
public:
    CodeRejected(llm::StageTag stage, ebl::ValidationReport report, std::optional<std::string> parse_error, std::string raw);
    llm::StageTag stage() const noexcept { return stage_; }
    const ebl::ValidationReport& report() const noexcept { return report_; }
    const std::optional<std::string>& parse_error() const noexcept { return parse_error_; }
    const std::string& raw() const noexcept { return raw_; }
    // First error code ("ParseError" for unparsable code).
    std::string primary_code() const;

private:
    llm::StageTag stage_;
    ebl::ValidationReport report_;
    std::optional<std::string> parse_error_;
    std::string raw_;
};

// Reasoning/answer split of one completion.
struct StageOutput {
    std::string raw;
    std::string reasoning;
    std::optional<std::string> answer;
    std::vector<std::string> warnings;
};

StageOutput split_sections(const std::string& raw, const std::string& reasoning_marker, const std::string& answer_marker);
// Items of a sequentially numbered list ("1." or "1)"), possibly inline.
std::vector<std::string> parse_numbered_steps(const std::string& text);
// Contents of the first fenced code block, if any.
std::optional<std::string> extract_code_block(const std::string& text);

// Receives an event per stage output, error and finished round. Events are
// appended before the pipeline moves on.
class SessionLog {
public:
    virtual ~SessionLog() = default;
    virtual void append(const nlohmann::json& event) = 0;
};

class MemoryLog : public SessionLog {
public:
    void append(const nlohmann::json& event) override { events.push_back(event); }
    std::vector<nlohmann::json> events;
};

struct PipelineOptions {
    std::string model_id = std::string(llm::kDefaultModel);
    double temperature = 0.0;
    int sample_index = 0;
    int answer_reprompts = 2;  // extra tries when the answer section or route is missing
};

// The four prompt-chained stages plus the single-call ablation. Stages are
// independent completions, each carrying its whole context.
class Pipeline {
public:
    Pipeline(std::shared_ptr<llm::Gateway> gateway, std::shared_ptr<const TemplateSet> templates,
             const robots::EmbodimentManifest& manifest, const SkillLibrary& library, PipelineOptions options = {});

    void set_log(SessionLog* log) { log_ = log; }
    void set_sample_index(int k) { options_.sample_index = k; }
    const PipelineOptions& options() const { return options_; }

    HumanMotionPlan expressive_instruction_following(const Instruction& instruction);
    RobotMotionPlan human_to_robot_motion(const Instruction& instruction, const HumanMotionPlan& human,
                                          const RobotMotionPlan* prev_plan, const FeedbackEntry* prev_feedback);
    BehaviorProgram generate_code(const Instruction& instruction, const HumanMotionPlan& human,
                                  const RobotMotionPlan& robot, const RobotMotionPlan* prev_plan,
                                  const BehaviorProgram* prev_program, const FeedbackEntry* prev_feedback);
    FeedbackEntry propagate_feedback(const Instruction& instruction, const RobotMotionPlan& robot,
                                     const BehaviorProgram& program, const std::string& user_text);
    BehaviorProgram end_to_end_ablation(const Instruction& instruction);

    // Stages 1-3 for round 0. Throws PreconditionError when already generated.
    void run_generation(Session& session);
    // Stage 4 then, by route, stages 2+3 or 3 only. Throws MaxRoundsExceeded.
    void run_feedback_round(Session& session, const std::string& user_text);

    // Prompt assembly, exposed for inspection.
    llm::CompletionRequest instruction_prompt(const Instruction& instruction) const;
    llm::CompletionRequest robot_motion_prompt(const Instruction& instruction, const HumanMotionPlan& human,
                                               const RobotMotionPlan* prev_plan, const FeedbackEntry* prev_feedback) const;
    llm::CompletionRequest code_prompt(const Instruction& instruction, const HumanMotionPlan& human,
                                       const RobotMotionPlan& robot, const RobotMotionPlan* prev_plan,
                                       const BehaviorProgram* prev_program, const FeedbackEntry* prev_feedback) const;
    llm::CompletionRequest feedback_prompt(const Instruction& instruction, const RobotMotionPlan& robot,
                                           const BehaviorProgram& program, const std::string& user_text) const;
    llm::CompletionRequest ablation_prompt(const Instruction& instruction) const;

private:
    llm::CompletionRequest make_request(llm::StageTag stage, std::string system, std::string user) const;
    std::string library_block() const;
    // Calls the gateway, logs the attempt, and re-prompts while `accept` rejects the output.
    StageOutput ask(llm::CompletionRequest request, const std::function<std::optional<std::string>(StageOutput&)>& accept);
    // Extracts, parses and validates the code; one repair round when `repair`.
    BehaviorProgram compile(llm::CompletionRequest request, const std::vector<std::string>& forbidden, bool repair);
    void log(nlohmann::json event);

    std::shared_ptr<llm::Gateway> gateway_;
    std::shared_ptr<const TemplateSet> templates_;
    const robots::EmbodimentManifest& manifest_;
    const SkillLibrary& library_;
    PipelineOptions options_;
    SessionLog* log_ = nullptr;
    int round_ = 0;
};

// One of n samples of the same instruction.
struct Candidate {
    int sample_index = 0;
    std::optional<Session> session;  // set on success
    std::optional<BehaviorProgram> program;
    std::string error_code;  // empty on success
    std::string error_message;
    std::optional<ebl::ValidationReport> report;  // for CodeRejected
    std::string raw;                              // failing stage output, when there is one
};

// Runs generation n times with sample indices 0..n-1; failures are recorded per slot.
std::vector<Candidate> sample_candidates(Pipeline& pipeline, const Instruction& instruction, int n);

// Session events written by the pipeline carry this type field.
inline constexpr std::string_view kStageEvent = "stage_output";
inline constexpr std::string_view kStageErrorEvent = "stage_error";
inline constexpr std::string_view kRoundEvent = "round";

}  // namespace genem::pipeline
