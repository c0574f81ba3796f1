#include "genem/pipeline/pipeline.hpp"

#include <regex>

#include "genem/domain/json.hpp"
#include "genem/ebl/parser.hpp"

namespace genem::pipeline {

using llm::StageTag;
using nlohmann::json;

CodeRejected::CodeRejected(StageTag stage, ebl::ValidationReport report, std::optional<std::string> parse_error,
                           std::string raw)
    : Error("CodeRejected", std::string(llm::to_string(stage)) + ": generated code rejected: " +
                                (parse_error ? *parse_error : report.summary())),
      stage_(stage), report_(std::move(report)), parse_error_(std::move(parse_error)), raw_(std::move(raw)) {}

std::string CodeRejected::primary_code() const {
    if (parse_error_) return "ParseError";
    if (!report_.errors.empty()) return std::string(ebl::to_string(report_.errors.front().code));
    return "CodeRejected";
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Position of `marker` at the start of a line, or npos.
std::size_t find_at_line_start(const std::string& text, const std::string& marker, std::size_t from = 0) {
    for (auto pos = text.find(marker, from); pos != std::string::npos; pos = text.find(marker, pos + 1)) {
        std::size_t b = pos;
        while (b > 0 && (text[b - 1] == ' ' || text[b - 1] == '\t')) --b;
        if (b == 0 || text[b - 1] == '\n') return pos;
    }
    return std::string::npos;
}

std::string render_steps(const RobotMotionPlan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) out += std::to_string(i + 1) + ". " + plan.steps[i] + "\n";
    return trim(out);
}

std::string section(const std::string& title, const std::string& body) { return "### " + title + "\n" + trim(body) + "\n"; }

json messages_json(const std::vector<llm::Message>& messages) {
    json out = json::array();
    for (const auto& m : messages) out.push_back({{"role", m.role}, {"content", m.content}});
    return out;
}

}  // namespace

StageOutput split_sections(const std::string& raw, const std::string& reasoning_marker, const std::string& answer_marker) {
    StageOutput out;
    out.raw = raw;
    const auto a = find_at_line_start(raw, answer_marker);
    const auto r = find_at_line_start(raw, reasoning_marker);
    const auto reasoning_end = a == std::string::npos ? raw.size() : a;
    if (r != std::string::npos && r < reasoning_end) {
        out.reasoning = trim(std::string_view(raw).substr(r + reasoning_marker.size(), reasoning_end - r - reasoning_marker.size()));
    } else {
        out.reasoning = trim(std::string_view(raw).substr(0, reasoning_end));
        out.warnings.push_back(out.reasoning.empty() ? "reasoning section missing" : "reasoning marker missing");
    }
    if (out.reasoning.empty() && out.warnings.empty()) out.warnings.push_back("reasoning section empty");
    if (a != std::string::npos) {
        auto answer = trim(std::string_view(raw).substr(a + answer_marker.size()));
        if (!answer.empty()) out.answer = std::move(answer);
    }
    return out;
}

std::vector<std::string> parse_numbered_steps(const std::string& text) {
    static const std::regex item(R"((^|\s)(\d{1,3})[.)](?=\s))");
    std::vector<std::pair<std::size_t, std::size_t>> bounds;  // (item start, marker start)
    int expected = 1;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), item); it != std::sregex_iterator(); ++it) {
        if (std::stoi((*it)[2].str()) != expected) continue;
        const auto marker = static_cast<std::size_t>(it->position(2));
        bounds.emplace_back(marker + (*it)[2].length() + 1, marker);
        ++expected;
    }
    std::vector<std::string> steps;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const auto end = i + 1 < bounds.size() ? bounds[i + 1].second : text.size();
        auto step = trim(std::string_view(text).substr(bounds[i].first, end - bounds[i].first));
        std::string flat;
        bool space = false;
        for (char c : step) {
            if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
                space = true;
                continue;
            }
            if (space && !flat.empty()) flat += ' ';
            space = false;
            flat += c;
        }
        if (flat.empty()) return {};
        steps.push_back(std::move(flat));
    }
    return steps;
}

std::optional<std::string> extract_code_block(const std::string& text) {
    const auto open = text.find("```");
    if (open == std::string::npos) return std::nullopt;
    const auto body = text.find('\n', open);
    if (body == std::string::npos) return std::nullopt;
    const auto close = text.find("```", body);
    if (close == std::string::npos) return std::nullopt;
    return text.substr(body + 1, close - body - 1);
}

// ---- Pipeline -------------------------------------------------------------

Pipeline::Pipeline(std::shared_ptr<llm::Gateway> gateway, std::shared_ptr<const TemplateSet> templates,
                   const robots::EmbodimentManifest& manifest, const SkillLibrary& library, PipelineOptions options)
    : gateway_(std::move(gateway)), templates_(std::move(templates)), manifest_(manifest), library_(library),
      options_(std::move(options)) {}

void Pipeline::log(json event) {
    if (!log_) return;
    event["round"] = round_;
    event["sample"] = options_.sample_index;
    log_->append(event);
}

llm::CompletionRequest Pipeline::make_request(StageTag stage, std::string system, std::string user) const {
    llm::CompletionRequest r;
    r.stage = stage;
    r.model_id = options_.model_id;
    r.temperature = options_.temperature;
    r.sample_index = options_.sample_index;
    r.messages = {{"system", std::move(system)}, {"user", trim(user)}};
    return r;
}

std::string Pipeline::library_block() const {
    if (library_.empty()) return "Learned skills: none yet.\n";
    std::string out = "Learned skills (call them like robot functions, with named arguments):\n";
    for (const auto& e : library_.entries()) out += "- " + render_signature(e) + "\n";
    return out;
}

llm::CompletionRequest Pipeline::instruction_prompt(const Instruction& instruction) const {
    return make_request(StageTag::InstructionFollowing, templates_->at(StageTag::InstructionFollowing).render(),
                        section("Instruction", instruction.text));
}

llm::CompletionRequest Pipeline::robot_motion_prompt(const Instruction& instruction, const HumanMotionPlan& human,
                                                     const RobotMotionPlan* prev_plan,
                                                     const FeedbackEntry* prev_feedback) const {
    const auto& t = templates_->at(StageTag::RobotMotion);
    const auto system = t.render() + "\nRobot capabilities:\n" + manifest_.capability_prose + "\n" + library_block();
    std::string user = section("Instruction", instruction.text);
    user += section("Human expressive motion",
                    t.reasoning_marker + " " + human.cot + "\n" + t.answer_marker + " " + human.expressive_motion);
    if (prev_plan) user += section("Previous robot plan", render_steps(*prev_plan));
    if (prev_feedback) user += section("Feedback", prev_feedback->change_summary);
    return make_request(StageTag::RobotMotion, system, user);
}

llm::CompletionRequest Pipeline::code_prompt(const Instruction& instruction, const HumanMotionPlan& human,
                                             const RobotMotionPlan& robot, const RobotMotionPlan* prev_plan,
                                             const BehaviorProgram* prev_program,
                                             const FeedbackEntry* prev_feedback) const {
    const auto system = templates_->at(StageTag::CodeGen).render() + "\n" + templates_->grammar +
                        "\n\nRobot functions and sensors:\n" + manifest_.capability_prose + "\n" + library_block();
    std::string user = section("Instruction", instruction.text);
    user += section("Human expressive motion", human.expressive_motion);
    if (prev_plan) user += section("Previous robot plan", render_steps(*prev_plan));
    if (prev_program) user += section("Previous code", prev_program->source);
    if (prev_feedback) user += section("Feedback", prev_feedback->change_summary);
    user += section("Robot plan", render_steps(robot));
    return make_request(StageTag::CodeGen, system, user);
}

llm::CompletionRequest Pipeline::feedback_prompt(const Instruction& instruction, const RobotMotionPlan& robot,
                                                 const BehaviorProgram& program, const std::string& user_text) const {
    std::string user = section("Instruction", instruction.text);
    user += section("Robot plan", render_steps(robot));
    user += section("Code", program.source);
    user += section("Feedback", user_text);
    return make_request(StageTag::Feedback, templates_->at(StageTag::Feedback).render(), user);
}

llm::CompletionRequest Pipeline::ablation_prompt(const Instruction& instruction) const {
    const auto system = templates_->at(StageTag::EndToEndAblation).render() + "\n" + templates_->grammar +
                        "\n\nRobot functions and sensors:\n" + manifest_.capability_prose + "\n" + library_block();
    return make_request(StageTag::EndToEndAblation, system, section("Instruction", instruction.text));
}

StageOutput Pipeline::ask(llm::CompletionRequest request,
                          const std::function<std::optional<std::string>(StageOutput&)>& accept) {
    const auto& t = templates_->at(request.stage);
    const int reprompts = request.stage == StageTag::CodeGen || request.stage == StageTag::EndToEndAblation
                              ? 0
                              : options_.answer_reprompts;
    for (int attempt = 0;; ++attempt) {
        const auto fp = llm::fingerprint(request);
        std::string raw;
        try {
            raw = gateway_->complete(request);
        } catch (const Error& e) {
            log({{"type", kStageErrorEvent}, {"stage", llm::to_string(request.stage)}, {"attempt", attempt},
                 {"fingerprint", fp}, {"code", e.code()}, {"message", e.what()}});
            throw;
        }
        auto out = split_sections(raw, t.reasoning_marker, t.answer_marker);
        const auto problem = accept(out);
        json event{{"type", kStageEvent},      {"stage", llm::to_string(request.stage)},
                   {"attempt", attempt},       {"fingerprint", fp},
                   {"messages", messages_json(request.messages)}, {"raw", raw},
                   {"accepted", !problem},     {"warnings", out.warnings}};
        if (problem) event["problem"] = *problem;
        log(std::move(event));
        if (!problem) return out;
        if (attempt >= reprompts) {
            log({{"type", kStageErrorEvent}, {"stage", llm::to_string(request.stage)}, {"attempt", attempt},
                 {"fingerprint", fp}, {"code", "MalformedStageOutput"}, {"message", *problem}, {"raw", raw}});
            throw MalformedStageOutput(request.stage, *problem, raw);
        }
        request.messages.push_back({"assistant", raw});
        request.messages.push_back({"user", "Your reply could not be used: " + *problem +
                                                ". Reply again, following the required format exactly."});
    }
}

HumanMotionPlan Pipeline::expressive_instruction_following(const Instruction& instruction) {
    if (trim(instruction.text).empty()) throw PreconditionError("instruction text is empty");
    const auto& marker = templates_->at(StageTag::InstructionFollowing).answer_marker;
    auto out = ask(instruction_prompt(instruction), [&](StageOutput& o) -> std::optional<std::string> {
        if (!o.answer) return "the \"" + marker + "\" section is missing";
        return std::nullopt;
    });
    return {out.reasoning, *out.answer, out.warnings};
}

RobotMotionPlan Pipeline::human_to_robot_motion(const Instruction& instruction, const HumanMotionPlan& human,
                                                const RobotMotionPlan* prev_plan, const FeedbackEntry* prev_feedback) {
    if (!instruction.embodiment_id.empty() && instruction.embodiment_id != manifest_.id)
        throw UnknownEmbodiment(instruction.embodiment_id);
    const auto& marker = templates_->at(StageTag::RobotMotion).answer_marker;
    std::vector<std::string> steps;
    auto out = ask(robot_motion_prompt(instruction, human, prev_plan, prev_feedback),
                   [&](StageOutput& o) -> std::optional<std::string> {
                       if (!o.answer) return "the \"" + marker + "\" section is missing";
                       steps = parse_numbered_steps(*o.answer);
                       if (steps.empty()) return "the answer is not a numbered list of steps";
                       return std::nullopt;
                   });
    return {out.reasoning, steps};
}

BehaviorProgram Pipeline::compile(llm::CompletionRequest request, const std::vector<std::string>& forbidden,
                                  bool repair) {
    const auto stage = request.stage;
    ebl::ValidationReport report;
    std::optional<std::string> parse_error;
    std::string raw;

    // Returns the canonical program when the code is valid.
    const auto attempt = [&](const llm::CompletionRequest& req) -> std::optional<BehaviorProgram> {
        const auto out = ask(req, [](StageOutput&) { return std::optional<std::string>(); });
        raw = out.raw;
        auto code = out.answer ? extract_code_block(*out.answer) : std::nullopt;
        if (!code) code = extract_code_block(out.raw);
        if (!code) {
            log({{"type", kStageErrorEvent}, {"stage", llm::to_string(stage)}, {"code", "MalformedStageOutput"},
                 {"message", "no fenced code block"}, {"raw", raw}});
            throw MalformedStageOutput(stage, "no fenced code block in the reply", raw);
        }
        report = {};
        parse_error.reset();
        BehaviorProgram program;
        try {
            program = BehaviorProgram::from_source(*code);
        } catch (const Error& e) {
            parse_error = e.what();
            log({{"type", "validation"}, {"stage", llm::to_string(stage)}, {"valid", false},
                 {"parse_error", *parse_error}});
            return std::nullopt;
        }
        report = ebl::validate(program.ast, manifest_, library_, forbidden);
        log({{"type", "validation"}, {"stage", llm::to_string(stage)}, {"valid", report.valid()},
             {"report", ebl::to_json(report)}});
        if (!report.valid()) return std::nullopt;
        return canonicalize_program(program);
    };

    if (auto program = attempt(request)) return *program;
    if (!repair) throw CodeRejected(stage, report, parse_error, raw);

    CodeRejected first(stage, report, parse_error, raw);
    request.messages.push_back({"assistant", raw});
    request.messages.push_back(
        {"user", section("Validation errors", parse_error ? "ParseError: " + *parse_error : report.summary()) +
                     "\nFix these problems and reply with the complete corrected program in the same format."});
    try {
        if (auto program = attempt(request)) return *program;
    } catch (const llm::ReplayMiss&) {
        throw first;
    }
    throw CodeRejected(stage, report, parse_error, raw);
}

BehaviorProgram Pipeline::generate_code(const Instruction& instruction, const HumanMotionPlan& human,
                                        const RobotMotionPlan& robot, const RobotMotionPlan* prev_plan,
                                        const BehaviorProgram* prev_program, const FeedbackEntry* prev_feedback) {
    if (robot.steps.empty()) throw PreconditionError("robot motion plan has no steps");
    return compile(code_prompt(instruction, human, robot, prev_plan, prev_program, prev_feedback),
                   instruction.modality_constraints, true);
}

FeedbackEntry Pipeline::propagate_feedback(const Instruction& instruction, const RobotMotionPlan& robot,
                                           const BehaviorProgram& program, const std::string& user_text) {
    if (trim(user_text).empty()) throw PreconditionError("feedback text is empty");
    const auto& t = templates_->at(StageTag::Feedback);
    FeedbackEntry entry;
    entry.user_text = user_text;
    const auto out = ask(feedback_prompt(instruction, robot, program, user_text),
                         [&](StageOutput& o) -> std::optional<std::string> {
                             if (!o.answer) return "the \"" + t.answer_marker + "\" section is missing";
                             std::vector<std::string> routes;
                             std::string summary;
                             std::size_t start = 0;
                             const auto& a = *o.answer;
                             while (start <= a.size()) {
                                 auto end = a.find('\n', start);
                                 if (end == std::string::npos) end = a.size();
                                 const auto line = trim(std::string_view(a).substr(start, end - start));
                                 if (line.rfind(t.route_marker, 0) == 0)
                                     routes.push_back(trim(std::string_view(line).substr(t.route_marker.size())));
                                 else
                                     summary += line + "\n";
                                 start = end + 1;
                             }
                             if (routes.size() != 1)
                                 return "exactly one \"" + t.route_marker + "\" line (BehaviorAndCode or CodeOnly) is required";
                             const auto route = route_from_string(routes.front());
                             if (!route) return "unknown route '" + routes.front() + "'";
                             entry.route = *route;
                             entry.change_summary = trim(summary);
                             if (entry.change_summary.empty()) return "the change summary is empty";
                             return std::nullopt;
                         });
    entry.cot = out.reasoning;
    return entry;
}

BehaviorProgram Pipeline::end_to_end_ablation(const Instruction& instruction) {
    if (trim(instruction.text).empty()) throw PreconditionError("instruction text is empty");
    return compile(ablation_prompt(instruction), instruction.modality_constraints, false);
}

void Pipeline::run_generation(Session& session) {
    if (session.generated()) throw PreconditionError("session '" + session.id + "' already generated");
    round_ = 0;
    const auto& instruction = session.instruction;
    auto human = std::make_shared<const HumanMotionPlan>(expressive_instruction_following(instruction));
    auto robot = std::make_shared<const RobotMotionPlan>(human_to_robot_motion(instruction, *human, nullptr, nullptr));
    auto program = std::make_shared<const BehaviorProgram>(
        generate_code(instruction, *human, *robot, nullptr, nullptr, nullptr));
    session.rounds.push_back(Round{human, robot, program, std::nullopt});
    session.round_index = 0;
    log({{"type", kRoundEvent}, {"artifacts", round_to_json(session.rounds.back(), false)}});
}

void Pipeline::run_feedback_round(Session& session, const std::string& user_text) {
    if (!session.generated()) throw PreconditionError("session '" + session.id + "' has not been generated");
    if (session.round_index >= session.max_rounds) throw MaxRoundsExceeded(session.max_rounds);
    if (trim(user_text).empty()) throw PreconditionError("feedback text is empty");
    round_ = session.round_index + 1;
    const auto& instruction = session.instruction;
    const auto& prev = session.current();
    const auto* human = session.human_plan();
    auto feedback = propagate_feedback(instruction, *prev.robot_plan, *prev.program, user_text);

    std::shared_ptr<const RobotMotionPlan> robot = prev.robot_plan;
    const bool reused = feedback.route == FeedbackRoute::CodeOnly;
    if (!reused)
        robot = std::make_shared<const RobotMotionPlan>(
            human_to_robot_motion(instruction, *human, prev.robot_plan.get(), &feedback));
    auto program = std::make_shared<const BehaviorProgram>(generate_code(
        instruction, *human, *robot, prev.robot_plan.get(), prev.program.get(), &feedback));
    session.rounds.push_back(Round{nullptr, robot, program, std::move(feedback)});
    ++session.round_index;
    log({{"type", kRoundEvent}, {"artifacts", round_to_json(session.rounds.back(), reused)}});
}

std::vector<Candidate> sample_candidates(Pipeline& pipeline, const Instruction& instruction, int n) {
    if (n < 1) throw PreconditionError("sample count must be positive");
    const int saved = pipeline.options().sample_index;
    std::vector<Candidate> out;
    for (int k = 0; k < n; ++k) {
        pipeline.set_sample_index(k);
        Candidate c;
        c.sample_index = k;
        Session session;
        session.id = "sample-" + std::to_string(k);
        session.instruction = instruction;
        try {
            pipeline.run_generation(session);
            c.program = *session.current().program;
            c.session = std::move(session);
        } catch (const CodeRejected& e) {
            c.error_code = e.primary_code();
            c.error_message = e.what();
            c.report = e.report();
            c.raw = e.raw();
        } catch (const MalformedStageOutput& e) {
            c.error_code = e.code();
            c.error_message = e.what();
            c.raw = e.raw();
        } catch (const Error& e) {
            c.error_code = e.code();
            c.error_message = e.what();
        }
        out.push_back(std::move(c));
    }
    pipeline.set_sample_index(saved);
    return out;
}

}  // namespace genem::pipeline
