#include "genem/pipeline/templates.hpp"

#include <sstream>

#include "genem/error.hpp"
#include "genem/util/files.hpp"

namespace genem::pipeline {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void PromptTemplate::check() const {
    const std::string name(llm::to_string(stage));
    if (trim(prefix).empty()) throw FormatError("template " + name + ": empty prefix");
    if (examples.empty()) throw FormatError("template " + name + ": needs at least one few-shot example");
    if (reasoning_marker.empty() || answer_marker.empty() || reasoning_marker == answer_marker ||
        (!route_marker.empty() && (route_marker == answer_marker || route_marker == reasoning_marker)))
        throw FormatError("template " + name + ": output markers must be distinct and non-empty");
    if (stage == llm::StageTag::Feedback && route_marker.empty())
        throw FormatError("template " + name + ": the feedback stage needs a route marker");
}

std::string PromptTemplate::render() const {
    std::string out = trim(prefix) + "\n\nExamples:\n";
    for (std::size_t i = 0; i < examples.size(); ++i) {
        out += "\nExample " + std::to_string(i + 1) + " input:\n" + examples[i].input + "\n";
        out += "\nExample " + std::to_string(i + 1) + " output:\n" + examples[i].output + "\n";
    }
    return out;
}

PromptTemplate parse_template(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    PromptTemplate t;
    if (!std::getline(in, line) || trim(line) != "---") throw FormatError("template: missing front-matter");
    bool have_stage = false, closed = false;
    while (std::getline(in, line)) {
        if (trim(line) == "---") {
            closed = true;
            break;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw FormatError("template: bad front-matter line '" + line + "'");
        const auto key = trim(line.substr(0, colon));
        const auto value = trim(line.substr(colon + 1));
        if (key == "stage") {
            const auto stage = llm::stage_from_string(value);
            if (!stage) throw FormatError("template: unknown stage '" + value + "'");
            t.stage = *stage;
            have_stage = true;
        } else if (key == "reasoning_marker") {
            t.reasoning_marker = value;
        } else if (key == "answer_marker") {
            t.answer_marker = value;
        } else if (key == "route_marker") {
            t.route_marker = value;
        } else {
            throw FormatError("template: unknown front-matter key '" + key + "'");
        }
    }
    if (!closed || !have_stage) throw FormatError("template: front-matter needs a stage and a closing ---");

    enum { Prefix, Input, Output } part = Prefix;
    std::string prefix, input, output;
    const auto flush = [&] {
        if (part == Output) t.examples.push_back({trim(input), trim(output)});
        input.clear();
        output.clear();
    };
    while (std::getline(in, line)) {
        const auto marker = trim(line);
        if (marker == "@@ input") {
            if (part == Input) throw FormatError("template: example input without output");
            flush();
            part = Input;
        } else if (marker == "@@ output") {
            if (part != Input) throw FormatError("template: example output without input");
            part = Output;
        } else {
            (part == Prefix ? prefix : part == Input ? input : output) += line + "\n";
        }
    }
    if (part == Input) throw FormatError("template: example input without output");
    flush();
    t.prefix = trim(prefix);
    t.check();
    return t;
}

const PromptTemplate& TemplateSet::at(llm::StageTag stage) const {
    const auto it = stages.find(stage);
    if (it == stages.end()) throw PreconditionError("no template loaded for stage " + std::string(llm::to_string(stage)));
    return it->second;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
    const std::pair<llm::StageTag, const char*> files[] = {
        {llm::StageTag::InstructionFollowing, "instruction_following.txt"},
        {llm::StageTag::RobotMotion, "robot_motion.txt"},
        {llm::StageTag::CodeGen, "code_gen.txt"},
        {llm::StageTag::Feedback, "feedback.txt"},
        {llm::StageTag::EndToEndAblation, "end_to_end_ablation.txt"},
    };
    TemplateSet set;
    for (const auto& [stage, file] : files) {
        auto t = parse_template(util::read_file(dir / file));
        if (t.stage != stage) throw FormatError(std::string("template ") + file + " declares the wrong stage");
        set.stages.emplace(stage, std::move(t));
    }
    set.grammar = trim(util::read_file(dir / "grammar.txt"));
    return set;
}

}  // namespace genem::pipeline
