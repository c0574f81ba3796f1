#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genem/llm/gateway.hpp"

namespace genem::pipeline {

struct FewShotExample {
    std::string input;
    std::string output;
};

// One stage's prompt prefix (h_pre, r_pre, c_pre, f_pre, or the ablation's
// single prompt) with its examples and output markers.
struct PromptTemplate {
    llm::StageTag stage = llm::StageTag::InstructionFollowing;
    std::string prefix;
    std::vector<FewShotExample> examples;
    std::string reasoning_marker = "REASONING:";
    std::string answer_marker = "ANSWER:";
    std::string route_marker;  // feedback stage only

    // Throws FormatError: empty prefix, no examples, or clashing markers.
    void check() const;
    // Prefix followed by the rendered examples.
    std::string render() const;
};

// Parses a template file:
//
//   ---
//   stage: CodeGen
//   reasoning_marker: REASONING:
//   answer_marker: ANSWER:
//   ---
//   prefix ...
//   @@ input
//   example input ...
//   @@ output
//   example output ...
PromptTemplate parse_template(std::string_view text);

// All stage templates plus the EBL grammar summary embedded in code prompts.
struct TemplateSet {
    std::map<llm::StageTag, PromptTemplate> stages;
    std::string grammar;

    const PromptTemplate& at(llm::StageTag stage) const;

    // Reads <dir>/{instruction_following,robot_motion,code_gen,feedback,
    // end_to_end_ablation}.txt and <dir>/grammar.txt.
    static TemplateSet load(const std::filesystem::path& dir);
};

}  // namespace genem::pipeline
