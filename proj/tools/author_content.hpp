#pragma once

// Scripted completions used to author the shipped replay transcripts. The
// programs are written to reproduce the counts in data/expected (which
// samples fail and why), not any particular model's output.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace author {

using Gen = std::function<std::string(int)>;
using Gens = std::function<std::vector<std::string>(int)>;  // first attempt, then repairs

struct BehaviorScript {
    Gen plan;
    Gens code;
};

struct FeedbackScript {
    Gen reply;
    std::string summary;  // the change request, as it reappears in later prompts
    Gen plan;             // empty for CodeOnly
    Gens code;
};

struct Content {
    std::map<std::string, Gen> human;                                       // instruction -> stage 1
    std::map<std::pair<std::string, std::string>, BehaviorScript> scripts;  // (embodiment, instruction)
    std::map<std::string, Gens> ablation;                                   // instruction -> single call
    std::map<std::pair<std::string, std::string>, FeedbackScript> feedback; // (instruction, utterance)
};

Content build_content();

}  // namespace author
