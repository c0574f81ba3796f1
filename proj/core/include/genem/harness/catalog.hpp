#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/types.hpp"
#include "genem/ebl/diff.hpp"

namespace genem::harness {

// The ten behaviors of the first study, in table order.
inline constexpr std::array<std::string_view, 10> kStudyBehaviors = {
    "Nod", "Shake", "Wake", "Excuse", "Recoverable", "Unrecoverable", "Acknowledge", "Follow", "Approach", "Attention"};

struct BehaviorSpec {
    std::string id;
    std::string instruction;
    std::string scenario;
    std::vector<std::string> forbidden;  // modality constraints
    std::vector<std::string> checks;     // structural check names

    Instruction instruction_for(const std::string& embodiment) const {
        return {instruction, forbidden, embodiment};
    }
};

BehaviorSpec behavior_from_json(const nlohmann::json& j);

struct BehaviorCatalog {
    std::vector<BehaviorSpec> behaviors;

    const BehaviorSpec* find(std::string_view id) const;
    // Throws FormatError unless every study behavior is present with a
    // non-empty instruction and known checks.
    static BehaviorCatalog from_json(const nlohmann::json& doc);
    static BehaviorCatalog load(const std::filesystem::path& file);
};

struct ComposeTarget {
    std::string id;
    std::string instruction;
    std::string scenario;
    std::vector<std::string> offered;  // seed skills put in the prompt; the rest are withheld
};

struct ComposeCatalog {
    std::string embodiment;
    std::vector<std::string> seed_skills;  // matrix columns, in order
    std::vector<ComposeTarget> targets;

    static ComposeCatalog load(const std::filesystem::path& file);
};

enum class FeedbackType { Insert, Swap, Loop, Remove };

std::string_view to_string(FeedbackType type);
std::optional<FeedbackType> feedback_type_from_string(std::string_view text);

struct FeedbackCase {
    std::string behavior;
    FeedbackType type = FeedbackType::Insert;
    std::string utterance;
    std::string subject;               // Insert: the inserted call, if pinned
    std::string anchor;                // Insert: the call it must precede, if pinned
    std::vector<std::string> removed;  // Remove: calls that must be gone
};

struct FeedbackBank {
    std::vector<BehaviorSpec> extra_behaviors;  // behaviors outside the study catalog
    std::vector<FeedbackCase> cases;

    static FeedbackBank load(const std::filesystem::path& file);
};

// Expected edit class for a feedback type (Remove has none).
std::optional<ebl::EditKind> expected_edit(FeedbackType type);

// A fixed sequence of feedback utterances on one behavior.
struct ScriptedSession {
    std::string behavior;
    std::string embodiment;
    std::vector<std::string> feedback;

    static ScriptedSession load(const std::filesystem::path& file);
};

}  // namespace genem::harness
