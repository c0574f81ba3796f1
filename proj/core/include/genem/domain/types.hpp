#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genem/ebl/ast.hpp"
#include "genem/error.hpp"

namespace genem {

// Natural-language instruction handed to the pipeline.
struct Instruction {
    std::string text;
    std::vector<std::string> modality_constraints;  // forbidden modalities, e.g. "speech"
    std::string embodiment_id;

    bool operator==(const Instruction&) const = default;
};

// How a person would express the behavior: reasoning plus the expressive motion.
struct HumanMotionPlan {
    std::string cot;
    std::string expressive_motion;
    std::vector<std::string> warnings;

    bool operator==(const HumanMotionPlan&) const = default;
};

// Step-by-step procedure in terms of robot capabilities.
struct RobotMotionPlan {
    std::string cot;
    std::vector<std::string> steps;

    bool operator==(const RobotMotionPlan&) const = default;
};

// Named program parameter (semantic type plus literal default). Unset
// defaults mark required parameters.
struct ProgramParameter {
    std::string name;
    ebl::SemanticType type = ebl::SemanticType::Number;
    std::optional<ebl::Value> default_value;

    bool operator==(const ProgramParameter&) const = default;
};

// A generated behavior policy: EBL source, its AST, and the entry skill's
// named parameters.
struct BehaviorProgram {
    std::string source;
    ebl::Program ast;
    std::vector<ProgramParameter> parameters;
    std::string entry_skill;

    // Parses `source` and derives entry skill and parameters. Throws ebl::ParseError.
    static BehaviorProgram from_source(std::string source);
    // Builds a program whose source is the canonical printing of `ast`.
    static BehaviorProgram from_ast(ebl::Program ast);

    bool operator==(const BehaviorProgram&) const = default;
};

// Replaces the source with its canonical printing. Idempotent; the AST is unchanged.
BehaviorProgram canonicalize_program(const BehaviorProgram& program);

enum class FeedbackRoute { BehaviorAndCode, CodeOnly };

std::string_view to_string(FeedbackRoute route);
std::optional<FeedbackRoute> route_from_string(std::string_view text);

struct FeedbackEntry {
    std::string user_text;
    std::string cot;
    std::string change_summary;
    FeedbackRoute route = FeedbackRoute::BehaviorAndCode;

    bool operator==(const FeedbackEntry&) const = default;
};

// One generation round. Round 0 owns a human plan; later rounds carry the
// feedback that produced them. A CodeOnly round shares its robot plan with
// the previous round.
struct Round {
    std::shared_ptr<const HumanMotionPlan> human_plan;
    std::shared_ptr<const RobotMotionPlan> robot_plan;
    std::shared_ptr<const BehaviorProgram> program;
    std::optional<FeedbackEntry> feedback;

    // Compares the artifacts, not the sharing.
    friend bool operator==(const Round& a, const Round& b);
};

class MaxRoundsExceeded : public Error {
public:
    explicit MaxRoundsExceeded(int max_rounds)
        : Error("MaxRoundsExceeded", "feedback round limit of " + std::to_string(max_rounds) + " reached") {}
};

inline constexpr int kDefaultMaxRounds = 10;

struct Session {
    std::string id;
    Instruction instruction;
    std::string scenario_id;
    std::vector<Round> rounds;
    int round_index = 0;
    int max_rounds = kDefaultMaxRounds;

    bool generated() const { return !rounds.empty(); }
    const Round& current() const { return rounds.back(); }
    // First round's human plan; later rounds reuse it.
    const HumanMotionPlan* human_plan() const { return rounds.empty() ? nullptr : rounds.front().human_plan.get(); }

    bool operator==(const Session&) const = default;
};

inline constexpr double kFrameStep = 0.1;

enum class EventKind { Speech, Sound, LightPattern };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view text);

struct TrajectoryEvent {
    double t = 0.0;
    EventKind kind = EventKind::Speech;
    std::string payload;

    bool operator==(const TrajectoryEvent&) const = default;
};

struct StateFrame {
    double t = 0.0;
    std::vector<double> values;  // parallel to Trajectory::channels

    bool operator==(const StateFrame&) const = default;
};

// Timestamped state frames on a fixed step plus discrete events. Channel
// names come from the embodiment manifest (x, y, heading_deg, head_pan_deg, ...).
struct Trajectory {
    std::string embodiment;
    double step_s = kFrameStep;
    std::vector<std::string> channels;
    std::vector<StateFrame> frames;
    std::vector<TrajectoryEvent> events;

    std::optional<std::size_t> channel_index(std::string_view name) const;
    // Values of one channel across all frames. Throws FormatError for an unknown channel.
    std::vector<double> channel(std::string_view name) const;
    double duration() const { return frames.empty() ? 0.0 : frames.back().t; }

    bool operator==(const Trajectory&) const = default;
};

// Throws FormatError when timestamps, step or event times break the trajectory invariants.
void check_trajectory(const Trajectory& trajectory);

enum class SkillProvenance { BuiltinExample, Learned, UserSaved };

std::string_view to_string(SkillProvenance provenance);
std::optional<SkillProvenance> provenance_from_string(std::string_view text);

// A reusable behavior in the skill library. `body` is EBL source defining a
// skill called `name`, optionally preceded by private helpers.
struct SkillEntry {
    std::string name;
    std::string docstring;
    std::vector<ProgramParameter> parameters;
    std::string body;
    SkillProvenance provenance = SkillProvenance::Learned;

    // Builds an entry from EBL source whose last skill is the exported one.
    static SkillEntry from_source(std::string source, SkillProvenance provenance);

    bool operator==(const SkillEntry&) const = default;
};

// One-line signature used in prompts, e.g. `nod_head(times: count = 2): Nod ...`.
std::string render_signature(const SkillEntry& entry);
std::string render_parameters(const std::vector<ProgramParameter>& params);

}  // namespace genem
