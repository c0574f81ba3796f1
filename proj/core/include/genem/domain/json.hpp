#pragma once

#include <nlohmann/json.hpp>

#include "genem/domain/types.hpp"

// Persistence format of the domain values. Every type round-trips:
// from_json(to_json(x)) == x.
namespace genem {

void to_json(nlohmann::json& j, const Instruction& v);
void from_json(const nlohmann::json& j, Instruction& v);
void to_json(nlohmann::json& j, const HumanMotionPlan& v);
void from_json(const nlohmann::json& j, HumanMotionPlan& v);
void to_json(nlohmann::json& j, const RobotMotionPlan& v);
void from_json(const nlohmann::json& j, RobotMotionPlan& v);
void to_json(nlohmann::json& j, const ProgramParameter& v);
void from_json(const nlohmann::json& j, ProgramParameter& v);
// Programs persist as source text; the AST is rebuilt on load.
void to_json(nlohmann::json& j, const BehaviorProgram& v);
void from_json(const nlohmann::json& j, BehaviorProgram& v);
void to_json(nlohmann::json& j, const FeedbackEntry& v);
void from_json(const nlohmann::json& j, FeedbackEntry& v);
void to_json(nlohmann::json& j, const TrajectoryEvent& v);
void from_json(const nlohmann::json& j, TrajectoryEvent& v);
// {version, embodiment, step_s, channels, frames:[{t, <channel>: value...}], events}
void to_json(nlohmann::json& j, const Trajectory& v);
void from_json(const nlohmann::json& j, Trajectory& v);
void to_json(nlohmann::json& j, const SkillEntry& v);
void from_json(const nlohmann::json& j, SkillEntry& v);

// A round serializes its artifacts; `robot_plan_reused` restores the
// sharing of a CodeOnly round with its predecessor.
nlohmann::json round_to_json(const Round& round, bool robot_plan_reused);
nlohmann::json session_to_json(const Session& session);
Session session_from_json(const nlohmann::json& j);

// Parses an EBL literal spelled as in source (`30deg`, `"hi"`, `#FF0000`).
ebl::Value literal_from_string(const std::string& text);

}  // namespace genem
