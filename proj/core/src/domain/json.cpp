#include "genem/domain/json.hpp"

#include "genem/ebl/parser.hpp"
#include "genem/ebl/printer.hpp"

namespace genem {

using nlohmann::json;

namespace {

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

ebl::Value literal_from_string(const std::string& text) {
    const auto program = ebl::parse("skill literal_holder() { holder(value=" + text + ") }");
    const auto& call = std::get<ebl::Call>(program.skills.at(0).body.at(0).node);
    if (call.args.size() != 1 || std::holds_alternative<ebl::NameRef>(call.args[0].value))
        throw FormatError("not a literal: " + text);
    return call.args[0].value;
}

void to_json(json& j, const Instruction& v) {
    j = json{{"text", v.text}, {"modality_constraints", v.modality_constraints}, {"embodiment_id", v.embodiment_id}};
}

void from_json(const json& j, Instruction& v) {
    v.text = require<std::string>(j, "text");
    v.modality_constraints = j.value("modality_constraints", std::vector<std::string>{});
    v.embodiment_id = require<std::string>(j, "embodiment_id");
}

void to_json(json& j, const HumanMotionPlan& v) {
    j = json{{"cot", v.cot}, {"expressive_motion", v.expressive_motion}, {"warnings", v.warnings}};
}

void from_json(const json& j, HumanMotionPlan& v) {
    v.cot = j.value("cot", "");
    v.expressive_motion = require<std::string>(j, "expressive_motion");
    v.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(json& j, const RobotMotionPlan& v) { j = json{{"cot", v.cot}, {"steps", v.steps}}; }

void from_json(const json& j, RobotMotionPlan& v) {
    v.cot = j.value("cot", "");
    v.steps = require<std::vector<std::string>>(j, "steps");
}

void to_json(json& j, const ProgramParameter& v) {
    j = json{{"name", v.name}, {"type", ebl::to_string(v.type)}};
    j["default"] = v.default_value ? json(ebl::print_value(*v.default_value)) : json(nullptr);
}

void from_json(const json& j, ProgramParameter& v) {
    v.name = require<std::string>(j, "name");
    const auto type = ebl::semantic_type_from_string(require<std::string>(j, "type"));
    if (!type) throw FormatError("unknown parameter type for '" + v.name + "'");
    v.type = *type;
    v.default_value.reset();
    if (j.contains("default") && !j.at("default").is_null())
        v.default_value = literal_from_string(j.at("default").get<std::string>());
}

void to_json(json& j, const BehaviorProgram& v) {
    j = json{{"source", v.source}, {"entry_skill", v.entry_skill}, {"parameters", v.parameters}};
}

void from_json(const json& j, BehaviorProgram& v) {
    v = BehaviorProgram::from_source(require<std::string>(j, "source"));
    if (j.contains("entry_skill") && j.at("entry_skill").get<std::string>() != v.entry_skill)
        throw FormatError("stored entry skill does not match source");
}

void to_json(json& j, const FeedbackEntry& v) {
    j = json{{"user_text", v.user_text},
             {"cot", v.cot},
             {"change_summary", v.change_summary},
             {"route", to_string(v.route)}};
}

void from_json(const json& j, FeedbackEntry& v) {
    v.user_text = require<std::string>(j, "user_text");
    v.cot = j.value("cot", "");
    v.change_summary = require<std::string>(j, "change_summary");
    const auto route = route_from_string(require<std::string>(j, "route"));
    if (!route) throw FormatError("unknown feedback route");
    v.route = *route;
}

void to_json(json& j, const TrajectoryEvent& v) {
    j = json{{"t", v.t}, {"kind", to_string(v.kind)}, {"payload", v.payload}};
}

void from_json(const json& j, TrajectoryEvent& v) {
    v.t = require<double>(j, "t");
    const auto kind = event_kind_from_string(require<std::string>(j, "kind"));
    if (!kind) throw FormatError("unknown event kind");
    v.kind = *kind;
    v.payload = j.value("payload", "");
}

void to_json(json& j, const Trajectory& v) {
    json frames = json::array();
    for (const auto& f : v.frames) {
        json frame = {{"t", f.t}};
        for (std::size_t c = 0; c < v.channels.size(); ++c) frame[v.channels[c]] = f.values[c];
        frames.push_back(std::move(frame));
    }
    j = json{{"version", 1},         {"embodiment", v.embodiment}, {"step_s", v.step_s},
             {"channels", v.channels}, {"frames", std::move(frames)}, {"events", v.events}};
}

void from_json(const json& j, Trajectory& v) {
    v.embodiment = j.value("embodiment", "");
    v.step_s = j.value("step_s", kFrameStep);
    v.channels = require<std::vector<std::string>>(j, "channels");
    v.frames.clear();
    for (const auto& frame : require<json>(j, "frames")) {
        StateFrame f;
        f.t = require<double>(frame, "t");
        for (const auto& c : v.channels) f.values.push_back(require<double>(frame, c.c_str()));
        v.frames.push_back(std::move(f));
    }
    v.events = j.value("events", std::vector<TrajectoryEvent>{});
}

void to_json(json& j, const SkillEntry& v) {
    j = json{{"name", v.name},
             {"docstring", v.docstring},
             {"parameters", v.parameters},
             {"body", v.body},
             {"provenance", to_string(v.provenance)}};
}

void from_json(const json& j, SkillEntry& v) {
    v.name = require<std::string>(j, "name");
    v.docstring = require<std::string>(j, "docstring");
    v.parameters = j.value("parameters", std::vector<ProgramParameter>{});
    v.body = require<std::string>(j, "body");
    const auto provenance = provenance_from_string(j.value("provenance", "learned"));
    if (!provenance) throw FormatError("unknown skill provenance");
    v.provenance = *provenance;
    if (v.docstring.empty()) throw FormatError("skill '" + v.name + "' has an empty docstring");
}

json round_to_json(const Round& round, bool robot_plan_reused) {
    json j;
    j["human_plan"] = round.human_plan ? json(*round.human_plan) : json(nullptr);
    j["robot_plan"] = round.robot_plan ? json(*round.robot_plan) : json(nullptr);
    j["robot_plan_reused"] = robot_plan_reused;
    j["program"] = round.program ? json(*round.program) : json(nullptr);
    j["feedback"] = round.feedback ? json(*round.feedback) : json(nullptr);
    return j;
}

json session_to_json(const Session& session) {
    json rounds = json::array();
    for (std::size_t i = 0; i < session.rounds.size(); ++i) {
        const bool reused = i > 0 && session.rounds[i].robot_plan == session.rounds[i - 1].robot_plan;
        rounds.push_back(round_to_json(session.rounds[i], reused));
    }
    return json{{"id", session.id},
                {"instruction", session.instruction},
                {"scenario_id", session.scenario_id},
                {"round_index", session.round_index},
                {"max_rounds", session.max_rounds},
                {"rounds", std::move(rounds)}};
}

Session session_from_json(const json& j) {
    Session s;
    s.id = require<std::string>(j, "id");
    s.instruction = require<Instruction>(j, "instruction");
    s.scenario_id = j.value("scenario_id", "");
    s.round_index = j.value("round_index", 0);
    s.max_rounds = j.value("max_rounds", kDefaultMaxRounds);
    for (const auto& r : j.value("rounds", json::array())) {
        Round round;
        if (!r.at("human_plan").is_null()) round.human_plan = std::make_shared<HumanMotionPlan>(r.at("human_plan").get<HumanMotionPlan>());
        if (r.value("robot_plan_reused", false) && !s.rounds.empty())
            round.robot_plan = s.rounds.back().robot_plan;
        else if (!r.at("robot_plan").is_null())
            round.robot_plan = std::make_shared<RobotMotionPlan>(r.at("robot_plan").get<RobotMotionPlan>());
        if (!r.at("program").is_null()) round.program = std::make_shared<BehaviorProgram>(r.at("program").get<BehaviorProgram>());
        if (!r.at("feedback").is_null()) round.feedback = r.at("feedback").get<FeedbackEntry>();
        s.rounds.push_back(std::move(round));
    }
    return s;
}

}  // namespace genem
