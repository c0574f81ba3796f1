#include "genem/domain/types.hpp"

#include <cctype>
#include <cmath>

#include "genem/ebl/parser.hpp"
#include "genem/ebl/printer.hpp"

namespace genem {

namespace {

std::vector<ProgramParameter> parameters_of(const ebl::SkillDef& skill) {
    std::vector<ProgramParameter> out;
    out.reserve(skill.params.size());
    for (const auto& p : skill.params) out.push_back({p.name, p.type, p.default_value});
    return out;
}

std::string one_line(std::string_view text) {
    std::string out;
    bool space = false;
    for (const char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

}  // namespace

BehaviorProgram BehaviorProgram::from_source(std::string source) {
    BehaviorProgram program;
    program.ast = ebl::parse(source);
    const auto* entry = program.ast.entry();
    if (!entry) throw FormatError("program defines no skill");
    program.entry_skill = entry->name;
    program.parameters = parameters_of(*entry);
    program.source = std::move(source);
    return program;
}

BehaviorProgram BehaviorProgram::from_ast(ebl::Program ast) {
    const auto* entry = ast.entry();
    if (!entry) throw FormatError("program defines no skill");
    BehaviorProgram program;
    program.entry_skill = entry->name;
    program.parameters = parameters_of(*entry);
    program.source = ebl::print(ast);
    program.ast = std::move(ast);
    return program;
}

BehaviorProgram canonicalize_program(const BehaviorProgram& program) {
    BehaviorProgram out = program;
    out.source = ebl::print(program.ast);
    return out;
}

std::string_view to_string(FeedbackRoute route) {
    return route == FeedbackRoute::BehaviorAndCode ? "BehaviorAndCode" : "CodeOnly";
}

std::optional<FeedbackRoute> route_from_string(std::string_view text) {
    if (text == "BehaviorAndCode") return FeedbackRoute::BehaviorAndCode;
    if (text == "CodeOnly") return FeedbackRoute::CodeOnly;
    return std::nullopt;
}

namespace {

template <typename T>
bool same_pointee(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
}

}  // namespace

bool operator==(const Round& a, const Round& b) {
    return same_pointee(a.human_plan, b.human_plan) && same_pointee(a.robot_plan, b.robot_plan) &&
           same_pointee(a.program, b.program) && a.feedback == b.feedback;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Speech: return "speech";
        case EventKind::Sound: return "sound";
        case EventKind::LightPattern: return "light_pattern";
    }
    return "";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) {
    if (text == "speech") return EventKind::Speech;
    if (text == "sound") return EventKind::Sound;
    if (text == "light_pattern") return EventKind::LightPattern;
    return std::nullopt;
}

std::optional<std::size_t> Trajectory::channel_index(std::string_view name) const {
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (channels[i] == name) return i;
    return std::nullopt;
}

std::vector<double> Trajectory::channel(std::string_view name) const {
    const auto idx = channel_index(name);
    if (!idx) throw FormatError("trajectory has no channel '" + std::string(name) + "'");
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.values[*idx]);
    return out;
}

void check_trajectory(const Trajectory& trajectory) {
    if (trajectory.step_s <= 0) throw FormatError("trajectory step must be positive");
    for (std::size_t i = 0; i < trajectory.frames.size(); ++i) {
        const auto& f = trajectory.frames[i];
        if (f.values.size() != trajectory.channels.size())
            throw FormatError("frame " + std::to_string(i) + " has wrong channel count");
        const double expected = static_cast<double>(i) * trajectory.step_s;
        if (std::abs(f.t - expected) > 1e-6)
            throw FormatError("frame " + std::to_string(i) + " timestamp is off the fixed step");
    }
    const double last = trajectory.duration();
    double prev = 0.0;
    for (const auto& e : trajectory.events) {
        if (e.t < -1e-9 || e.t > last + 1e-9) throw FormatError("event outside trajectory time span");
        if (e.t + 1e-9 < prev) throw FormatError("events not ordered by time");
        prev = e.t;
    }
}

std::string_view to_string(SkillProvenance provenance) {
    switch (provenance) {
        case SkillProvenance::BuiltinExample: return "builtin_example";
        case SkillProvenance::Learned: return "learned";
        case SkillProvenance::UserSaved: return "user_saved";
    }
    return "";
}

std::optional<SkillProvenance> provenance_from_string(std::string_view text) {
    if (text == "builtin_example") return SkillProvenance::BuiltinExample;
    if (text == "learned") return SkillProvenance::Learned;
    if (text == "user_saved") return SkillProvenance::UserSaved;
    return std::nullopt;
}

SkillEntry SkillEntry::from_source(std::string source, SkillProvenance provenance) {
    const auto program = ebl::parse(source);
    const auto* exported = program.entry();
    if (!exported) throw FormatError("skill source defines no skill");
    if (one_line(exported->docstring).empty())
        throw FormatError("skill '" + exported->name + "' needs a docstring to enter the library");
    SkillEntry entry;
    entry.name = exported->name;
    entry.docstring = one_line(exported->docstring);
    entry.parameters = parameters_of(*exported);
    entry.body = ebl::print(program);
    entry.provenance = provenance;
    return entry;
}

std::string render_parameters(const std::vector<ProgramParameter>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name + ": " + std::string(ebl::to_string(params[i].type));
        if (params[i].default_value) out += " = " + ebl::print_value(*params[i].default_value);
    }
    return out;
}

std::string render_signature(const SkillEntry& entry) {
    return entry.name + "(" + render_parameters(entry.parameters) + "): " + entry.docstring;
}

}  // namespace genem
