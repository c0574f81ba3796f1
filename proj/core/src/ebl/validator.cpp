#include "genem/ebl/validator.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "genem/ebl/callee.hpp"
#include "genem/ebl/printer.hpp"

namespace genem::ebl {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UndefinedFunction: return "UndefinedFunction";
        case ErrorCode::UnknownArgument: return "UnknownArgument";
        case ErrorCode::MissingRequiredArgument: return "MissingRequiredArgument";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::UnitMismatch: return "UnitMismatch";
        case ErrorCode::RangeViolation: return "RangeViolation";
        case ErrorCode::RecursionDetected: return "RecursionDetected";
        case ErrorCode::ModalityForbidden: return "ModalityForbidden";
    }
    return "";
}

std::string_view to_string(WarningCode code) {
    switch (code) {
        case WarningCode::MissingDocstring: return "MissingDocstring";
        case WarningCode::PositionalStyle: return "PositionalStyle";
        case WarningCode::UnusedSkill: return "UnusedSkill";
    }
    return "";
}

bool ValidationReport::has(ErrorCode code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const auto& f) { return f.code == code; });
}

bool ValidationReport::has(WarningCode code) const {
    return std::any_of(warnings.begin(), warnings.end(), [&](const auto& f) { return f.code == code; });
}

namespace {

template <typename Code>
std::string describe(const Finding<Code>& f) {
    return std::string(to_string(f.code)) + " at " + std::to_string(f.loc.line) + ":" + std::to_string(f.loc.column) +
           " in skill '" + f.skill + "': " + f.message;
}

template <typename Code>
nlohmann::json finding_json(const Finding<Code>& f) {
    return {{"code", to_string(f.code)},
            {"skill", f.skill},
            {"line", f.loc.line},
            {"column", f.loc.column},
            {"message", f.message}};
}

}  // namespace

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& e : errors) out += "error: " + describe(e) + "\n";
    for (const auto& w : warnings) out += "warning: " + describe(w) + "\n";
    return out;
}

nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json errors = nlohmann::json::array();
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& e : report.errors) errors.push_back(finding_json(e));
    for (const auto& w : report.warnings) warnings.push_back(finding_json(w));
    return {{"grammar", kGrammarVersion}, {"valid", report.valid()}, {"errors", errors}, {"warnings", warnings}};
}

namespace {

struct LibraryInfo {
    bool executable = true;
    std::string problem;
    std::set<std::string> modalities;
};

// Shared across nested validations of library skills.
struct LibraryCache {
    std::map<std::string, LibraryInfo> info;
    std::set<std::string> visiting;
};

bool compatible(SemanticType from, SemanticType to) {
    return from == to || (from == SemanticType::Count && to == SemanticType::Number);
}

class Validator {
public:
    Validator(const Program& program, const robots::EmbodimentManifest& manifest, const SkillLibrary& library,
              const std::vector<std::string>& forbidden, LibraryCache& cache)
        : program_(program), manifest_(manifest), library_(library), forbidden_(forbidden), cache_(cache) {}

    ValidationReport run() {
        for (const auto& skill : program_.skills) {
            if (skill.docstring.find_first_not_of(" \t\r\n") == std::string::npos)
                warn(WarningCode::MissingDocstring, skill, skill.loc, "skill '" + skill.name + "' has no docstring");
            for (const auto& p : skill.params)
                if (p.default_value) {
                    ParamSpec spec{p.name, p.type, false, std::nullopt, std::nullopt, std::nullopt, {}};
                    check_value(*p.default_value, spec, skill, p.loc, "default of '" + p.name + "'");
                }
            check_block(skill.body, skill, 1);
        }
        check_recursion();
        check_unused();
        return std::move(report_);
    }

    std::set<std::string> modalities() {
        std::set<std::string> out;
        for (const auto& skill : program_.skills)
            for_each_call(skill.body, [&](const Call& call) {
                const auto callee = resolve_callee(call.target, program_, library_, manifest_);
                if (!callee) return;
                if (callee->kind == CalleeKind::Primitive && callee->primitive->modality != "timing")
                    out.insert(callee->primitive->modality);
                if (callee->kind == CalleeKind::Library) {
                    const auto& info = library_info(callee->name);
                    out.insert(info.modalities.begin(), info.modalities.end());
                }
            });
        return out;
    }

private:
    void error(ErrorCode code, const SkillDef& skill, SourceLoc loc, std::string message) {
        report_.errors.push_back({code, skill.name, loc, std::move(message)});
    }

    void warn(WarningCode code, const SkillDef& skill, SourceLoc loc, std::string message) {
        report_.warnings.push_back({code, skill.name, loc, std::move(message)});
    }

    bool forbidden(const std::string& modality) const {
        return std::find(forbidden_.begin(), forbidden_.end(), modality) != forbidden_.end();
    }

    const LibraryInfo& library_info(const std::string& name) {
        if (const auto it = cache_.info.find(name); it != cache_.info.end()) return it->second;
        LibraryInfo info;
        if (cache_.visiting.count(name)) {
            info.executable = false;
            info.problem = "library skill '" + name + "' is recursive";
            return cache_.info[name] = info;
        }
        cache_.visiting.insert(name);
        const auto* program = library_.program(name);
        Validator nested(*program, manifest_, library_, {}, cache_);
        auto report = nested.run();
        if (!report.valid()) {
            info.executable = false;
            info.problem = "library skill '" + name + "' cannot run on " + manifest_.id + ": " +
                           describe(report.errors.front());
        }
        info.modalities = nested.modalities();
        cache_.visiting.erase(name);
        return cache_.info[name] = std::move(info);
    }

    void check_block(const Block& block, const SkillDef& skill, int depth) {
        for (const auto& stmt : block) {
            if (const auto* call = std::get_if<Call>(&stmt.node)) {
                check_call(*call, skill, false);
            } else if (const auto* rep = std::get_if<Repeat>(&stmt.node)) {
                if (rep->count < 1 || rep->count > kMaxRepeatCount)
                    error(ErrorCode::RangeViolation, skill, rep->loc,
                          "repeat count " + std::to_string(rep->count) + " outside [1, " +
                              std::to_string(kMaxRepeatCount) + "]");
                check_nesting(skill, rep->loc, depth);
                check_block(rep->body, skill, depth + 1);
            } else if (const auto* branch = std::get_if<If>(&stmt.node)) {
                check_call(branch->predicate, skill, true);
                check_nesting(skill, branch->loc, depth);
                check_block(branch->then_body, skill, depth + 1);
                if (branch->else_body) check_block(*branch->else_body, skill, depth + 1);
            } else {
                const auto& w = std::get<Wait>(stmt.node);
                ParamSpec spec{"duration", SemanticType::Duration, true, std::nullopt, 0.0, 60.0, {}};
                check_value(w.duration, spec, skill, w.loc, "wait duration");
            }
        }
    }

    void check_nesting(const SkillDef& skill, SourceLoc loc, int depth) {
        if (depth + 1 > kMaxNestingDepth)
            error(ErrorCode::RangeViolation, skill, loc,
                  "nesting deeper than " + std::to_string(kMaxNestingDepth) + " levels");
    }

    void check_call(const Call& call, const SkillDef& skill, bool predicate) {
        const auto callee = resolve_callee(call.target, program_, library_, manifest_);
        if (!callee) {
            error(ErrorCode::UndefinedFunction, skill, call.loc, "call to undefined function '" + call.target + "'");
            return;
        }
        if (predicate) {
            if (callee->kind != CalleeKind::Sensor || callee->sensor->result != robots::SensorResult::Boolean) {
                error(ErrorCode::TypeMismatch, skill, call.loc, "'" + call.target + "' is not a boolean sensor predicate");
                return;
            }
        } else if (callee->kind == CalleeKind::Sensor) {
            error(ErrorCode::TypeMismatch, skill, call.loc, "sensor '" + call.target + "' can only be used as a condition");
            return;
        }
        if (callee->kind == CalleeKind::Library) {
            const auto& info = library_info(callee->name);
            if (!info.executable) {
                error(ErrorCode::UndefinedFunction, skill, call.loc, info.problem);
                return;
            }
            for (const auto& m : info.modalities)
                if (forbidden(m))
                    error(ErrorCode::ModalityForbidden, skill, call.loc,
                          "skill '" + call.target + "' uses the forbidden modality '" + m + "'");
        }
        if (callee->kind == CalleeKind::Primitive && forbidden(callee->primitive->modality))
            error(ErrorCode::ModalityForbidden, skill, call.loc,
                  "'" + call.target + "' uses the forbidden modality '" + callee->primitive->modality + "'");

        const auto binding = bind_args(call, callee->params);
        if (binding.positional)
            warn(WarningCode::PositionalStyle, skill, call.loc, "call to '" + call.target + "' uses positional arguments");
        for (const auto* arg : binding.unknown)
            error(ErrorCode::UnknownArgument, skill, arg->loc,
                  arg->name.empty() ? "too many arguments to '" + call.target + "'"
                                    : "'" + call.target + "' has no parameter '" + arg->name + "'");
        for (const auto* arg : binding.duplicate)
            error(ErrorCode::UnknownArgument, skill, arg->loc,
                  "argument '" + arg->name + "' given twice to '" + call.target + "'");
        for (std::size_t i = 0; i < callee->params.size(); ++i) {
            const auto& spec = callee->params[i];
            if (const auto* arg = binding.by_param[i])
                check_value(arg->value, spec, skill, arg->loc, "argument '" + spec.name + "' of '" + call.target + "'");
            else if (spec.required)
                error(ErrorCode::MissingRequiredArgument, skill, call.loc,
                      "'" + call.target + "' requires argument '" + spec.name + "'");
        }
    }

    void check_value(const Value& value, const ParamSpec& spec, const SkillDef& skill, SourceLoc loc,
                     const std::string& what) {
        const auto type_name = std::string(to_string(spec.type));
        if (const auto* ref = std::get_if<NameRef>(&value)) {
            const auto it = std::find_if(skill.params.begin(), skill.params.end(),
                                         [&](const Param& p) { return p.name == ref->name; });
            if (it == skill.params.end()) {
                error(ErrorCode::TypeMismatch, skill, loc, what + ": '" + ref->name + "' is not a parameter in scope");
            } else if (!compatible(it->type, spec.type)) {
                error(ErrorCode::TypeMismatch, skill, loc,
                      what + " expects " + type_name + " but '" + ref->name + "' is " + std::string(to_string(it->type)));
            }
            return;
        }
        if (const auto* num = std::get_if<NumberLit>(&value)) {
            switch (spec.type) {
                case SemanticType::Color:
                case SemanticType::Text:
                    error(ErrorCode::TypeMismatch, skill, loc, what + " expects " + type_name + ", got a number");
                    return;
                case SemanticType::Count:
                    if (num->unit != Unit::None) {
                        error(ErrorCode::UnitMismatch, skill, loc, what + " is a unitless count");
                        return;
                    }
                    if (!num->integral) {
                        error(ErrorCode::TypeMismatch, skill, loc, what + " expects an integer count");
                        return;
                    }
                    break;
                case SemanticType::Number:
                    if (num->unit != Unit::None) {
                        error(ErrorCode::UnitMismatch, skill, loc, what + " is unitless");
                        return;
                    }
                    break;
                default:
                    if (num->unit != Unit::None && num->unit != unit_of(spec.type)) {
                        error(ErrorCode::UnitMismatch, skill, loc,
                              what + " is measured in " + std::string(to_string(unit_of(spec.type))) + ", got " +
                                  format_number(*num));
                        return;
                    }
            }
            if ((spec.min && num->value < *spec.min) || (spec.max && num->value > *spec.max)) {
                error(ErrorCode::RangeViolation, skill, loc,
                      what + " = " + format_number(*num) + " outside [" + std::to_string(*spec.min) + ", " +
                          std::to_string(*spec.max) + "]");
            }
            return;
        }
        if (const auto* text = std::get_if<TextLit>(&value)) {
            if (spec.type != SemanticType::Text) {
                error(ErrorCode::TypeMismatch, skill, loc, what + " expects " + type_name + ", got a string");
                return;
            }
            if (!spec.choices.empty() &&
                std::find(spec.choices.begin(), spec.choices.end(), text->value) == spec.choices.end())
                error(ErrorCode::RangeViolation, skill, loc, what + " = \"" + text->value + "\" is not an allowed value");
            return;
        }
        if (spec.type != SemanticType::Color)
            error(ErrorCode::TypeMismatch, skill, loc, what + " expects " + type_name + ", got a color");
    }

    void check_recursion() {
        // 0 = unvisited, 1 = on stack, 2 = done
        std::map<std::string, int> state;
        std::function<void(const SkillDef&)> visit = [&](const SkillDef& skill) {
            state[skill.name] = 1;
            for_each_call(skill.body, [&](const Call& call) {
                const auto* target = program_.find(call.target);
                if (!target) return;
                const int s = state[target->name];
                if (s == 1)
                    error(ErrorCode::RecursionDetected, skill, call.loc,
                          "call to '" + call.target + "' closes a recursion cycle");
                else if (s == 0)
                    visit(*target);
            });
            state[skill.name] = 2;
        };
        for (const auto& skill : program_.skills)
            if (state[skill.name] == 0) visit(skill);
    }

    void check_unused() {
        const auto* entry = program_.entry();
        if (!entry) return;
        std::set<std::string> reached{entry->name};
        std::vector<const SkillDef*> todo{entry};
        while (!todo.empty()) {
            const auto* skill = todo.back();
            todo.pop_back();
            for_each_call(skill->body, [&](const Call& call) {
                if (const auto* target = program_.find(call.target); target && reached.insert(target->name).second)
                    todo.push_back(target);
            });
        }
        for (const auto& skill : program_.skills)
            if (!reached.count(skill.name))
                warn(WarningCode::UnusedSkill, skill, skill.loc,
                     "skill '" + skill.name + "' is never called from '" + entry->name + "'");
    }

    const Program& program_;
    const robots::EmbodimentManifest& manifest_;
    const SkillLibrary& library_;
    std::vector<std::string> forbidden_;
    LibraryCache& cache_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Program& program, const robots::EmbodimentManifest& manifest,
                          const SkillLibrary& library, const std::vector<std::string>& forbidden_modalities) {
    LibraryCache cache;
    return Validator(program, manifest, library, forbidden_modalities, cache).run();
}

std::vector<std::string> modalities_used(const Program& program, const robots::EmbodimentManifest& manifest,
                                         const SkillLibrary& library) {
    LibraryCache cache;
    const auto set = Validator(program, manifest, library, {}, cache).modalities();
    return {set.begin(), set.end()};
}

}  // namespace genem::ebl
