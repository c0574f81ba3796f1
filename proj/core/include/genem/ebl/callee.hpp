#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genem/domain/skill_library.hpp"
#include "genem/ebl/ast.hpp"
#include "genem/robots/manifest.hpp"

namespace genem::ebl {

struct ParamSpec {
    std::string name;
    SemanticType type = SemanticType::Number;
    bool required = true;
    std::optional<Value> default_value;
    std::optional<double> min;
    std::optional<double> max;
    std::vector<std::string> choices;
};

enum class CalleeKind { Local, Library, Primitive, Sensor };

// What a call target resolved to. Skill callees point at their definition
// and at the program that scopes the definition's own calls.
struct Callee {
    CalleeKind kind = CalleeKind::Primitive;
    std::string name;
    std::vector<ParamSpec> params;
    const SkillDef* skill = nullptr;
    const Program* scope = nullptr;
    const robots::Primitive* primitive = nullptr;
    const robots::Sensor* sensor = nullptr;
};

// Resolution order: definitions in `scope`, then the library, then manifest
// primitives, then manifest sensors.
std::optional<Callee> resolve_callee(std::string_view name, const Program& scope, const SkillLibrary& library,
                                     const robots::EmbodimentManifest& manifest);

std::vector<ParamSpec> param_specs(const SkillDef& skill);

// Argument-to-parameter assignment of one call.
struct ArgBinding {
    std::vector<const Arg*> by_param;  // null where the call omits the parameter
    std::vector<const Arg*> unknown;   // named args matching no parameter, or surplus positionals
    std::vector<const Arg*> duplicate; // parameter already bound
    bool positional = false;
};

ArgBinding bind_args(const Call& call, const std::vector<ParamSpec>& params);

}  // namespace genem::ebl
