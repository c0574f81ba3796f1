#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/skill_library.hpp"
#include "genem/ebl/ast.hpp"
#include "genem/robots/manifest.hpp"

namespace genem::ebl {

enum class ErrorCode {
    UndefinedFunction,
    UnknownArgument,
    MissingRequiredArgument,
    TypeMismatch,
    UnitMismatch,
    RangeViolation,
    RecursionDetected,
    ModalityForbidden,
};

enum class WarningCode { MissingDocstring, PositionalStyle, UnusedSkill };

std::string_view to_string(ErrorCode code);
std::string_view to_string(WarningCode code);

template <typename Code>
struct Finding {
    Code code;
    std::string skill;  // enclosing skill definition
    SourceLoc loc;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding<ErrorCode>> errors;
    std::vector<Finding<WarningCode>> warnings;

    bool valid() const { return errors.empty(); }
    bool has(ErrorCode code) const;
    bool has(WarningCode code) const;
    // Short human-readable list, one finding per line.
    std::string summary() const;
};

nlohmann::json to_json(const ValidationReport& report);

inline constexpr int kMaxRepeatCount = 100;
inline constexpr int kMaxNestingDepth = 8;

// Static checks of a program against a manifest and skill library:
// call resolution, named arguments, semantic types, units, literal ranges,
// repeat/nesting bounds, recursion, forbidden modalities, docstrings.
ValidationReport validate(const Program& program, const robots::EmbodimentManifest& manifest,
                          const SkillLibrary& library, const std::vector<std::string>& forbidden_modalities = {});

// Modalities a callee can exercise, following local and library skills.
std::vector<std::string> modalities_used(const Program& program, const robots::EmbodimentManifest& manifest,
                                         const SkillLibrary& library);

}  // namespace genem::ebl
