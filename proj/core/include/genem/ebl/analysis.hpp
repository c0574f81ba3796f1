#pragma once

#include <map>
#include <string>

#include "genem/domain/skill_library.hpp"
#include "genem/ebl/ast.hpp"

namespace genem::ebl {

// Static call sites, over all definitions in the program, that resolve to
// library skills. Local definitions shadow the library.
std::map<std::string, int> extract_called_skills(const Program& program, const SkillLibrary& library);

// Static call sites per target name, resolved or not.
std::map<std::string, int> static_call_counts(const Program& program);

}  // namespace genem::ebl
