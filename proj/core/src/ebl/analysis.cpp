#include "genem/ebl/analysis.hpp"

namespace genem::ebl {

std::map<std::string, int> extract_called_skills(const Program& program, const SkillLibrary& library) {
    std::map<std::string, int> out;
    for (const auto& skill : program.skills)
        for_each_call(skill.body, [&](const Call& call) {
            if (!program.find(call.target) && library.find(call.target)) ++out[call.target];
        });
    return out;
}

std::map<std::string, int> static_call_counts(const Program& program) {
    std::map<std::string, int> out;
    for (const auto& skill : program.skills) for_each_call(skill.body, [&](const Call& call) { ++out[call.target]; });
    return out;
}

}  // namespace genem::ebl
