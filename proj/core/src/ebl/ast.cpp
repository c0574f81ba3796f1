#include "genem/ebl/ast.hpp"

namespace genem::ebl {

std::string_view to_string(Unit unit) {
    switch (unit) {
        case Unit::None: return "";
        case Unit::Deg: return "deg";
        case Unit::M: return "m";
        case Unit::S: return "s";
    }
    return "";
}

std::string_view to_string(SemanticType type) {
    switch (type) {
        case SemanticType::Angle: return "angle";
        case SemanticType::Distance: return "distance";
        case SemanticType::Duration: return "duration";
        case SemanticType::Count: return "count";
        case SemanticType::Number: return "number";
        case SemanticType::Color: return "color";
        case SemanticType::Text: return "text";
    }
    return "";
}

std::optional<SemanticType> semantic_type_from_string(std::string_view name) {
    for (auto t : {SemanticType::Angle, SemanticType::Distance, SemanticType::Duration, SemanticType::Count,
                   SemanticType::Number, SemanticType::Color, SemanticType::Text})
        if (to_string(t) == name) return t;
    return std::nullopt;
}

Unit unit_of(SemanticType type) {
    switch (type) {
        case SemanticType::Angle: return Unit::Deg;
        case SemanticType::Distance: return Unit::M;
        case SemanticType::Duration: return Unit::S;
        default: return Unit::None;
    }
}

const SkillDef* Program::find(std::string_view name) const {
    for (const auto& s : skills)
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace genem::ebl
