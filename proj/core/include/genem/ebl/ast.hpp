#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace genem::ebl {

inline constexpr std::string_view kGrammarVersion = "ebl/1";

enum class Unit { None, Deg, M, S };

// Semantic type of a parameter. Numeric types carry an implied unit.
enum class SemanticType { Angle, Distance, Duration, Count, Number, Color, Text };

std::string_view to_string(Unit unit);
std::string_view to_string(SemanticType type);
std::optional<SemanticType> semantic_type_from_string(std::string_view name);
// Unit a numeric semantic type is measured in (None for Count/Number/Color/Text).
Unit unit_of(SemanticType type);

// Locations are carried for diagnostics only and never take part in equality.
struct SourceLoc {
    int line = 0;
    int column = 0;
    friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

struct NumberLit {
    double value = 0.0;
    Unit unit = Unit::None;
    bool integral = false;
    bool operator==(const NumberLit&) const = default;
};

struct TextLit {
    std::string value;
    bool operator==(const TextLit&) const = default;
};

struct ColorLit {
    std::uint32_t rgb = 0;
    bool operator==(const ColorLit&) const = default;
};

// Reference to a parameter of the enclosing skill.
struct NameRef {
    std::string name;
    bool operator==(const NameRef&) const = default;
};

using Value = std::variant<NumberLit, TextLit, ColorLit, NameRef>;

struct Arg {
    std::string name;  // empty for a positional argument
    Value value;
    SourceLoc loc;
    bool operator==(const Arg&) const = default;
};

struct Call {
    std::string target;
    std::vector<Arg> args;
    SourceLoc loc;
    bool operator==(const Call&) const = default;
};

struct Statement;
using Block = std::vector<Statement>;

struct Repeat {
    std::int64_t count = 0;
    Block body;
    SourceLoc loc;
    friend bool operator==(const Repeat& a, const Repeat& b);
};

struct If {
    Call predicate;
    Block then_body;
    std::optional<Block> else_body;
    SourceLoc loc;
    friend bool operator==(const If& a, const If& b);
};

struct Wait {
    Value duration;
    SourceLoc loc;
    bool operator==(const Wait&) const = default;
};

struct Statement {
    std::variant<Call, Repeat, If, Wait> node;
    friend bool operator==(const Statement& a, const Statement& b) { return a.node == b.node; }
};

inline bool operator==(const Repeat& a, const Repeat& b) { return a.count == b.count && a.body == b.body; }
inline bool operator==(const If& a, const If& b) {
    return a.predicate == b.predicate && a.then_body == b.then_body && a.else_body == b.else_body;
}

struct Param {
    std::string name;
    SemanticType type = SemanticType::Number;
    std::optional<Value> default_value;  // literal only
    SourceLoc loc;
    bool operator==(const Param&) const = default;
};

struct SkillDef {
    std::string name;
    std::string docstring;
    std::vector<Param> params;
    Block body;
    SourceLoc loc;
    bool operator==(const SkillDef&) const = default;
};

struct Program {
    std::vector<SkillDef> skills;

    const SkillDef* find(std::string_view name) const;
    // The entry skill is the last definition; helpers come first.
    const SkillDef* entry() const { return skills.empty() ? nullptr : &skills.back(); }

    bool operator==(const Program&) const = default;
};

// Visit every call in a block, including predicates and nested bodies.
template <typename Fn>
void for_each_call(const Block& block, Fn&& fn) {
    for (const auto& stmt : block) {
        if (const auto* call = std::get_if<Call>(&stmt.node)) {
            fn(*call);
        } else if (const auto* rep = std::get_if<Repeat>(&stmt.node)) {
            for_each_call(rep->body, fn);
        } else if (const auto* branch = std::get_if<If>(&stmt.node)) {
            fn(branch->predicate);
            for_each_call(branch->then_body, fn);
            if (branch->else_body) for_each_call(*branch->else_body, fn);
        }
    }
}

}  // namespace genem::ebl
