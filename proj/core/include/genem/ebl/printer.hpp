#pragma once

#include <string>

#include "genem/ebl/ast.hpp"

namespace genem::ebl {

// Deterministic pretty-printer. print(parse(print(p))) == print(p) for every
// valid program, and parse(print(p)) == p.
std::string print(const Program& program);
std::string print(const SkillDef& skill);
std::string print(const Statement& stmt);
std::string print(const Call& call);
std::string print_value(const Value& value);
std::string format_number(const NumberLit& number);
std::string format_color(std::uint32_t rgb);

}  // namespace genem::ebl
