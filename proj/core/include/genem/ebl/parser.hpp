#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "genem/ebl/ast.hpp"
#include "genem/error.hpp"

namespace genem::ebl {

class ParseError : public Error {
public:
    ParseError(int line, int column, std::string message, std::vector<std::string> expected);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

// Parses EBL source text.
//
//   program := skill*
//   skill   := 'skill' IDENT '(' [param {',' param}] ')' '{' [DOCSTRING] stmt* '}'
//   param   := IDENT ':' TYPE ['=' literal]
//   stmt    := call | 'repeat' INT '{' stmt* '}'
//            | 'if' call '{' stmt* '}' ['else' '{' stmt* '}'] | 'wait' value
//   call    := IDENT '(' [arg {',' arg}] ')'
//   arg     := [IDENT '='] value
//   value   := NUMBER [deg|m|s] | STRING | #RRGGBB | IDENT
//
// `//` starts a line comment. Positional arguments are accepted so the
// validator can report them; canonical programs use named arguments.
Program parse(std::string_view source);

}  // namespace genem::ebl
