#include "genem/ebl/printer.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace genem::ebl {

namespace {

constexpr std::string_view kIndent = "    ";

void indent(std::string& out, int depth) {
    for (int i = 0; i < depth; ++i) out += kIndent;
}

std::string escape(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

void print_block(std::string& out, const Block& block, int depth);

void print_statement(std::string& out, const Statement& stmt, int depth) {
    indent(out, depth);
    if (const auto* call = std::get_if<Call>(&stmt.node)) {
        out += print(*call);
        out += '\n';
    } else if (const auto* rep = std::get_if<Repeat>(&stmt.node)) {
        out += "repeat " + std::to_string(rep->count) + " {\n";
        print_block(out, rep->body, depth + 1);
        indent(out, depth);
        out += "}\n";
    } else if (const auto* branch = std::get_if<If>(&stmt.node)) {
        out += "if " + print(branch->predicate) + " {\n";
        print_block(out, branch->then_body, depth + 1);
        indent(out, depth);
        out += '}';
        if (branch->else_body) {
            out += " else {\n";
            print_block(out, *branch->else_body, depth + 1);
            indent(out, depth);
            out += '}';
        }
        out += '\n';
    } else {
        const auto& w = std::get<Wait>(stmt.node);
        out += "wait " + print_value(w.duration) + '\n';
    }
}

void print_block(std::string& out, const Block& block, int depth) {
    for (const auto& stmt : block) print_statement(out, stmt, depth);
}

void print_skill(std::string& out, const SkillDef& skill) {
    out += "skill " + skill.name + "(";
    for (std::size_t i = 0; i < skill.params.size(); ++i) {
        const auto& p = skill.params[i];
        if (i) out += ", ";
        out += p.name;
        out += ": ";
        out += to_string(p.type);
        if (p.default_value) out += " = " + print_value(*p.default_value);
    }
    out += ") {\n";
    if (!skill.docstring.empty()) {
        indent(out, 1);
        out += "\"\"\"" + skill.docstring + "\"\"\"\n";
    }
    print_block(out, skill.body, 1);
    out += "}\n";
}

}  // namespace

std::string format_number(const NumberLit& number) {
    std::array<char, 64> buf{};
    std::string text;
    if (number.integral) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<long long>(number.value));
        text.assign(buf.data(), ptr);
    } else {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), number.value, std::chars_format::fixed);
        text.assign(buf.data(), ptr);
        if (text.find('.') == std::string::npos) text += ".0";
    }
    if (number.unit != Unit::None) text += to_string(number.unit);
    return text;
}

std::string format_color(std::uint32_t rgb) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out = "#";
    for (int shift = 20; shift >= 0; shift -= 4) out += kHex[(rgb >> shift) & 0xF];
    return out;
}

std::string print_value(const Value& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NumberLit>)
                return format_number(v);
            else if constexpr (std::is_same_v<T, TextLit>)
                return escape(v.value);
            else if constexpr (std::is_same_v<T, ColorLit>)
                return format_color(v.rgb);
            else
                return v.name;
        },
        value);
}

std::string print(const Call& call) {
    std::string out = call.target + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i) out += ", ";
        if (!call.args[i].name.empty()) out += call.args[i].name + "=";
        out += print_value(call.args[i].value);
    }
    out += ')';
    return out;
}

std::string print(const Statement& stmt) {
    std::string out;
    print_statement(out, stmt, 0);
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string print(const SkillDef& skill) {
    std::string out;
    print_skill(out, skill);
    return out;
}

std::string print(const Program& program) {
    std::string out;
    for (std::size_t i = 0; i < program.skills.size(); ++i) {
        if (i) out += '\n';
        print_skill(out, program.skills[i]);
    }
    return out;
}

}  // namespace genem::ebl
