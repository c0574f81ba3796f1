#include "genem/ebl/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace genem::ebl {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

enum class Tok {
    Ident,
    Number,
    String,
    Docstring,
    Color,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;   // identifier / decoded string / docstring body / number spelling
    double number = 0.0;
    bool integral = false;
    Unit unit = Unit::None;
    std::uint32_t rgb = 0;
    SourceLoc loc;
};

std::string_view tok_name(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::String: return "string";
        case Tok::Docstring: return "docstring";
        case Tok::Color: return "color";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::Equals: return "'='";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token tok;
            tok.loc = {line_, col_};
            if (pos_ >= src_.size()) {
                tok.kind = Tok::End;
                out.push_back(std::move(tok));
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tok.kind = Tok::Ident;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    tok.text += advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       ((c == '-' || c == '.') && pos_ + 1 < src_.size() &&
                        (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '.'))) {
                lex_number(tok);
            } else if (c == '"') {
                if (src_.substr(pos_, 3) == "\"\"\"")
                    lex_docstring(tok);
                else
                    lex_string(tok);
            } else if (c == '#') {
                lex_color(tok);
            } else {
                switch (c) {
                    case '(': tok.kind = Tok::LParen; break;
                    case ')': tok.kind = Tok::RParen; break;
                    case '{': tok.kind = Tok::LBrace; break;
                    case '}': tok.kind = Tok::RBrace; break;
                    case ',': tok.kind = Tok::Comma; break;
                    case ':': tok.kind = Tok::Colon; break;
                    case '=': tok.kind = Tok::Equals; break;
                    default:
                        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'", {});
                }
                advance();
            }
            out.push_back(std::move(tok));
        }
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    void lex_number(Token& tok) {
        tok.kind = Tok::Number;
        const int line = line_, col = col_;
        std::string spelling;
        if (src_[pos_] == '-') spelling += advance();
        bool seen_dot = false;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                spelling += advance();
            } else if (c == '.' && !seen_dot && pos_ + 1 < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                seen_dot = true;
                spelling += advance();
            } else {
                break;
            }
        }
        if (spelling == "-" || spelling.empty()) throw ParseError(line, col, "malformed number", {"number"});
        tok.integral = !seen_dot;
        tok.text = spelling;
        const auto* first = spelling.data();
        const auto* last = spelling.data() + spelling.size();
        auto [ptr, ec] = std::from_chars(first, last, tok.number);
        if (ec != std::errc() || ptr != last) throw ParseError(line, col, "malformed number '" + spelling + "'", {"number"});

        std::string suffix;
        std::size_t look = pos_;
        while (look < src_.size() && std::isalpha(static_cast<unsigned char>(src_[look]))) suffix += src_[look++];
        if (suffix.empty()) return;
        if (suffix == "deg")
            tok.unit = Unit::Deg;
        else if (suffix == "m")
            tok.unit = Unit::M;
        else if (suffix == "s")
            tok.unit = Unit::S;
        else
            throw ParseError(line_, col_, "unknown unit suffix '" + suffix + "'", {"deg", "m", "s"});
        for (std::size_t i = 0; i < suffix.size(); ++i) advance();
    }

    void lex_string(Token& tok) {
        tok.kind = Tok::String;
        const int line = line_, col = col_;
        advance();
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw ParseError(line, col, "unterminated string literal", {"'\"'"});
            const char c = advance();
            if (c == '"') return;
            if (c == '\\') {
                if (pos_ >= src_.size()) throw ParseError(line, col, "unterminated string literal", {"'\"'"});
                const char e = advance();
                switch (e) {
                    case 'n': tok.text += '\n'; break;
                    case 't': tok.text += '\t'; break;
                    case '"': tok.text += '"'; break;
                    case '\\': tok.text += '\\'; break;
                    default: throw ParseError(line_, col_ - 1, std::string("unknown escape '\\") + e + "'", {});
                }
            } else {
                tok.text += c;
            }
        }
    }

    void lex_docstring(Token& tok) {
        tok.kind = Tok::Docstring;
        const int line = line_, col = col_;
        for (int i = 0; i < 3; ++i) advance();
        const auto close = src_.find("\"\"\"", pos_);
        if (close == std::string_view::npos) throw ParseError(line, col, "unterminated docstring", {"'\"\"\"'"});
        while (pos_ < close) tok.text += advance();
        for (int i = 0; i < 3; ++i) advance();
    }

    void lex_color(Token& tok) {
        tok.kind = Tok::Color;
        const int line = line_, col = col_;
        advance();
        std::string hex;
        while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_])) && hex.size() < 7)
            hex += advance();
        if (hex.size() != 6) throw ParseError(line, col, "color literal must be #RRGGBB", {"#RRGGBB"});
        tok.rgb = static_cast<std::uint32_t>(std::stoul(hex, nullptr, 16));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program() {
        Program prog;
        while (peek().kind != Tok::End) prog.skills.push_back(skill());
        return prog;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        const auto idx = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[idx];
    }

    Token take() {
        Token t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Token& at, std::vector<std::string> expected) const {
        std::string found = std::string(tok_name(at.kind));
        if (at.kind == Tok::Ident) found = "'" + at.text + "'";
        throw ParseError(at.loc.line, at.loc.column, "expected " + describe_expected(expected) + ", found " + found,
                         std::move(expected));
    }

    Token expect(Tok kind) {
        if (peek().kind != kind) fail(peek(), {std::string(tok_name(kind))});
        return take();
    }

    bool is_keyword(const Token& t, std::string_view kw) const { return t.kind == Tok::Ident && t.text == kw; }

    void expect_keyword(std::string_view kw) {
        if (!is_keyword(peek(), kw)) fail(peek(), {"'" + std::string(kw) + "'"});
        take();
    }

    SkillDef skill() {
        SkillDef def;
        def.loc = peek().loc;
        expect_keyword("skill");
        def.name = expect(Tok::Ident).text;
        expect(Tok::LParen);
        if (peek().kind != Tok::RParen) {
            def.params.push_back(param());
            while (peek().kind == Tok::Comma) {
                take();
                def.params.push_back(param());
            }
        }
        expect(Tok::RParen);
        expect(Tok::LBrace);
        if (peek().kind == Tok::Docstring) def.docstring = take().text;
        def.body = block_tail();
        return def;
    }

    Param param() {
        Param p;
        p.loc = peek().loc;
        p.name = expect(Tok::Ident).text;
        expect(Tok::Colon);
        const Token type_tok = peek();
        if (type_tok.kind != Tok::Ident) fail(type_tok, {"type name"});
        take();
        const auto type = semantic_type_from_string(type_tok.text);
        if (!type)
            throw ParseError(type_tok.loc.line, type_tok.loc.column, "unknown type '" + type_tok.text + "'",
                             {"angle", "distance", "duration", "count", "number", "color", "text"});
        p.type = *type;
        if (peek().kind == Tok::Equals) {
            take();
            const Token& at = peek();
            Value v = value();
            if (std::holds_alternative<NameRef>(v)) fail(at, {"literal default"});
            p.default_value = std::move(v);
        }
        return p;
    }

    // Statements up to and including the closing brace.
    Block block_tail() {
        Block body;
        while (peek().kind != Tok::RBrace) {
            if (peek().kind == Tok::End) fail(peek(), {"'}'", "statement"});
            body.push_back(statement());
        }
        take();
        return body;
    }

    Block braced_block() {
        expect(Tok::LBrace);
        return block_tail();
    }

    Statement statement() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, {"statement"});
        if (t.text == "repeat") {
            Repeat rep;
            rep.loc = take().loc;
            const Token count = peek();
            if (count.kind != Tok::Number || !count.integral || count.unit != Unit::None)
                fail(count, {"integer repeat count"});
            take();
            rep.count = static_cast<std::int64_t>(count.number);
            rep.body = braced_block();
            return Statement{std::move(rep)};
        }
        if (t.text == "if") {
            If branch;
            branch.loc = take().loc;
            branch.predicate = call();
            branch.then_body = braced_block();
            if (is_keyword(peek(), "else")) {
                take();
                branch.else_body = braced_block();
            }
            return Statement{std::move(branch)};
        }
        if (t.text == "wait" && peek(1).kind != Tok::LParen) {
            Wait w;
            w.loc = take().loc;
            w.duration = value();
            return Statement{std::move(w)};
        }
        if (t.text == "skill" || t.text == "else") fail(t, {"statement", "'}'"});
        return Statement{call()};
    }

    Call call() {
        Call c;
        c.loc = peek().loc;
        c.target = expect(Tok::Ident).text;
        expect(Tok::LParen);
        if (peek().kind != Tok::RParen) {
            c.args.push_back(arg());
            while (peek().kind == Tok::Comma) {
                take();
                c.args.push_back(arg());
            }
        }
        expect(Tok::RParen);
        return c;
    }

    Arg arg() {
        Arg a;
        a.loc = peek().loc;
        if (peek().kind == Tok::Ident && peek(1).kind == Tok::Equals) {
            a.name = take().text;
            take();
        }
        a.value = value();
        return a;
    }

    Value value() {
        const Token t = peek();
        switch (t.kind) {
            case Tok::Number:
                take();
                return NumberLit{t.number, t.unit, t.integral};
            case Tok::String:
                take();
                return TextLit{t.text};
            case Tok::Color:
                take();
                return ColorLit{t.rgb};
            case Tok::Ident:
                take();
                return NameRef{t.text};
            default:
                fail(t, {"number", "string", "color", "identifier"});
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(int line, int column, std::string message, std::vector<std::string> expected)
    : Error("ParseError", std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Program parse(std::string_view source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.program();
}

}  // namespace genem::ebl
