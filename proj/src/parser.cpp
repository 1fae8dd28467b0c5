#include "codetoon/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <set>

#include "codetoon/errors.hpp"

namespace codetoon {

std::string_view to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
    }
    return "?";
}

std::string_view to_string(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "==";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Gt: return ">";
        case CompareOp::Le: return "<=";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

const std::vector<Stmt>& body_of(const Stmt& stmt) {
    static const std::vector<Stmt> empty;
    return std::visit(overloaded{
                          [](const If& s) -> const std::vector<Stmt>& { return s.body; },
                          [](const While& s) -> const std::vector<Stmt>& { return s.body; },
                          [](const ForRange& s) -> const std::vector<Stmt>& { return s.body; },
                          [](const FuncDef& s) -> const std::vector<Stmt>& { return s.body; },
                          [](const auto&) -> const std::vector<Stmt>& { return empty; },
                      },
                      stmt.node);
}

std::size_t statement_count(const CodeAst& ast) {
    std::size_t n = 0;
    for_each_stmt(ast.statements, [&](const Stmt&) { ++n; });
    return n;
}

std::string_view stmt_kind(const Stmt& stmt) {
    static constexpr std::array<std::string_view, 7> names = {
        "Assign", "If", "While", "ForRange", "FuncDef", "CallStmt", "Return"};
    return names[stmt.node.index()];
}

namespace {

// ---------------------------------------------------------------------------
// Lexing

enum class Tok { Name, Int, Str, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier, operator, digits, or decoded string
    int col = 1;
};

struct LogicalLine {
    int line = 0;
    int level = 0;
    std::vector<Token> tokens;
};

const std::set<std::string, std::less<>> kUnsupportedKeywords = {
    "class", "import", "from",    "else",     "elif",  "try",    "except", "finally",
    "with",  "lambda", "async",   "await",    "global", "nonlocal", "del", "pass",
    "break", "continue", "raise", "assert",   "yield"};

const std::set<std::string, std::less<>> kKeywords = {
    "False", "None",   "True",    "and",      "as",     "assert", "async", "await",
    "break", "class",  "continue", "def",     "del",    "elif",   "else",  "except",
    "finally", "for",  "from",    "global",   "if",     "import", "in",    "is",
    "lambda", "nonlocal", "not",  "or",       "pass",   "raise",  "return", "try",
    "while", "with",   "yield"};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Returns the offset of the first byte that is not valid UTF-8, if any.
std::optional<std::size_t> invalid_utf8_at(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > s.size()) return i;
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return i;
        }
        i += len;
    }
    return std::nullopt;
}

class LineLexer {
public:
    LineLexer(std::string_view text, int line) : text_(text), line_(line) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            int col = static_cast<int>(pos_) + 1;
            if (c == ' ') {
                ++pos_;
            } else if (c == '#') {
                break;
            } else if (c == '\t') {
                throw SyntaxError(line_, col, "tab character is not allowed");
            } else if (is_ident_start(c)) {
                std::size_t start = pos_;
                while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
                std::string word(text_.substr(start, pos_ - start));
                if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'') &&
                    is_string_prefix(word)) {
                    throw UnsupportedConstruct(line_, "string prefix '" + word + "'");
                }
                out.push_back({Tok::Name, std::move(word), col});
            } else if (is_digit(c)) {
                out.push_back(lex_number(col));
            } else if (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])) {
                throw UnsupportedConstruct(line_, "float literal");
            } else if (c == '"' || c == '\'') {
                out.push_back(lex_string(col));
            } else if (c == '\\') {
                throw UnsupportedConstruct(line_, "line continuation");
            } else {
                out.push_back(lex_operator(col));
            }
        }
        return out;
    }

private:
    static bool is_string_prefix(const std::string& w) {
        std::string lower;
        for (char ch : w) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        static const std::set<std::string, std::less<>> prefixes = {
            "r", "u", "b", "f", "br", "rb", "fr", "rf"};
        return prefixes.count(lower) > 0;
    }

    Token lex_number(int col) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (is_ident_char(text_[pos_]) || text_[pos_] == '.')) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        if (digits.find_first_of(".eE") != std::string::npos &&
            std::all_of(digits.begin(), digits.end(),
                        [](char ch) { return is_digit(ch) || ch == '.' || ch == 'e' || ch == 'E'; })) {
            throw UnsupportedConstruct(line_, "float literal");
        }
        if (digits.size() > 1 && digits[0] == '0' &&
            (digits[1] == 'x' || digits[1] == 'X' || digits[1] == 'o' || digits[1] == 'O' ||
             digits[1] == 'b' || digits[1] == 'B')) {
            throw UnsupportedConstruct(line_, "non-decimal integer literal");
        }
        if (digits.find('_') != std::string::npos &&
            std::all_of(digits.begin(), digits.end(), [](char ch) { return is_digit(ch) || ch == '_'; })) {
            throw UnsupportedConstruct(line_, "digit separator");
        }
        if (!std::all_of(digits.begin(), digits.end(), is_digit)) {
            throw SyntaxError(line_, col, "invalid number literal '" + digits + "'");
        }
        if (digits.size() > 1 && digits[0] == '0' &&
            digits.find_first_not_of('0') != std::string::npos) {
            throw SyntaxError(line_, col, "leading zeros in integer literal");
        }
        return {Tok::Int, std::move(digits), col};
    }

    Token lex_string(int col) {
        char quote = text_[pos_];
        if (text_.substr(pos_, 3) == std::string(3, quote)) {
            throw UnsupportedConstruct(line_, "triple-quoted string");
        }
        ++pos_;
        std::string value;
        while (true) {
            if (pos_ >= text_.size()) throw SyntaxError(line_, col, "unterminated string literal");
            char c = text_[pos_++];
            if (c == quote) break;
            if (c == '\t') throw SyntaxError(line_, static_cast<int>(pos_), "tab character is not allowed");
            if (c != '\\') {
                value.push_back(c);
                continue;
            }
            if (pos_ >= text_.size()) throw SyntaxError(line_, col, "unterminated string literal");
            char e = text_[pos_++];
            switch (e) {
                case '\\': value.push_back('\\'); break;
                case '\'': value.push_back('\''); break;
                case '"': value.push_back('"'); break;
                case 'n': value.push_back('\n'); break;
                case 't': value.push_back('\t'); break;
                case 'r': value.push_back('\r'); break;
                default:
                    value.push_back('\\');
                    value.push_back(e);
                    break;
            }
        }
        return {Tok::Str, std::move(value), col};
    }

    Token lex_operator(int col) {
        static constexpr std::array<std::string_view, 14> two = {
            "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "//", "**", "->", "<<", ">>", ":="};
        std::string_view rest = text_.substr(pos_);
        for (auto op : two) {
            if (rest.substr(0, 2) == op) {
                pos_ += 2;
                return {Tok::Op, std::string(op), col};
            }
        }
        char c = text_[pos_];
        static constexpr std::string_view singles = "+-*/<>=():,%&|^~@[]{}.;!";
        if (singles.find(c) == std::string_view::npos) {
            auto uc = static_cast<unsigned char>(c);
            std::string shown = (uc >= 0x20 && uc < 0x7F) ? std::string(1, c) : "\\x" + hex_byte(uc);
            throw SyntaxError(line_, col, "unexpected character '" + shown + "'");
        }
        ++pos_;
        return {Tok::Op, std::string(1, c), col};
    }

    static std::string hex_byte(unsigned char b) {
        static constexpr char digits[] = "0123456789abcdef";
        return {digits[b >> 4], digits[b & 0xF]};
    }

    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Statement / expression parsing over one logical line

class LineParser {
public:
    LineParser(const LogicalLine& line) : line_(line) {}

    const Token& peek(std::size_t ahead = 0) const {
        static const Token end{Tok::End, "", 0};
        std::size_t i = pos_ + ahead;
        if (i < line_.tokens.size()) return line_.tokens[i];
        return end;
    }
    bool at_end() const { return pos_ >= line_.tokens.size(); }
    int col() const {
        if (at_end()) {
            if (line_.tokens.empty()) return 1;
            const auto& last = line_.tokens.back();
            return last.col + static_cast<int>(last.text.size());
        }
        return peek().col;
    }
    Token next() { return line_.tokens.at(pos_++); }

    bool is_op(std::string_view op, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Op && peek(ahead).text == op;
    }
    bool is_name(std::string_view word, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Name && peek(ahead).text == word;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_.line, col(), msg); }
    [[noreturn]] void unsupported(const std::string& what) const {
        throw UnsupportedConstruct(line_.line, what);
    }

    void expect_op(std::string_view op) {
        if (!is_op(op)) fail("expected '" + std::string(op) + "'" + found());
        ++pos_;
    }

    std::string found() const {
        if (at_end()) return ", found end of line";
        return ", found '" + peek().text + "'";
    }

    void expect_end() {
        if (at_end()) return;
        if (is_op(";")) unsupported("multiple statements on one line");
        if (is_op("=")) unsupported("chained assignment");
        check_unsupported_operator();
        fail("unexpected token '" + peek().text + "'");
    }

    // Header lines end with ':' and nothing else.
    void expect_block_colon() {
        expect_op(":");
        if (!at_end()) unsupported("statement on the same line as its block header");
    }

    std::string identifier(const std::string& what) {
        if (peek().kind != Tok::Name) fail("expected " + what + found());
        if (kKeywords.count(peek().text) > 0) fail("expected " + what + ", found keyword '" + peek().text + "'");
        return next().text;
    }

    void check_unsupported_operator() const {
        if (peek().kind != Tok::Op) {
            if (peek().kind == Tok::Name) {
                const auto& w = peek().text;
                if (w == "and" || w == "or" || w == "not") unsupported("boolean operator '" + w + "'");
                if (w == "in" || w == "is") unsupported("membership/identity test '" + w + "'");
                if (w == "if") unsupported("conditional expression");
                if (w == "for") unsupported("comprehension");
            }
            return;
        }
        const auto& op = peek().text;
        if (op == "+=" || op == "-=" || op == "*=" || op == "/=") unsupported("augmented assignment");
        if (op == "%" || op == "//" || op == "**" || op == "&" || op == "|" || op == "^" ||
            op == "<<" || op == ">>" || op == "@" || op == "~") {
            unsupported("operator '" + op + "'");
        }
        if (op == ":=") unsupported("assignment expression");
        if (op == "[") unsupported("subscript");
        if (op == ".") unsupported("attribute access");
    }

    Expr expression() {
        Expr lhs = arith();
        if (auto op = compare_op()) {
            ++pos_;
            Expr rhs = arith();
            if (compare_op()) unsupported("chained comparison");
            return Expr{Compare{*op, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    std::optional<CompareOp> compare_op() const {
        if (peek().kind != Tok::Op) {
            if (is_name("in") || is_name("is") || (is_name("not") && (is_name("in", 1))))
                unsupported("membership/identity test '" + peek().text + "'");
            return std::nullopt;
        }
        const auto& t = peek().text;
        if (t == "==") return CompareOp::Eq;
        if (t == "!=") return CompareOp::Ne;
        if (t == "<") return CompareOp::Lt;
        if (t == ">") return CompareOp::Gt;
        if (t == "<=") return CompareOp::Le;
        if (t == ">=") return CompareOp::Ge;
        return std::nullopt;
    }

    Expr arith() {
        Expr lhs = term();
        while (is_op("+") || is_op("-")) {
            BinaryOp op = next().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
            Expr rhs = term();
            lhs = Expr{BinOp{op, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (is_op("*") || is_op("/")) {
            BinaryOp op = next().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
            Expr rhs = unary();
            lhs = Expr{BinOp{op, std::move(lhs), std::move(rhs)}};
        }
        check_unsupported_operator();
        return lhs;
    }

    Expr unary() {
        if (is_op("-")) {
            ++pos_;
            if (peek().kind != Tok::Int) unsupported("unary operator '-'");
            return Expr{IntLit{int_value(next(), true)}};
        }
        if (is_op("+") || is_op("~")) unsupported("unary operator '" + peek().text + "'");
        if (is_name("not")) unsupported("boolean operator 'not'");
        return postfix();
    }

    Expr postfix() {
        Expr e = atom();
        if (is_op("(")) unsupported("call on a non-name expression");
        check_unsupported_operator();
        return e;
    }

    std::int64_t int_value(const Token& tok, bool negative) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        constexpr auto max = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
        if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size() || v > max + (negative ? 1 : 0)) {
            unsupported("integer literal out of range");
        }
        if (negative) return v == max + 1 ? std::numeric_limits<std::int64_t>::min() : -static_cast<std::int64_t>(v);
        return static_cast<std::int64_t>(v);
    }

    Expr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: return Expr{IntLit{int_value(next(), false)}};
            case Tok::Str: return Expr{StrLit{next().text}};
            case Tok::Name: {
                if (t.text == "True" || t.text == "False") {
                    bool v = next().text == "True";
                    return Expr{BoolLit{v}};
                }
                if (t.text == "None") unsupported("None");
                if (t.text == "lambda") unsupported("lambda");
                if (t.text == "not" || t.text == "and" || t.text == "or") unsupported("boolean operator '" + t.text + "'");
                if (t.text == "yield" || t.text == "await") unsupported(t.text);
                std::string id = identifier("an expression");
                if (is_op("(")) {
                    return Expr{Call{std::move(id), call_args()}};
                }
                return Expr{Name{std::move(id)}};
            }
            case Tok::Op: {
                if (t.text == "(") {
                    ++pos_;
                    if (is_op(")")) unsupported("tuple");
                    Expr inner = expression();
                    if (is_op(",")) unsupported("tuple");
                    expect_op(")");
                    return inner;
                }
                if (t.text == "[") unsupported("list literal");
                if (t.text == "{") unsupported("dict or set literal");
                check_unsupported_operator();
                fail("expected an expression" + found());
            }
            case Tok::End: fail("expected an expression, found end of line");
        }
        fail("expected an expression");
    }

    std::vector<Expr> call_args() {
        expect_op("(");
        std::vector<Expr> args;
        while (!is_op(")")) {
            if (at_end()) fail("unclosed '(' in call");
            if (peek().kind == Tok::Name && is_op("=", 1)) unsupported("keyword argument");
            if (is_op("*") || is_op("**")) unsupported("argument unpacking");
            args.push_back(expression());
            if (is_op(",")) {
                ++pos_;
                continue;
            }
            if (!is_op(")")) fail("expected ',' or ')' in call" + found());
        }
        expect_op(")");
        return args;
    }

    std::size_t pos_ = 0;

private:
    const LogicalLine& line_;
};

class Parser {
public:
    Parser(std::vector<LogicalLine> lines) : lines_(std::move(lines)) {}

    CodeAst run() {
        CodeAst ast;
        ast.statements = block(0, false);
        if (idx_ < lines_.size()) {
            throw SyntaxError(lines_[idx_].line, 1, "unexpected indent");
        }
        return ast;
    }

private:
    std::vector<Stmt> block(int level, bool in_function) {
        std::vector<Stmt> out;
        while (idx_ < lines_.size()) {
            const auto& ln = lines_[idx_];
            if (ln.level < level) break;
            if (ln.level > level) throw SyntaxError(ln.line, 1, "unexpected indent");
            out.push_back(statement(ln, level, in_function));
        }
        return out;
    }

    std::vector<Stmt> suite(const LogicalLine& header, int level, bool in_function) {
        if (idx_ >= lines_.size() || lines_[idx_].level <= level) {
            int line = idx_ < lines_.size() ? lines_[idx_].line : header.line + 1;
            throw SyntaxError(line, 1, "expected an indented block after line " + std::to_string(header.line));
        }
        if (lines_[idx_].level > level + 1) throw SyntaxError(lines_[idx_].line, 1, "unexpected indent");
        return block(level + 1, in_function);
    }

    Stmt statement(const LogicalLine& ln, int level, bool in_function) {
        ++idx_;
        LineParser p(ln);
        Stmt stmt;
        stmt.line = ln.line;
        stmt.depth = level;

        const Token& first = p.peek();
        if (first.kind == Tok::Name && kUnsupportedKeywords.count(first.text) > 0) {
            p.unsupported(first.text);
        }
        if (p.is_name("if") || p.is_name("while")) {
            bool is_if = p.next().text == "if";
            Expr cond = p.expression();
            p.expect_block_colon();
            auto body = suite(ln, level, in_function);
            if (is_if) {
                stmt.node = If{std::move(cond), std::move(body)};
                if (idx_ < lines_.size() && lines_[idx_].level == level) {
                    const auto& nxt = lines_[idx_].tokens;
                    if (!nxt.empty() && nxt[0].kind == Tok::Name && (nxt[0].text == "else" || nxt[0].text == "elif")) {
                        throw UnsupportedConstruct(lines_[idx_].line, nxt[0].text);
                    }
                }
            } else {
                stmt.node = While{std::move(cond), std::move(body)};
            }
            return stmt;
        }
        if (p.is_name("for")) {
            p.next();
            if (p.is_op("(") || p.is_op("[")) p.unsupported("tuple unpacking in for loop");
            std::string var = p.identifier("a loop variable");
            if (p.is_op(",")) p.unsupported("tuple unpacking in for loop");
            if (!p.is_name("in")) p.fail("expected 'in'" + p.found());
            p.next();
            if (!p.is_name("range") || !p.is_op("(", 1)) p.unsupported("for loop over a non-range iterable");
            p.next();
            p.expect_op("(");
            if (p.is_op(")")) p.fail("range expects an argument");
            Expr count = p.expression();
            if (p.is_op(",")) p.unsupported("range with start or step");
            p.expect_op(")");
            p.expect_block_colon();
            auto body = suite(ln, level, in_function);
            stmt.node = ForRange{std::move(var), std::move(count), std::move(body)};
            return stmt;
        }
        if (p.is_name("def")) {
            p.next();
            if (level > 0) p.unsupported("nested function definition");
            std::string name = p.identifier("a function name");
            p.expect_op("(");
            std::vector<std::string> params;
            while (!p.is_op(")")) {
                if (p.is_op("*") || p.is_op("**")) p.unsupported("variadic parameter");
                std::string param = p.identifier("a parameter name");
                if (std::find(params.begin(), params.end(), param) != params.end()) {
                    p.fail("duplicate parameter '" + param + "'");
                }
                params.push_back(std::move(param));
                if (p.is_op("=")) p.unsupported("default parameter value");
                if (p.is_op(":")) p.unsupported("type annotation");
                if (p.is_op(",")) {
                    p.next();
                    continue;
                }
                if (!p.is_op(")")) p.fail("expected ',' or ')' in parameter list" + p.found());
            }
            p.expect_op(")");
            if (p.is_op("->")) p.unsupported("return annotation");
            p.expect_block_colon();
            auto body = suite(ln, level, true);
            stmt.node = FuncDef{std::move(name), std::move(params), std::move(body)};
            return stmt;
        }
        if (p.is_name("return")) {
            p.next();
            if (!in_function) p.fail("'return' outside function");
            if (p.at_end()) p.unsupported("bare return");
            Expr value = p.expression();
            p.expect_end();
            stmt.node = Return{std::move(value)};
            return stmt;
        }
        if (first.kind == Tok::Name && kKeywords.count(first.text) == 0) {
            if (p.is_op("=", 1)) {
                std::string target = p.next().text;
                p.next();
                Expr value = p.expression();
                p.expect_end();
                stmt.node = Assign{std::move(target), std::move(value)};
                return stmt;
            }
            if (p.is_op("(", 1)) {
                std::string callee = p.next().text;
                auto args = p.call_args();
                if (!p.at_end()) {
                    p.check_unsupported_operator();
                    if (p.is_op("=")) p.fail("cannot assign to a function call");
                    if (p.compare_op() || p.is_op("+") || p.is_op("-") || p.is_op("*") || p.is_op("/")) {
                        p.pos_ = 0;
                        p.expression();
                        p.expect_end();
                        p.unsupported("expression statement");
                    }
                }
                p.expect_end();
                stmt.node = CallStmt{std::move(callee), std::move(args)};
                return stmt;
            }
            if (p.is_op(":", 1)) p.unsupported("annotated assignment");
            if (p.is_op(",", 1)) p.unsupported("tuple assignment");
            const auto& op = p.peek(1);
            if (op.kind == Tok::Op && (op.text == "+=" || op.text == "-=" || op.text == "*=" || op.text == "/=" ||
                                       op.text == "%=" || op.text == "//=")) {
                p.unsupported("augmented assignment");
            }
        }
        // Whatever remains is at best a bare expression.
        p.expression();
        if (p.is_op("=")) p.fail("cannot assign to expression");
        p.expect_end();
        p.unsupported("expression statement");
    }

    std::vector<LogicalLine> lines_;
    std::size_t idx_ = 0;
};

std::vector<LogicalLine> split_lines(std::string_view source, const ParseOptions& options) {
    std::vector<LogicalLine> out;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view text = source.substr(start, end - start);
        ++line_no;
        if (!text.empty() && text.back() == '\r') text.remove_suffix(1);

        std::size_t spaces = 0;
        while (spaces < text.size() && text[spaces] == ' ') ++spaces;
        if (spaces < text.size() && text[spaces] == '\t') {
            throw SyntaxError(line_no, static_cast<int>(spaces) + 1, "tab character is not allowed");
        }
        auto tokens = LineLexer(text, line_no).run();
        if (!tokens.empty()) {
            if (spaces % static_cast<std::size_t>(options.indent_unit) != 0) {
                throw SyntaxError(line_no, static_cast<int>(spaces) + 1,
                                  "indentation is not a multiple of " + std::to_string(options.indent_unit));
            }
            out.push_back({line_no, static_cast<int>(spaces) / options.indent_unit, std::move(tokens)});
        }
        if (end == source.size()) break;
        start = end + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const Expr& e) {
    return std::visit(overloaded{
                          [](const Compare&) { return 1; },
                          [](const BinOp& b) { return (b.op == BinaryOp::Add || b.op == BinaryOp::Sub) ? 2 : 3; },
                          [](const auto&) { return 4; },
                      },
                      e.node);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string join_args(const std::vector<Expr>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += expr_to_source(args[i]);
    }
    return out;
}

std::string operand(const Expr& e, int parent_prec, bool right) {
    std::string s = expr_to_source(e);
    int p = precedence(e);
    if (p < parent_prec || (right && p == parent_prec && p < 4)) return "(" + s + ")";
    return s;
}

void print_block(const std::vector<Stmt>& stmts, int indent_unit, std::string& out) {
    for (const auto& s : stmts) {
        out.append(static_cast<std::size_t>(s.depth * indent_unit), ' ');
        std::visit(overloaded{
                       [&](const Assign& a) { out += a.target + " = " + expr_to_source(a.value); },
                       [&](const If& i) { out += "if " + expr_to_source(i.cond) + ":"; },
                       [&](const While& w) { out += "while " + expr_to_source(w.cond) + ":"; },
                       [&](const ForRange& f) {
                           out += "for " + f.var + " in range(" + expr_to_source(f.count) + "):";
                       },
                       [&](const FuncDef& f) {
                           out += "def " + f.name + "(";
                           for (std::size_t k = 0; k < f.params.size(); ++k) {
                               if (k) out += ", ";
                               out += f.params[k];
                           }
                           out += "):";
                       },
                       [&](const CallStmt& c) { out += c.callee + "(" + join_args(c.args) + ")"; },
                       [&](const Return& r) { out += "return " + expr_to_source(r.value); },
                   },
                   s.node);
        out.push_back('\n');
        print_block(body_of(s), indent_unit, out);
    }
}

}  // namespace

CodeAst parse(std::string_view source, const ParseOptions& options) {
    if (options.indent_unit < 1) throw InvalidInput("indent unit must be positive");
    if (auto bad = invalid_utf8_at(source)) {
        int line = 1 + static_cast<int>(std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(*bad), '\n'));
        auto line_start = source.rfind('\n', *bad == 0 ? 0 : *bad - 1);
        int col = static_cast<int>(line_start == std::string_view::npos || *bad == 0 ? *bad + 1 : *bad - line_start);
        throw SyntaxError(line, col, "invalid UTF-8 byte sequence");
    }
    return Parser(split_lines(source, options)).run();
}

std::string expr_to_source(const Expr& expr) {
    return std::visit(overloaded{
                          [](const IntLit& i) { return std::to_string(i.value); },
                          [](const BoolLit& b) { return std::string(b.value ? "True" : "False"); },
                          [](const StrLit& s) { return quote(s.value); },
                          [](const Name& n) { return n.id; },
                          [](const BinOp& b) {
                              int p = (b.op == BinaryOp::Add || b.op == BinaryOp::Sub) ? 2 : 3;
                              return operand(*b.lhs, p, false) + " " + std::string(to_string(b.op)) + " " +
                                     operand(*b.rhs, p, true);
                          },
                          [](const Compare& c) {
                              return operand(*c.lhs, 2, false) + " " + std::string(to_string(c.op)) + " " +
                                     operand(*c.rhs, 2, false);
                          },
                          [](const Call& c) { return c.callee + "(" + join_args(c.args) + ")"; },
                      },
                      expr.node);
}

std::string pretty_print(const CodeAst& ast, int indent_unit) {
    std::string out;
    print_block(ast.statements, indent_unit, out);
    if (!out.empty()) out.pop_back();  // no trailing newline
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ast_hash(const CodeAst& ast) {
    static constexpr char digits[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(to_json(ast).dump());
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

nlohmann::json to_json(const Expr& expr) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const IntLit& i) { return json{{"kind", "IntLit"}, {"value", i.value}}; },
                          [](const BoolLit& b) { return json{{"kind", "BoolLit"}, {"value", b.value}}; },
                          [](const StrLit& s) { return json{{"kind", "StrLit"}, {"value", s.value}}; },
                          [](const Name& n) { return json{{"kind", "Name"}, {"id", n.id}}; },
                          [](const BinOp& b) {
                              return json{{"kind", "BinOp"},
                                          {"op", to_string(b.op)},
                                          {"lhs", to_json(*b.lhs)},
                                          {"rhs", to_json(*b.rhs)}};
                          },
                          [](const Compare& c) {
                              return json{{"kind", "Compare"},
                                          {"op", to_string(c.op)},
                                          {"lhs", to_json(*c.lhs)},
                                          {"rhs", to_json(*c.rhs)}};
                          },
                          [](const Call& c) {
                              json args = json::array();
                              for (const auto& a : c.args) args.push_back(to_json(a));
                              return json{{"kind", "Call"}, {"callee", c.callee}, {"args", args}};
                          },
                      },
                      expr.node);
}

nlohmann::json to_json(const Stmt& stmt) {
    using nlohmann::json;
    json j{{"kind", stmt_kind(stmt)}, {"line", stmt.line}, {"depth", stmt.depth}};
    auto body = [](const std::vector<Stmt>& stmts) {
        json arr = json::array();
        for (const auto& s : stmts) arr.push_back(to_json(s));
        return arr;
    };
    std::visit(overloaded{
                   [&](const Assign& a) {
                       j["target"] = a.target;
                       j["value"] = to_json(a.value);
                   },
                   [&](const If& i) {
                       j["cond"] = to_json(i.cond);
                       j["body"] = body(i.body);
                   },
                   [&](const While& w) {
                       j["cond"] = to_json(w.cond);
                       j["body"] = body(w.body);
                   },
                   [&](const ForRange& f) {
                       j["var"] = f.var;
                       j["count"] = to_json(f.count);
                       j["body"] = body(f.body);
                   },
                   [&](const FuncDef& f) {
                       j["name"] = f.name;
                       j["params"] = f.params;
                       j["body"] = body(f.body);
                   },
                   [&](const CallStmt& c) {
                       j["callee"] = c.callee;
                       json args = json::array();
                       for (const auto& a : c.args) args.push_back(to_json(a));
                       j["args"] = args;
                   },
                   [&](const Return& r) { j["value"] = to_json(r.value); },
               },
               stmt.node);
    return j;
}

nlohmann::json to_json(const CodeAst& ast) {
    nlohmann::json stmts = nlohmann::json::array();
    for (const auto& s : ast.statements) stmts.push_back(to_json(s));
    return {{"version", 1}, {"statements", stmts}};
}

}  // namespace codetoon
