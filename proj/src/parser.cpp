// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/parser.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "iwe/errors.hpp"

namespace iwe {

namespace {

enum class Tok { Number, Ident, Keyword, Symbol, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const std::unordered_set<std::string> keywords = {"skip", "if",  "else", "while", "inf", "sum",
                                                  "abs",  "sign", "min", "max",   "mod", "pow",
                                                  "and",  "or",  "not",  "true",  "false"};

// Longest match first.
const char* const symbols[] = {":=", "==", "!=", "<>", "<=", ">=", "&&", "||", ";", "{", "}", "(", ")",
                               "[",  "]",  ",",  "+",  "-",  "*",  "/",  "^",  "=", "<", ">", "!"};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int l = line;
        const int cl = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                }
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
                ++j;
            }
            std::string word(src.substr(i, j - i));
            const Tok kind = keywords.contains(word) ? Tok::Keyword : Tok::Ident;
            out.push_back({kind, std::move(word), l, cl});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* sym : symbols) {
            const std::string_view s(sym);
            if (src.substr(i, s.size()) == s) {
                out.push_back({Tok::Symbol, std::string(s), l, cl});
                advance(s.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program program() {
        Program p = sequence();
        expect_end();
        return p;
    }

    Expr expression_only() {
        Expr e = expr();
        expect_end();
        return e;
    }

    Pred predicate_only() {
        Pred p = pred();
        expect_end();
        return p;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

    bool is(const char* text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return (t.kind == Tok::Symbol || t.kind == Tok::Keyword) && t.text == text;
    }

    bool accept(const char* text) {
        if (is(text)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) {
            return "end of input";
        }
        return "'" + t.text + "'";
    }

    void expect(const char* text) {
        if (!accept(text)) {
            fail(std::string("expected '") + text + "', found " + describe(peek()), peek());
        }
    }

    void expect_end() {
        if (peek().kind != Tok::End) {
            fail("unexpected " + describe(peek()), peek());
        }
    }

    // --- programs -----------------------------------------------------------

    Program sequence() {
        std::vector<Program> parts;
        parts.push_back(statement());
        while (accept(";")) {
            if (is("}") || peek().kind == Tok::End) {
                break;
            }
            parts.push_back(statement());
        }
        return stmt::sequence(parts);
    }

    Program block() {
        expect("{");
        if (accept("}")) {
            return stmt::skip();
        }
        Program p = sequence();
        expect("}");
        return p;
    }

    static void check_program_expr(const Expr& e, const Token& at, const char* where) {
        if (contains_series(e)) {
            throw ParseError(std::string("series are not allowed in ") + where, at.line, at.column);
        }
        if (contains_inf(e)) {
            throw ParseError(std::string("'inf' is not allowed in ") + where, at.line, at.column);
        }
    }

    Expr guard() {
        expect("(");
        const Token start = peek();
        const std::size_t save = pos_;
        Expr g;
        try {
            Pred p = pred();
            if (!is(")")) {
                throw ParseError("not a predicate", start.line, start.column);
            }
            g = ex::indicator(p);
        } catch (const ParseError&) {
            pos_ = save;
            g = expr();
        }
        expect(")");
        check_program_expr(g, start, "guards");
        return g;
    }

    Program statement() {
        const Token& t = peek();
        if (accept("skip")) {
            return stmt::skip();
        }
        if (is("{")) {
            return block();
        }
        if (accept("if")) {
            Expr g = guard();
            Program then_branch = block();
            Program else_branch = stmt::skip();
            if (accept("else")) {
                else_branch = is("if") ? statement() : block();
            }
            return stmt::ite(g, then_branch, else_branch);
        }
        if (accept("while")) {
            Expr g = guard();
            return stmt::loop(g, block());
        }
        if (t.kind == Tok::Ident) {
            const Token name = t;
            ++pos_;
            expect(":=");
            const Token at = peek();
            Expr rhs = expr();
            check_program_expr(rhs, at, "assignments");
            return stmt::assign(name.text, rhs);
        }
        fail("expected a statement, found " + describe(t), t);
    }

    // --- expressions --------------------------------------------------------

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept("+")) {
                lhs = ex::add(lhs, term());
            } else if (accept("-")) {
                lhs = ex::sub(lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept("*")) {
                lhs = ex::mul(lhs, unary());
            } else if (accept("/")) {
                lhs = ex::div(lhs, unary());
            } else if (accept("mod")) {
                lhs = ex::mod(lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (accept("-")) {
            return ex::neg(unary());
        }
        if (accept("+")) {
            return unary();
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept("^")) {
            return ex::pow(base, unary());
        }
        return base;
    }

    std::vector<Expr> call_args(std::size_t n) {
        expect("(");
        std::vector<Expr> args;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) {
                expect(",");
            }
            args.push_back(expr());
        }
        expect(")");
        return args;
    }

    Expr atom() {
        const Token t = peek();
        if (t.kind == Tok::Number) {
            ++pos_;
            return ex::constant(parse_rational(t.text));
        }
        if (t.kind == Tok::Ident) {
            ++pos_;
            return ex::var(t.text);
        }
        if (accept("inf")) {
            return ex::inf();
        }
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (accept("[")) {
            Pred p = pred();
            expect("]");
            return ex::indicator(p);
        }
        if (accept("abs")) {
            return ex::abs(call_args(1)[0]);
        }
        if (accept("sign")) {
            return ex::sign(call_args(1)[0]);
        }
        if (accept("min")) {
            auto a = call_args(2);
            return ex::min(a[0], a[1]);
        }
        if (accept("max")) {
            auto a = call_args(2);
            return ex::max(a[0], a[1]);
        }
        if (accept("pow")) {
            auto a = call_args(2);
            return ex::pow(a[0], a[1]);
        }
        if (accept("sum")) {
            return series(t);
        }
        fail("expected an expression, found " + describe(t), t);
    }

    Expr series(const Token& at) {
        expect("(");
        const Token idx = peek();
        if (idx.kind != Tok::Ident) {
            fail("expected the series index, found " + describe(idx), idx);
        }
        ++pos_;
        expect(",");
        const Token lo_tok = peek();
        Expr lo = expr();
        expect(",");
        const Token hi_tok = peek();
        Expr hi;
        if (is("inf") && is(",", 1)) {
            ++pos_;
        } else {
            hi = expr();
        }
        expect(",");
        Expr body = expr();
        expect(")");
        if (contains_inf(lo) || contains_series(lo)) {
            fail("malformed series lower bound", lo_tok);
        }
        if (hi && (contains_inf(hi) || contains_series(hi))) {
            fail("malformed series upper bound", hi_tok);
        }
        (void)at;
        return ex::sum(idx.text, lo, hi, body);
    }

    // --- predicates ---------------------------------------------------------

    Pred pred() {
        Pred lhs = pred_conj();
        while (accept("||") || accept("or")) {
            lhs = pr::disj(lhs, pred_conj());
        }
        return lhs;
    }

    Pred pred_conj() {
        Pred lhs = pred_not();
        while (accept("&&") || accept("and")) {
            lhs = pr::conj(lhs, pred_not());
        }
        return lhs;
    }

    Pred pred_not() {
        if (accept("!") || accept("not")) {
            return pr::negate(pred_not());
        }
        return pred_atom();
    }

    std::optional<CmpOp> relop() {
        static const std::pair<const char*, CmpOp> table[] = {
            {"==", CmpOp::Eq}, {"=", CmpOp::Eq},  {"!=", CmpOp::Ne}, {"<>", CmpOp::Ne},
            {"<=", CmpOp::Le}, {"<", CmpOp::Lt}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
        for (const auto& [text, op] : table) {
            if (accept(text)) {
                return op;
            }
        }
        return std::nullopt;
    }

    Pred pred_atom() {
        if (accept("true")) {
            return pr::truth(true);
        }
        if (accept("false")) {
            return pr::truth(false);
        }
        if (is("(")) {
            // Either a parenthesised predicate or the start of an arithmetic operand.
            const std::size_t save = pos_;
            try {
                ++pos_;
                Pred p = pred();
                expect(")");
                return p;
            } catch (const ParseError&) {
                pos_ = save;
            }
        }
        const Token at = peek();
        Expr lhs = expr();
        const auto op = relop();
        if (!op) {
            fail("expected a comparison operator, found " + describe(peek()), peek());
        }
        Expr rhs = expr();
        if (contains_series(lhs) || contains_series(rhs) || contains_inf(lhs) || contains_inf(rhs)) {
            fail("comparison operands must be series-free and finite", at);
        }
        return pr::cmp(*op, lhs, rhs);
    }
};

} // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

Expr parse_expression(std::string_view text) { return Parser(text).expression_only(); }

Pred parse_predicate(std::string_view text) { return Parser(text).predicate_only(); }

} // namespace iwe
