#pragma once

#include "hoarith/program.hpp"
#include "hoarith/syntax.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hoarith {

/// Byte offsets [start, end) into the parsed text.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourceSpan span);
    [[nodiscard]] const SourceSpan& span() const noexcept { return span_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    SourceSpan span_;
};

Term parse_term(std::string_view text);
/// Precedence, tightest first: ~, /\, \/, ->, <->. Quantifier bodies extend
/// as far right as possible. "0" and "1" parse as Zero/One, other numerals
/// as literals.
Formula parse_formula(std::string_view text);
BoolExpr parse_bool(std::string_view text);
/// `;` associates to the right.
Program parse_program(std::string_view text);

namespace detail {

enum class Tok {
    Ident, Number, Plus, Star, LParen, RParen, Eq, Lt, Tilde, And, Or, Arrow, Iff, Dot, Assign, Semi,
    Comma, Colon, LBrace, RBrace, KwTrue, KwFalse, KwForall, KwExists, KwIf, KwThen, KwElse, KwFi,
    KwWhile, KwDo, KwOd, End
};

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t start;
    std::size_t end;
};

std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent parser over a token vector, shared by the formula,
/// program, schema and proof front ends.
class Parser {
public:
    Parser(std::string_view text, std::vector<Token> tokens);
    explicit Parser(std::string_view text);

    Term term();
    Formula formula();
    BoolExpr boolean();
    Program program();

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const;
    [[nodiscard]] bool at(Tok k) const { return peek().kind == k; }
    const Token& advance();
    const Token& expect(Tok k, const char* what);
    bool accept(Tok k);
    void expect_end();
    [[noreturn]] void fail(const std::string& message) const;
    [[noreturn]] void fail_at(const Token& t, const std::string& message) const;

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    void reset(std::size_t pos) noexcept { pos_ = pos; }

private:
    Term term_sum();
    Term term_product();
    Term term_atom();
    Formula f_iff();
    Formula f_implies();
    Formula f_or();
    Formula f_and();
    Formula f_unary();
    Formula f_atom();
    BoolExpr b_implies();
    BoolExpr b_unary();
    Program statement();

    std::string_view text_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail
}  // namespace hoarith
