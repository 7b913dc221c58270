#include "hoarith/parse.hpp"

#include <cctype>
#include <unordered_map>

namespace hoarith {

ParseError::ParseError(const std::string& message, SourceSpan span)
    : std::runtime_error("parse error at " + std::to_string(span.start) + ".." + std::to_string(span.end) + ": " +
                         message),
      message_(message),
      span_(span) {}

namespace detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::unordered_map<std::string_view, Tok>& keywords() {
    static const std::unordered_map<std::string_view, Tok> kw = {
        {"true", Tok::KwTrue},   {"false", Tok::KwFalse}, {"forall", Tok::KwForall}, {"exists", Tok::KwExists},
        {"if", Tok::KwIf},       {"then", Tok::KwThen},   {"else", Tok::KwElse},     {"fi", Tok::KwFi},
        {"while", Tok::KwWhile}, {"do", Tok::KwDo},       {"od", Tok::KwOd},
    };
    return kw;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto emit = [&](Tok k, std::size_t len) {
        out.push_back(Token{k, text.substr(i, len), i, i + len});
        i += len;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < text.size() && ident_char(text[j])) ++j;
            while (j < text.size() && text[j] == '\'') ++j;
            const auto word = text.substr(i, j - i);
            auto it = keywords().find(word);
            emit(it == keywords().end() ? Tok::Ident : it->second, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && ident_char(text[j])) {
                throw ParseError("malformed number", SourceSpan{i, j + 1});
            }
            emit(Tok::Number, j - i);
            continue;
        }
        const auto rest = text.substr(i);
        if (rest.starts_with("<->")) { emit(Tok::Iff, 3); continue; }
        if (rest.starts_with("->")) { emit(Tok::Arrow, 2); continue; }
        if (rest.starts_with("/\\")) { emit(Tok::And, 2); continue; }
        if (rest.starts_with("\\/")) { emit(Tok::Or, 2); continue; }
        if (rest.starts_with(":=")) { emit(Tok::Assign, 2); continue; }
        switch (c) {
            case '+': emit(Tok::Plus, 1); continue;
            case '*': emit(Tok::Star, 1); continue;
            case '(': emit(Tok::LParen, 1); continue;
            case ')': emit(Tok::RParen, 1); continue;
            case '=': emit(Tok::Eq, 1); continue;
            case '<': emit(Tok::Lt, 1); continue;
            case '~': emit(Tok::Tilde, 1); continue;
            case '.': emit(Tok::Dot, 1); continue;
            case ';': emit(Tok::Semi, 1); continue;
            case ',': emit(Tok::Comma, 1); continue;
            case ':': emit(Tok::Colon, 1); continue;
            case '{': emit(Tok::LBrace, 1); continue;
            case '}': emit(Tok::RBrace, 1); continue;
            default: break;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", SourceSpan{i, i + 1});
    }
    out.push_back(Token{Tok::End, text.substr(text.size()), text.size(), text.size()});
    return out;
}

Parser::Parser(std::string_view text, std::vector<Token> tokens) : text_(text), toks_(std::move(tokens)) {}
Parser::Parser(std::string_view text) : Parser(text, tokenize(text)) {}

const Token& Parser::peek(std::size_t ahead) const {
    const std::size_t idx = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[idx];
}

const Token& Parser::advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
}

bool Parser::accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
}

const Token& Parser::expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return advance();
}

void Parser::expect_end() {
    if (!at(Tok::End)) fail("unexpected trailing input");
}

void Parser::fail(const std::string& message) const { fail_at(peek(), message); }

void Parser::fail_at(const Token& t, const std::string& message) const {
    std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
    const std::size_t end = t.kind == Tok::End ? t.start : t.end;
    throw ParseError(message + ", found " + found, SourceSpan{std::min(t.start, text_.size()), end});
}

// --- terms -----------------------------------------------------------------------

Term Parser::term() { return term_sum(); }

Term Parser::term_sum() {
    Term acc = term_product();
    while (accept(Tok::Plus)) acc = Term::sum(acc, term_product());
    return acc;
}

Term Parser::term_product() {
    Term acc = term_atom();
    while (accept(Tok::Star)) acc = Term::product(acc, term_atom());
    return acc;
}

Term Parser::term_atom() {
    const Token& t = peek();
    switch (t.kind) {
        case Tok::Number: {
            advance();
            if (t.text == "0") return Term::zero();
            if (t.text == "1") return Term::one();
            return Term::literal(Nat::parse(t.text));
        }
        case Tok::Ident: advance(); return Term::var(std::string(t.text));
        case Tok::LParen: {
            advance();
            Term inner = term();
            expect(Tok::RParen, "')'");
            return inner;
        }
        default: fail("expected a term");
    }
}

// --- formulas ---------------------------------------------------------------------

Formula Parser::formula() { return f_iff(); }

Formula Parser::f_iff() {
    Formula lhs = f_implies();
    if (accept(Tok::Iff)) return Formula::iff(lhs, f_iff());
    return lhs;
}

Formula Parser::f_implies() {
    Formula lhs = f_or();
    if (accept(Tok::Arrow)) return Formula::implies(lhs, f_implies());
    return lhs;
}

Formula Parser::f_or() {
    Formula acc = f_and();
    while (accept(Tok::Or)) acc = Formula::disj(acc, f_and());
    return acc;
}

Formula Parser::f_and() {
    Formula acc = f_unary();
    while (accept(Tok::And)) acc = Formula::conj(acc, f_unary());
    return acc;
}

Formula Parser::f_unary() {
    if (accept(Tok::Tilde)) return Formula::neg(f_unary());
    if (at(Tok::KwForall) || at(Tok::KwExists)) {
        const bool universal = advance().kind == Tok::KwForall;
        const Token& v = expect(Tok::Ident, "a variable after the quantifier");
        Var x(v.text);
        std::optional<Term> bound;
        if (accept(Tok::Lt)) {
            const Token& bt = peek();
            bound = term();
            if (occurs_in(x, *bound)) fail_at(bt, "bound term mentions the quantified variable " + x);
        }
        expect(Tok::Dot, "'.' after the quantified variable");
        Formula body = f_iff();
        if (bound) return universal ? Formula::bforall(x, *bound, body) : Formula::bexists(x, *bound, body);
        return universal ? Formula::forall(x, body) : Formula::exists(x, body);
    }
    return f_atom();
}

Formula Parser::f_atom() {
    if (accept(Tok::KwTrue)) return Formula::top();
    if (accept(Tok::KwFalse)) return Formula::bottom();
    if (at(Tok::LParen)) {
        // Either a parenthesized term starting a comparison, or a
        // parenthesized formula. Try the comparison first.
        const std::size_t save = pos_;
        try {
            Term lhs = term();
            if (at(Tok::Eq) || at(Tok::Lt)) {
                const bool is_eq = advance().kind == Tok::Eq;
                Term rhs = term();
                return is_eq ? Formula::eq(lhs, rhs) : Formula::lt(lhs, rhs);
            }
        } catch (const ParseError&) {
        }
        reset(save);
        advance();
        Formula inner = formula();
        expect(Tok::RParen, "')'");
        return inner;
    }
    Term lhs = term();
    if (accept(Tok::Eq)) return Formula::eq(lhs, term());
    if (accept(Tok::Lt)) return Formula::lt(lhs, term());
    fail("expected '=' or '<'");
}

// --- guards and programs -------------------------------------------------------------

BoolExpr Parser::boolean() { return b_implies(); }

BoolExpr Parser::b_implies() {
    BoolExpr lhs = b_unary();
    if (accept(Tok::Arrow)) return BoolExpr::implies(lhs, b_implies());
    return lhs;
}

BoolExpr Parser::b_unary() {
    if (accept(Tok::Tilde)) return BoolExpr::negate(b_unary());
    if (at(Tok::LParen)) {
        const std::size_t save = pos_;
        try {
            Term lhs = term();
            if (accept(Tok::Lt)) return BoolExpr::less(lhs, term());
        } catch (const ParseError&) {
        }
        reset(save);
        advance();
        BoolExpr inner = boolean();
        expect(Tok::RParen, "')'");
        return inner;
    }
    Term lhs = term();
    expect(Tok::Lt, "'<' in a guard");
    return BoolExpr::less(lhs, term());
}

Program Parser::program() {
    Program first = statement();
    if (accept(Tok::Semi)) return Program::seq(first, program());
    return first;
}

Program Parser::statement() {
    if (accept(Tok::KwIf)) {
        BoolExpr b = boolean();
        expect(Tok::KwThen, "'then'");
        Program s1 = program();
        expect(Tok::KwElse, "'else'");
        Program s2 = program();
        expect(Tok::KwFi, "'fi'");
        return Program::if_then_else(b, s1, s2);
    }
    if (accept(Tok::KwWhile)) {
        BoolExpr b = boolean();
        expect(Tok::KwDo, "'do'");
        Program body = program();
        expect(Tok::KwOd, "'od'");
        return Program::while_do(b, body);
    }
    const Token& x = expect(Tok::Ident, "a statement");
    expect(Tok::Assign, "':='");
    return Program::assign(std::string(x.text), term());
}

}  // namespace detail

Term parse_term(std::string_view text) {
    detail::Parser p(text);
    Term t = p.term();
    p.expect_end();
    return t;
}

Formula parse_formula(std::string_view text) {
    detail::Parser p(text);
    Formula f = p.formula();
    p.expect_end();
    return f;
}

BoolExpr parse_bool(std::string_view text) {
    detail::Parser p(text);
    BoolExpr b = p.boolean();
    p.expect_end();
    return b;
}

Program parse_program(std::string_view text) {
    detail::Parser p(text);
    Program s = p.program();
    p.expect_end();
    return s;
}

}  // namespace hoarith
