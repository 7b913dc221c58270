#include "hoarith/parse.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hoarith;

namespace {

TEST(ParseFormula, Examples) {
    const Formula f = parse_formula("exists y. y*y = 49");
    ASSERT_EQ(f.kind(), FormulaKind::Exists);
    EXPECT_EQ(f.var(), "y");
    ASSERT_EQ(f.body().kind(), FormulaKind::Eq);
    EXPECT_EQ(f.body().left().kind(), TermKind::Product);
    EXPECT_EQ(f.body().right().kind(), TermKind::Literal);
    EXPECT_EQ(f.body().right().value(), Nat{49u});

    EXPECT_EQ(parse_formula("forall i<x. i < x").kind(), FormulaKind::BForall);

    const Formula p = parse_formula("p = 0 /\\ q = 0 -> r = 0");
    ASSERT_EQ(p.kind(), FormulaKind::Implies);
    EXPECT_EQ(p.first().kind(), FormulaKind::And);
}

TEST(ParseFormula, Precedence) {
    auto shape = [](const char* s) { return to_string(parse_formula(s)); };
    EXPECT_EQ(parse_formula("~a = b /\\ c = d").kind(), FormulaKind::And);
    EXPECT_EQ(parse_formula("a = b \\/ c = d /\\ e = f").kind(), FormulaKind::Or);
    EXPECT_EQ(parse_formula("a = b -> c = d \\/ e = f").kind(), FormulaKind::Implies);
    EXPECT_EQ(parse_formula("a = b <-> c = d -> e = f").kind(), FormulaKind::Iff);
    // Quantifier bodies extend to the right.
    EXPECT_EQ(parse_formula("exists x. x = 0 /\\ y = 1").kind(), FormulaKind::Exists);
    EXPECT_EQ(parse_formula("(exists x. x = 0) /\\ y = 1").kind(), FormulaKind::And);
    // + and * are left-associative, * binds tighter.
    const Term t = parse_term("a + b * c + d");
    ASSERT_EQ(t.kind(), TermKind::Sum);
    EXPECT_EQ(t.lhs().kind(), TermKind::Sum);
    EXPECT_EQ(t.lhs().rhs().kind(), TermKind::Product);
    EXPECT_EQ(shape("x = 1"), "x = 1");
}

TEST(ParseFormula, NumeralsAndIdentifiers) {
    EXPECT_EQ(parse_term("0").kind(), TermKind::Zero);
    EXPECT_EQ(parse_term("1").kind(), TermKind::One);
    EXPECT_EQ(parse_term("2").kind(), TermKind::Literal);
    EXPECT_EQ(parse_term("123456789012345678901234567890").value().to_string(), "123456789012345678901234567890");
    EXPECT_EQ(parse_term("x''").name(), "x''");
    EXPECT_EQ(parse_term("acc_1").name(), "acc_1");
}

TEST(ParseProgram, Examples) {
    const Program p = parse_program("y:=0; while y<x do y:=y+1 od");
    ASSERT_EQ(p.kind(), ProgramKind::Seq);
    EXPECT_EQ(p.first().kind(), ProgramKind::Assign);
    EXPECT_EQ(p.second().kind(), ProgramKind::While);
    EXPECT_EQ(parse_program("if x<1 then y:=0 else y:=1 fi").kind(), ProgramKind::If);
    const Program w = parse_program("while ~(x<1) do x:=x od");
    ASSERT_EQ(w.kind(), ProgramKind::While);
    EXPECT_EQ(w.guard().kind(), BoolKind::Not);
    const Program r = parse_program("a:=1; b:=2; c:=3");
    EXPECT_EQ(r.second().kind(), ProgramKind::Seq);
}

TEST(RoundTrip, RandomFormulas) {
    testgen::Rng rng(41);
    const std::vector<Var> vars{"x", "y", "z'"};
    for (int k = 0; k < 500; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 4);
        const std::string text = to_string(f);
        const Formula g = parse_formula(text);
        EXPECT_TRUE(alpha_equivalent(f, g)) << text << " reparsed as " << g;
    }
}

TEST(RoundTrip, RandomPrograms) {
    testgen::Rng rng(42);
    const std::vector<Var> vars{"x", "y", "z"};
    for (int k = 0; k < 500; ++k) {
        const Program p = testgen::random_program(rng, vars, 4);
        const std::string text = to_string(p);
        const Program q = parse_program(text);
        EXPECT_TRUE(programs_equal(right_associate(p), q)) << text << " reparsed as " << q;
        EXPECT_EQ(to_string(q), text);
    }
}

TEST(ParseErrors, SpansLieInsideInput) {
    const std::vector<std::string> bad_formulas = {
        "x < ", "(x = 1", "forall . x = 1", "exists x x = 1", "x = 1 /\\", "x ++ 1", "x = 1)", "#", "forall i < i. true",
        "",
    };
    for (const std::string& s : bad_formulas) {
        try {
            parse_formula(s);
            ADD_FAILURE() << "accepted: " << s;
        } catch (const ParseError& e) {
            EXPECT_LE(e.span().start, e.span().end) << s;
            EXPECT_LE(e.span().end, s.size()) << s;
            EXPECT_FALSE(e.message().empty());
        }
    }
    const std::vector<std::string> bad_programs = {
        "x := ", "if x < 1 then x := 1 fi", "while x do x := 1 od", "x := 1;", "x = 1", "while x < 1 do x := 1",
    };
    for (const std::string& s : bad_programs) {
        try {
            parse_program(s);
            ADD_FAILURE() << "accepted: " << s;
        } catch (const ParseError& e) {
            EXPECT_LE(e.span().start, e.span().end) << s;
            EXPECT_LE(e.span().end, s.size()) << s;
        }
    }
}

TEST(ParseErrors, SpanPointsAtOffendingToken) {
    try {
        parse_formula("x = 1 /\\ ) ");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.span().start, 9u);
        EXPECT_EQ(e.span().end, 10u);
    }
}

}  // namespace
