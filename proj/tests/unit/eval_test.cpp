#include "hoarith/eval.hpp"
#include "hoarith/parse.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace hoarith;

namespace {

Formula F(const char* s) { return parse_formula(s); }

Budget q(unsigned n) {
    Budget b;
    b.q_bound = n;
    return b;
}

// Brute-force reference over mpz, written independently of the library.
// Unbounded quantifiers range over [0, range].
mpz_class ref_term(const Term& t, const std::map<Var, mpz_class>& env) {
    switch (t.kind()) {
        case TermKind::Zero: return 0;
        case TermKind::One: return 1;
        case TermKind::Literal: return t.value().to_mpz();
        case TermKind::Var: {
            auto it = env.find(t.name());
            return it == env.end() ? mpz_class(0) : it->second;
        }
        case TermKind::Sum: return ref_term(t.lhs(), env) + ref_term(t.rhs(), env);
        case TermKind::Product: return ref_term(t.lhs(), env) * ref_term(t.rhs(), env);
    }
    return 0;
}

bool ref_formula(const Formula& f, std::map<Var, mpz_class> env, unsigned range) {
    auto quant = [&](bool exists, const mpz_class& hi) {
        for (mpz_class i = 0; i < hi; ++i) {
            env[f.var()] = i;
            if (ref_formula(f.body(), env, range) == exists) return exists;
        }
        return !exists;
    };
    switch (f.kind()) {
        case FormulaKind::Eq: return ref_term(f.left(), env) == ref_term(f.right(), env);
        case FormulaKind::Lt: return ref_term(f.left(), env) < ref_term(f.right(), env);
        case FormulaKind::True: return true;
        case FormulaKind::False: return false;
        case FormulaKind::Not: return !ref_formula(f.sub(), env, range);
        case FormulaKind::And: return ref_formula(f.first(), env, range) && ref_formula(f.second(), env, range);
        case FormulaKind::Or: return ref_formula(f.first(), env, range) || ref_formula(f.second(), env, range);
        case FormulaKind::Implies: return !ref_formula(f.first(), env, range) || ref_formula(f.second(), env, range);
        case FormulaKind::Iff: return ref_formula(f.first(), env, range) == ref_formula(f.second(), env, range);
        case FormulaKind::BForall: return quant(false, ref_term(f.bound(), env));
        case FormulaKind::BExists: return quant(true, ref_term(f.bound(), env));
        case FormulaKind::Forall: return quant(false, mpz_class(range) + 1);
        case FormulaKind::Exists: return quant(true, mpz_class(range) + 1);
    }
    return false;
}

TEST(EvalTerm, Examples) {
    EXPECT_EQ(eval_term(parse_term("(1+1)*(1+1+1)"), {}), Nat{6u});
    EXPECT_EQ(eval_term(parse_term("x+1"), {{"x", Nat{0u}}}), Nat{1u});
    EXPECT_EQ(eval_term(parse_term("10 * x"), {{"x", Nat{10u}}}), Nat{100u});
    const Nat big = pow(Nat{10u}, 25);
    EXPECT_EQ(eval_term(parse_term("10 * x"), {{"x", big}}).to_mpz(), big.to_mpz() * 10);
}

TEST(EvalFormula, Examples) {
    EXPECT_TRUE(eval_formula(F("forall i < 3. i < 5"), {}).is_true());
    EXPECT_TRUE(eval_formula(F("exists y. y * y = 49"), {}, q(100)).is_true());
    const TriState u = eval_formula(F("forall y. y < y + 1"), {}, q(100));
    EXPECT_TRUE(u.is_unknown());
    EXPECT_FALSE(u.reason().empty());
    EXPECT_TRUE(eval_formula(F("exists y. y < 0"), {}, q(5)).is_false());
}

TEST(EvalFormula, NarrowingMakesSearchesExact) {
    // Atoms confine the witness to a finite range, so these are exact at tiny budgets.
    EXPECT_TRUE(eval_formula(F("exists y. y * y = 50"), {}, q(2)).is_false());
    EXPECT_TRUE(eval_formula(F("exists y. y + y = x"), {{"x", Nat{1000u}}}, q(2)).is_true());
    EXPECT_TRUE(eval_formula(F("forall y. ~(y * y = 50)"), {}, q(2)).is_true());
}

TEST(EvalFormula, AgreesWithBruteForceOnBoundedFormulas) {
    testgen::Rng rng(21);
    const std::vector<Var> vars{"x", "y"};
    const testgen::FormulaShape bounded{4, false, true};
    for (int k = 0; k < 400; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 4, bounded);
        const unsigned x = static_cast<unsigned>(testgen::pick(rng, 5));
        const unsigned y = static_cast<unsigned>(testgen::pick(rng, 5));
        const TriState got = eval_formula(f, {{"x", Nat{x}}, {"y", Nat{y}}});
        ASSERT_TRUE(got.is_exact()) << f;
        EXPECT_EQ(got.is_true(), ref_formula(f, {{"x", x}, {"y", y}}, 0)) << f;
    }
}

TEST(EvalFormula, SoundOnFiniteRangeFixtures) {
    // Every unbounded quantifier here has its semantics decided within [0, 12].
    const std::vector<const char*> fixtures = {
        "exists y. y * y = x",        "exists y. y + y = x /\\ y < 6", "forall y. x < y -> x < y + 1",
        "exists y. exists z. y + z = x /\\ y = z", "forall y. y < x -> exists z. z + y = x",
        "exists y. x = y * 3",        "~(exists y. y + 1 = x)",         "exists y. y < x /\\ x < y + 2",
    };
    for (const char* s : fixtures) {
        const Formula f = F(s);
        for (unsigned x = 0; x <= 10; ++x) {
            for (unsigned b : {0u, 1u, 3u, 12u, 40u}) {
                const TriState v = eval_formula(f, {{"x", Nat{x}}}, q(b));
                if (!v.is_exact()) continue;
                EXPECT_EQ(v.is_true(), ref_formula(f, {{"x", x}}, 40)) << s << " at x=" << x << " q=" << b;
            }
        }
    }
}

TEST(EvalFormula, BudgetMonotonicity) {
    testgen::Rng rng(22);
    const std::vector<Var> vars{"x"};
    for (int k = 0; k < 150; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 3);
        const VarAssignment v{{"x", Nat{testgen::pick(rng, 4)}}};
        std::optional<bool> seen;
        for (unsigned b : {0u, 1u, 2u, 4u, 8u}) {
            const TriState t = eval_formula(f, v, q(b));
            if (!t.is_exact()) continue;
            if (seen) {
                EXPECT_EQ(*seen, t.is_true()) << f;
            }
            seen = t.is_true();
        }
    }
}

TEST(EvalFormula, StrongKleene) {
    testgen::Rng rng(23);
    const std::vector<Var> vars{"x", "y"};
    for (int k = 0; k < 200; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 2);
        const Formula g = testgen::random_formula(rng, vars, 2);
        const VarAssignment v{{"x", Nat{testgen::pick(rng, 4)}}, {"y", Nat{testgen::pick(rng, 4)}}};
        const Budget b = q(3);
        const TriState a = eval_formula(f, v, b), c = eval_formula(g, v, b);
        EXPECT_EQ(eval_formula(Formula::neg(f), v, b), a.negated());
        const TriState both = eval_formula(Formula::conj(f, g), v, b);
        if (a.is_false() || c.is_false()) EXPECT_TRUE(both.is_false());
        else if (a.is_true() && c.is_true()) EXPECT_TRUE(both.is_true());
        else EXPECT_TRUE(both.is_unknown());
        const TriState either = eval_formula(Formula::disj(f, g), v, b);
        if (a.is_true() || c.is_true()) EXPECT_TRUE(either.is_true());
        else if (a.is_false() && c.is_false()) EXPECT_TRUE(either.is_false());
        else EXPECT_TRUE(either.is_unknown());
    }
}

TEST(FindWitnesses, Examples) {
    const auto w = find_witnesses(F("exists z. z + z = x"), {{"x", Nat{8u}}});
    ASSERT_TRUE(w);
    EXPECT_EQ(*w, (Witnesses{{"z", Nat{4u}}}));
    const auto none = find_witnesses(F("x < 3"), {{"x", Nat{1u}}});
    ASSERT_TRUE(none);
    EXPECT_TRUE(none->empty());
    EXPECT_FALSE(find_witnesses(F("exists z. z < 0"), {}));
    // u occurs on both sides, so nothing confines it.
    EXPECT_THROW(find_witnesses(F("exists z. forall u. u * u < u * u + z"), {}, q(2)), NotExactError);
}

TEST(FindWitnesses, LexicographicallyLeast) {
    const char* bodies[] = {"a + b = x", "a * b = x", "b < a /\\ a < x", "a + b + b = x"};
    for (const char* body : bodies) {
        const Formula f = Formula::exists_all({"a", "b"}, F(body));
        for (unsigned x = 0; x <= 8; ++x) {
            const VarAssignment v{{"x", Nat{x}}};
            const auto w = find_witnesses(f, v, q(10));
            std::optional<std::pair<unsigned, unsigned>> least;
            for (unsigned a = 0; a <= 10 && !least; ++a)
                for (unsigned b = 0; b <= 10 && !least; ++b)
                    if (ref_formula(F(body), {{"x", x}, {"a", a}, {"b", b}}, 0)) least = {a, b};
            ASSERT_EQ(w.has_value(), least.has_value()) << body << " x=" << x;
            if (!w) continue;
            EXPECT_EQ((*w)[0].second, Nat{least->first}) << body << " x=" << x;
            EXPECT_EQ((*w)[1].second, Nat{least->second}) << body << " x=" << x;
        }
    }
}

TEST(TriState, Printing) {
    EXPECT_EQ(TriState::yes().to_string(), "true");
    EXPECT_EQ(TriState::no().negated(), TriState::yes());
    EXPECT_TRUE(TriState::unknown("r").negated().is_unknown());
}

}  // namespace
