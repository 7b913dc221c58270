#include "hoarith/eval.hpp"
#include "hoarith/hierarchy.hpp"
#include "hoarith/parse.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hoarith;

namespace {

Formula F(const char* s) { return parse_formula(s); }

HierarchyLevel L(HKind k, unsigned n, bool strict, bool both = false) { return {k, n, strict, both}; }

TEST(Classify, Examples) {
    EXPECT_EQ(classify(F("exists y. y+y = x")), L(HKind::Sigma, 1, true));
    EXPECT_EQ(classify(F("forall x. exists y. x < y")), L(HKind::Pi, 2, true));
    EXPECT_EQ(classify(F("(exists i. i = x) /\\ (exists j. j < x)")), L(HKind::Sigma, 1, false));
    EXPECT_EQ(classify(F("forall i < x. i < x")), L(HKind::Sigma, 0, true, true));
    EXPECT_EQ(classify(F("exists y. y = 0")).to_string(), "Sigma_1 strict");
    EXPECT_EQ(classify(F("x < 1")).to_string(), "Sigma_0 (Delta_0) strict");
}

TEST(Classify, Duality) {
    testgen::Rng rng(51);
    const std::vector<Var> vars{"x", "y"};
    for (int k = 0; k < 300; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 4);
        const HierarchyLevel a = classify(Formula::neg(f));
        const HierarchyLevel b = dual(classify(f));
        EXPECT_EQ(a.kind, b.kind) << f;
        EXPECT_EQ(a.n, b.n) << f;
        EXPECT_EQ(a.both, b.both) << f;
    }
}

TEST(Classify, WrappingRaisesLevelByAtMostOne) {
    testgen::Rng rng(52);
    const std::vector<Var> vars{"x", "y"};
    for (int k = 0; k < 300; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 4);
        const HierarchyLevel l = classify(f);
        for (const Formula& g : {Formula::exists("fresh", f), Formula::forall("fresh", f)}) {
            const HierarchyLevel m = classify(g);
            EXPECT_GE(m.n, l.n) << g;
            EXPECT_LE(m.n, l.n + 1) << g;
        }
    }
}

TEST(Nnf, PushesNegations) {
    const Formula f = nnf(F("~(forall x. x < y -> exists z. ~(z = x))"));
    EXPECT_TRUE(alpha_equivalent(f, F("exists x. x < y /\\ forall z. z = x")));
    EXPECT_TRUE(alpha_equivalent(nnf(F("~true")), F("false")));
    EXPECT_TRUE(alpha_equivalent(nnf(F("~(x < 1)")), F("~(x < 1)")));
    EXPECT_TRUE(alpha_equivalent(desugar(F("a = b <-> c = d")),
                                 F("(~(a = b) \\/ c = d) /\\ (~(c = d) \\/ a = b)")));
}

TEST(Prenexify, Examples) {
    EXPECT_TRUE(alpha_equivalent(prenexify(F("exists y. y = x")), F("exists y. y = x")));
    const Formula two = prenexify(F("(exists i. i = x) /\\ (exists j. j < x)"));
    EXPECT_EQ(classify(two), L(HKind::Sigma, 1, true));
    for (unsigned x = 0; x <= 20; ++x) {
        const VarAssignment v{{"x", Nat{x}}};
        EXPECT_EQ(eval_formula(two, v), eval_formula(F("(exists i. i = x) /\\ (exists j. j < x)"), v));
    }
    EXPECT_TRUE(alpha_equivalent(prenexify(F("forall u. (exists v. v = u)")), F("forall u. exists v. v = u")));
    EXPECT_EQ(classify(prenexify(F("forall i < x. exists y. i + y = x"))), L(HKind::Sigma, 1, true));
}

TEST(Prenexify, StrictAtSameLevelAndIdempotent) {
    testgen::Rng rng(53);
    const std::vector<Var> vars{"x", "y"};
    for (int k = 0; k < 300; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 4);
        const HierarchyLevel l = classify(f);
        const Formula g = prenexify(f);
        const HierarchyLevel m = classify(g);
        EXPECT_TRUE(m.strict) << f << " => " << g;
        EXPECT_EQ(m.n, l.n) << f << " => " << g;
        if (!l.both) {
            EXPECT_EQ(m.kind, l.kind) << f << " => " << g;
        }
        EXPECT_TRUE(alpha_equivalent(prenexify(g), g)) << g;
    }
}

TEST(Prenexify, NeverFlipsVerdicts) {
    testgen::Rng rng(54);
    const std::vector<Var> vars{"x", "y"};
    Budget b;
    b.q_bound = 6;
    for (int k = 0; k < 150; ++k) {
        const Formula f = testgen::random_formula(rng, vars, 3);
        const Formula g = prenexify(f);
        for (int s = 0; s < 10; ++s) {
            const VarAssignment v{{"x", Nat{testgen::pick(rng, 5)}}, {"y", Nat{testgen::pick(rng, 5)}}};
            const TriState a = eval_formula(f, v, b), c = eval_formula(g, v, b);
            if (a.is_exact() && c.is_exact()) {
                EXPECT_EQ(a, c) << f << " => " << g;
            }
            if (is_level_zero(f)) {
                EXPECT_TRUE(a.is_exact() && a == c) << f;
            }
        }
    }
}

TEST(LevelZero, Detection) {
    EXPECT_TRUE(is_level_zero(F("forall i < x. exists j < i + 1. j = i")));
    EXPECT_FALSE(is_level_zero(F("x = 0 /\\ exists j. j = x")));
}

}  // namespace
