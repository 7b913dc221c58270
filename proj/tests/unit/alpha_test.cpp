#include "hoarith/alpha.hpp"
#include "hoarith/hierarchy.hpp"
#include "hoarith/parse.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hoarith;

namespace {

Program P(const char* s) { return parse_program(s); }
Formula F(const char* s) { return parse_formula(s); }

const char* kLoop = "y := 0; while y < x do y := y + 1 od";

TEST(EncodeAlpha, AssignmentClauses) {
    EXPECT_TRUE(alpha_equivalent(encode_alpha(P("x := x")), F("x' = x")));
    EXPECT_TRUE(alpha_equivalent(encode_alpha(P("x := 0")), F("x' = 0")));
    const AlphaSignature sig = alpha_signature(P("a := b"));
    EXPECT_EQ(sig.inputs, (std::vector<Var>{"a", "b"}));
    EXPECT_EQ(sig.outputs, (std::vector<Var>{"a'", "b'"}));
    EXPECT_TRUE(alpha_equivalent(encode_alpha(P("a := b")), F("a' = b /\\ b' = b")));
}

TEST(EncodeAlpha, CountingLoopAgainstRuns) {
    const Program p = P(kLoop);
    EXPECT_FALSE(classify(encode_alpha(p)).strict);
    for (unsigned x = 0; x <= 5; ++x) {
        for (unsigned y0 = 0; y0 <= 2; ++y0) {
            const ProgState in({"y", "x"}, {Nat{y0}, Nat{x}});
            const auto inst = instantiate_alpha(p, in, 1000);
            ASSERT_TRUE(inst);
            EXPECT_TRUE(free_vars(*inst).empty());
            EXPECT_TRUE(is_level_zero(*inst));
            EXPECT_TRUE(eval_formula(*inst, {}).is_true());
        }
    }
    Budget b;
    b.q_bound = 2;
    EXPECT_FALSE(eval_formula(alpha_at(p, {Nat{4u}, Nat{2u}}, {Nat{3u}, Nat{2u}}), {}, b).is_true());
}

TEST(EncodeAlpha, GeneralizedSigma1ForRandomPrograms) {
    testgen::Rng rng(61);
    const std::vector<Var> vars{"x", "y", "z"};
    for (int k = 0; k < 100; ++k) {
        const Program p = testgen::random_program(rng, vars, 3);
        const HierarchyLevel l = classify(encode_alpha(p));
        EXPECT_TRUE(l.n <= 1 && (l.kind == HKind::Sigma || l.both)) << p << " : " << l.to_string();
    }
}

TEST(InstantiateAlpha, Examples) {
    const auto one = instantiate_alpha(P("x := x"), ProgState({"x"}, {Nat{5u}}), 10);
    ASSERT_TRUE(one);
    EXPECT_TRUE(alpha_equivalent(*one, F("5 = 5")));
    EXPECT_FALSE(instantiate_alpha(P("while x < x + 1 do x := x od"), ProgState({"x"}, {Nat{0u}}), 100));
}

TEST(InstantiateAlpha, RandomProgramsSmall) {
    testgen::Rng rng(62);
    const std::vector<Var> vars{"x", "y"};
    for (int k = 0; k < 40; ++k) {
        const Program p = testgen::random_program(rng, vars, 3);
        const std::vector<Var> pv = program_vars(p);
        std::vector<Nat> a;
        for (std::size_t i = 0; i < pv.size(); ++i) a.emplace_back(testgen::pick(rng, 4));
        const ProgState in(pv, a);
        if (!run(p, in, 2000).terminated) continue;
        const auto inst = instantiate_alpha(p, in, 2000);
        ASSERT_TRUE(inst);
        EXPECT_TRUE(eval_formula(*inst, {}).is_true()) << p;
    }
}

TEST(EncodeAlphaOut, Examples) {
    const AlphaOut id = encode_alpha_out(P("x := x"), 1, {"x"});
    EXPECT_EQ(id.result, "y");
    EXPECT_EQ(id.inputs, (std::vector<Var>{"x"}));
    for (unsigned x = 0; x <= 4; ++x)
        for (unsigned y = 0; y <= 4; ++y)
            EXPECT_EQ(eval_formula(id.formula, {{"x", Nat{x}}, {"y", Nat{y}}}).is_true(), x == y);

    // Loop codes outgrow small search budgets once the loop runs, so the
    // search is exercised at x = 0 and larger inputs go through the trace.
    const Program p = P(kLoop);
    const AlphaOut loop = encode_alpha_out(p, 1, {"x"}, "r");
    EXPECT_EQ(loop.inputs, (std::vector<Var>{"x"}));
    const auto w = find_witnesses(Formula::exists("r", loop.formula), {{"x", Nat{0u}}});
    ASSERT_TRUE(w);
    EXPECT_EQ(w->front().second, Nat{0u});
    Budget b;
    b.q_bound = 2;
    for (unsigned x = 0; x <= 5; ++x) {
        const ProgState in({"y", "x"}, {Nat{7u}, Nat{x}});
        const RunOutcome r = run(p, in, 1000);
        ASSERT_TRUE(r.terminated);
        EXPECT_EQ(r.state.get("y"), Nat{x});
        const auto inst = instantiate_alpha(p, in, 1000);
        ASSERT_TRUE(inst);
        EXPECT_TRUE(eval_formula(*inst, {}).is_true());
        for (unsigned y = 0; y <= 6; ++y) {
            if (y == x) continue;
            EXPECT_FALSE(eval_formula(loop.formula, {{"x", Nat{x}}, {"r", Nat{y}}}, b).is_true()) << x << " " << y;
        }
    }
    EXPECT_THROW(encode_alpha_out(P("a := b"), 3, {"a"}), std::out_of_range);
    EXPECT_THROW(encode_alpha_out(P("a := b"), 1, {"c"}), std::invalid_argument);
}

TEST(Vc, Shapes) {
    const HoareTriple t{F("true"), P("x := x"), F("x < 3"), TripleMode::Plain, {}};
    EXPECT_TRUE(alpha_equivalent(vc(t), F("forall x. forall x'. true /\\ x' = x -> x' < 3")));
    const HoareTriple vac{F("false"), P(kLoop), F("x = 99"), TripleMode::Plain, {}};
    for (unsigned x = 0; x <= 3; ++x) {
        const auto inst = vc_instance(vac, {}, ProgState({"y", "x"}, {Nat{0u}, Nat{x}}), 1000);
        ASSERT_TRUE(inst);
        EXPECT_TRUE(eval_formula(*inst, {}).is_true());
    }
    const HoareTriple loop{F("true"), P(kLoop), F("~(y < x)"), TripleMode::Plain, {}};
    EXPECT_EQ(classify(vc(loop)).kind, HKind::Pi);
    for (unsigned x = 0; x <= 5; ++x) {
        const auto inst = vc_instance(loop, {}, ProgState({"y", "x"}, {Nat{3u}, Nat{x}}), 1000);
        ASSERT_TRUE(inst);
        EXPECT_TRUE(eval_formula(*inst, {}).is_true());
    }
}

TEST(CheckTriple, Examples) {
    const HoareTriple good{F("true /\\ x = 3"), P(kLoop), F("y = x"), TripleMode::Plain, {}};
    const Verdict v = check_triple(good, Nat{5u}, 10000);
    EXPECT_EQ(v.kind, VerdictKind::VerifiedUpTo);
    EXPECT_EQ(v.stats.points, 36u);
    EXPECT_EQ(v.stats.pre_true, 6u);

    const HoareTriple bad{F("true"), P("x := x"), F("x < 0"), TripleMode::Plain, {}};
    const Verdict c = check_triple(bad, Nat{3u}, 100);
    ASSERT_EQ(c.kind, VerdictKind::Counterexample);
    EXPECT_EQ(c.input.get("x"), Nat{0u});
    EXPECT_EQ(c.output.get("x"), Nat{0u});

    const HoareTriple spin{F("true"), P("while x < x + 1 do x := x od"), F("false"), TripleMode::Plain, {}};
    const Verdict d = check_triple(spin, Nat{3u}, 1000);
    EXPECT_EQ(d.kind, VerdictKind::VerifiedUpTo);
    EXPECT_EQ(d.stats.fuel_exhausted, 4u);
    EXPECT_FALSE(d.caveats.empty());
}

TEST(CheckTriple, Parameters) {
    const HoareTriple t{F("x = n"), P(kLoop), F("y = n"), TripleMode::WithParams, {"n"}};
    EXPECT_EQ(check_triple(t, Nat{4u}, 10000).kind, VerdictKind::VerifiedUpTo);
    const HoareTriple wrong{F("x = n"), P(kLoop), F("y = n + 1"), TripleMode::WithParams, {"n"}};
    const Verdict v = check_triple(wrong, Nat{4u}, 10000);
    ASSERT_EQ(v.kind, VerdictKind::Counterexample);
    EXPECT_EQ(v.params.get("n"), Nat{0u});
}

TEST(CheckTriple, CoherentWithVcInstances) {
    testgen::Rng rng(63);
    const std::vector<Var> vars{"x", "y"};
    const std::vector<const char*> posts = {"x < y + 1", "y = x", "x + y < 6", "~(x = y)"};
    for (int k = 0; k < 30; ++k) {
        const Program p = testgen::random_program(rng, vars, 2);
        const HoareTriple t{F("true"), p, F(posts[testgen::pick(rng, posts.size())]), TripleMode::Plain, {}};
        const Verdict v = check_triple(t, Nat{2u}, 1000);
        bool any_false = false;
        const std::vector<Var> pv = program_vars(p);
        std::vector<unsigned> pt(pv.size(), 0);
        while (true) {
            const auto inst = vc_instance(t, {}, ProgState(pv, std::vector<Nat>(pt.begin(), pt.end())), 1000);
            if (inst && eval_formula(*inst, {}).is_false()) any_false = true;
            std::size_t i = 0;
            while (i < pt.size() && pt[i] == 2) pt[i++] = 0;
            if (i == pt.size()) break;
            ++pt[i];
        }
        EXPECT_EQ(any_false, v.kind == VerdictKind::Counterexample) << p;
        if (v.kind == VerdictKind::Counterexample) {
            const auto inst = vc_instance(t, v.params, v.input, 1000);
            ASSERT_TRUE(inst);
            EXPECT_TRUE(eval_formula(*inst, {}).is_false());
        }
    }
}

}  // namespace
