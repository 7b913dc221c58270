#include "hoarith/hierarchy.hpp"
#include "hoarith/parse.hpp"
#include "hoarith/xrec.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace hoarith;

namespace {

Formula F(const char* s) { return parse_formula(s); }

Nat ev(const Schema& h, const std::vector<Nat>& a, std::uint64_t fuel = 1u << 30) {
    const XEvalResult r = xrec_eval(h, a, fuel);
    EXPECT_FALSE(r.diverged);
    return r.value;
}

std::optional<Nat> run_compiled(const CompiledProgram& c, const std::vector<Nat>& a, std::uint64_t fuel) {
    std::map<Var, Nat> m;
    for (std::size_t i = 0; i < a.size(); ++i) m[c.inputs[i]] = a[i];
    const RunOutcome r = run(c.program, ProgState::for_program(c.program, VarAssignment(m)), fuel);
    if (!r.terminated) return std::nullopt;
    return r.state.get(c.output);
}

TEST(Schema, ArityRules) {
    EXPECT_EQ(Schema::proj(2, 3).arity(), 3u);
    EXPECT_THROW(Schema::proj(4, 3), std::invalid_argument);
    EXPECT_THROW(Schema::proj(0, 3), std::invalid_argument);
    EXPECT_THROW(Schema::cn(Schema::add(), {Schema::proj(1, 1)}), std::invalid_argument);
    EXPECT_THROW(Schema::cn(Schema::add(), {Schema::proj(1, 1), Schema::proj(1, 2)}), std::invalid_argument);
    EXPECT_THROW(Schema::pr(Schema::proj(1, 1), Schema::proj(1, 2)), std::invalid_argument);
    EXPECT_THROW(Schema::mn(Schema::constant(Nat{0u}, 0)), std::invalid_argument);
    EXPECT_EQ(Schema::pr(Schema::proj(1, 1), Schema::proj(3, 3)).arity(), 2u);
    EXPECT_TRUE(Schema::mn(Schema::add()).contains_mn());
    EXPECT_THROW(xrec_eval(Schema::add(), {Nat{1u}}, 10), std::invalid_argument);
    EXPECT_THROW(xrec_eval(Schema::add(), {Nat{1u}, Nat{2u}}, 0), std::invalid_argument);
}

TEST(Schema, TextRoundTrip) {
    const std::vector<const char*> texts = {
        "const(3,2)", "proj(2,3)", "add", "mul", "cn(add; proj(1,2), const(1,2))", "pr(proj(1,1); cn(pred; proj(3,3)))",
        "mn(cn(monus; proj(2,2), proj(1,2)))", "sum_of(mul)", "prod_of(add)", "bforall(chi_lt)", "bexists(chi_eq)",
        "cases(chi_lt, proj(1,2); cn(sgbar; chi_lt), proj(2,2))",
    };
    for (const char* t : texts) {
        const Schema h = parse_schema(t);
        EXPECT_TRUE(schemas_equal(parse_schema(to_string(h)), h)) << t;
        EXPECT_TRUE(schemas_equal(parse_schema(to_string(h, true)), h)) << t;
    }
    EXPECT_EQ(to_string(stdlib("max"), true), "max");
    EXPECT_THROW(parse_schema("cn(add; proj(1,2)"), ParseError);
    EXPECT_THROW(parse_schema("nosuch"), ParseError);
}

TEST(XrecEval, Examples) {
    EXPECT_EQ(ev(stdlib("monus"), {5u, 3u}), Nat{2u});
    EXPECT_EQ(ev(stdlib("monus"), {3u, 5u}), Nat{0u});
    EXPECT_EQ(ev(stdlib("sg"), {0u}), Nat{0u});
    EXPECT_EQ(ev(stdlib("sg"), {7u}), Nat{1u});
    EXPECT_EQ(ev(stdlib("pred"), {0u}), Nat{0u});
    EXPECT_EQ(ev(stdlib("max"), {4u, 9u}), Nat{9u});
    EXPECT_EQ(ev(stdlib("min"), {4u, 9u}), Nat{4u});
    // Least y with (x+1) monus (y+1)^2 = 0.
    const Schema succ2 = Schema::cn(Schema::add(), {Schema::proj(2, 2), Schema::constant(Nat{1u}, 2)});
    const Schema isqrt_ish = Schema::mn(Schema::cn(
        stdlib("monus"), {Schema::cn(Schema::add(), {Schema::proj(1, 2), Schema::constant(Nat{1u}, 2)}),
                          Schema::cn(Schema::mul(), {succ2, succ2})}));
    EXPECT_EQ(ev(isqrt_ish, {10u}), Nat{3u});
    EXPECT_THROW(stdlib("nosuch"), std::invalid_argument);
}

TEST(XrecEval, CostModel) {
    // One unit per elementary application.
    EXPECT_EQ(xrec_eval(Schema::add(), {Nat{2u}, Nat{3u}}, 10).fuel_spent, 1u);
    const XEvalResult d = xrec_eval(Schema::mn(Schema::constant(Nat{1u}, 2)), {Nat{0u}}, 50);
    EXPECT_TRUE(d.diverged);
    const XEvalResult ok = xrec_eval(stdlib("monus"), {Nat{9u}, Nat{4u}}, 1000);
    ASSERT_FALSE(ok.diverged);
    EXPECT_TRUE(xrec_eval(stdlib("monus"), {Nat{9u}, Nat{4u}}, ok.fuel_spent - 1).diverged);
    EXPECT_FALSE(xrec_eval(stdlib("monus"), {Nat{9u}, Nat{4u}}, ok.fuel_spent).diverged);
}

TEST(Gamma, Examples) {
    const Gamma c = gamma(Schema::constant(Nat{3u}, 1));
    EXPECT_TRUE(alpha_equivalent(c.formula, F("y = 3")));
    EXPECT_EQ(c.inputs, (std::vector<Var>{"x1"}));
    const Gamma p = gamma(Schema::proj(2, 3));
    EXPECT_TRUE(alpha_equivalent(p.formula, F("y = x2")));

    const auto yes = instantiate_gamma(stdlib("monus"), {5u, 3u}, 2u, 100000);
    ASSERT_TRUE(yes);
    EXPECT_TRUE(eval_formula(*yes, {}).is_true());
    const auto no = instantiate_gamma(stdlib("monus"), {5u, 3u}, 1u, 100000);
    EXPECT_FALSE(no && eval_formula(*no, {}).is_true());
    Budget b;
    b.q_bound = 2;
    const Gamma g = gamma(stdlib("monus"));
    EXPECT_FALSE(eval_formula(g.formula, {{"x1", Nat{5u}}, {"x2", Nat{3u}}, {g.result, Nat{1u}}}, b).is_true());
    EXPECT_FALSE(instantiate_gamma(Schema::mn(Schema::constant(Nat{1u}, 2)), {0u}, 0u, 100));
}

TEST(Gamma, GeneralizedSigma1) {
    std::vector<Schema> hs;
    for (const char* n : {"pred", "monus", "sg", "sgbar", "chi_eq", "chi_lt", "max", "min"}) hs.push_back(stdlib(n));
    hs.push_back(sum_of(Schema::mul()));
    hs.push_back(Schema::mn(Schema::add()));
    hs.push_back(sigma0_char(F("forall i < x. exists j < i + 1. j = i")));
    for (const Schema& h : hs) {
        const HierarchyLevel l = classify(gamma(h).formula);
        EXPECT_TRUE(l.n <= 1 && (l.kind == HKind::Sigma || l.both)) << to_string(h, true) << " " << l.to_string();
    }
}

TEST(Library, CombinatorsAgainstDirectArithmetic) {
    const Schema prod = prod_of(Schema::mul());
    const Schema all = bforall(stdlib("chi_lt"));    // forall i <= y. x < i
    const Schema some = bexists(stdlib("chi_eq"));   // exists i <= y. x = i
    for (unsigned x = 0; x <= 8; ++x)
        for (unsigned y = 0; y <= 8; ++y) {
            mpz_class p = 1;
            bool a = true, s = false;
            for (unsigned i = 0; i <= y; ++i) {
                p *= mpz_class(x) * i;
                a = a && x < i;
                s = s || x == i;
            }
            EXPECT_EQ(ev(prod, {x, y}), Nat{p});
            EXPECT_EQ(ev(all, {x, y}), Nat{a ? 1u : 0u});
            EXPECT_EQ(ev(some, {x, y}), Nat{s ? 1u : 0u});
        }
    EXPECT_THROW(cases({}), std::invalid_argument);
}

TEST(TermSchema, EvaluatesTerms) {
    const Term t = parse_term("x * x + 3 * y + 1");
    const Schema h = term_schema(t, {"x", "y"});
    for (unsigned x = 0; x <= 6; ++x)
        for (unsigned y = 0; y <= 6; ++y)
            EXPECT_EQ(ev(h, {x, y}), eval_term(t, {{"x", Nat{x}}, {"y", Nat{y}}}));
}

TEST(Sigma0Char, MatchesEvaluator) {
    const std::vector<const char*> fixtures = {
        "x < y", "x = y", "forall i < x. i < x", "exists i < x. i + i = x", "~(x < y) -> x = y + y",
        "exists i < x + 1. forall j < y. i + j < x + y", "x < 3 <-> y = 0", "forall i < y. ~(x = i)",
    };
    EXPECT_EQ(ev(sigma0_char(F("x < y")), {2u, 5u}), Nat{1u});
    EXPECT_EQ(ev(sigma0_char(F("exists i < x. i + i = x")), {4u}), Nat{1u});
    EXPECT_EQ(ev(sigma0_char(F("exists i < x. i + i = x")), {3u}), Nat{0u});
    for (const char* s : fixtures) {
        const Formula f = F(s);
        const std::vector<Var> vars = free_vars_ordered(f);
        const Schema h = sigma0_char(f, vars);
        ASSERT_EQ(h.arity(), vars.size());
        std::vector<unsigned> pt(vars.size(), 0);
        while (true) {
            std::map<Var, Nat> m;
            std::vector<Nat> args;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                m[vars[i]] = Nat{pt[i]};
                args.emplace_back(pt[i]);
            }
            const TriState truth = eval_formula(f, VarAssignment(m));
            ASSERT_TRUE(truth.is_exact());
            EXPECT_EQ(ev(h, args) == Nat{1u}, truth.is_true()) << s;
            std::size_t i = 0;
            while (i < pt.size() && pt[i] == 12) pt[i++] = 0;
            if (i == pt.size()) break;
            ++pt[i];
        }
    }
    EXPECT_THROW(sigma0_char(F("exists y. y = x")), std::invalid_argument);
    EXPECT_THROW(sigma0_char(F("x = y"), {"x"}), std::invalid_argument);
}

TEST(Sigma1, Examples) {
    const Sigma1Function dbl = sigma1_to_xrec(F("exists z. z = 0 /\\ y = x + x"), "y");
    EXPECT_EQ(dbl.inputs, (std::vector<Var>{"x"}));
    EXPECT_EQ(ev(dbl.schema, {3u}), Nat{6u});
    const Sigma1Function id = sigma1_to_xrec(F("y = x"), "y");
    EXPECT_EQ(ev(id.schema, {5u}), Nat{5u});
    const Sigma1Function sq = sigma1_to_xrec(F("exists z. y = z /\\ z = x * x"), "y");
    EXPECT_EQ(ev(sq.schema, {4u}, std::uint64_t{1} << 40), Nat{16u});
}

TEST(Sigma1, Programs) {
    const CompiledProgram dbl = sigma1_to_program(F("exists z. z = 0 /\\ y = x + x"), "y");
    EXPECT_EQ(run_compiled(dbl, {4u}, std::uint64_t{1} << 40), Nat{8u});
    const CompiledProgram id = sigma1_to_program(F("y = x"), "y");
    for (unsigned x = 0; x <= 10; ++x) EXPECT_EQ(run_compiled(id, {x}, std::uint64_t{1} << 40), Nat{x});
    const CompiledProgram sq = sigma1_to_program(F("exists z. y = z /\\ z = x * x"), "y");
    EXPECT_EQ(run_compiled(sq, {5u}, std::uint64_t{1} << 40), Nat{25u});
}

TEST(Sigma1, ShapeAndFunctionality) {
    EXPECT_THROW(sigma1_to_xrec(F("y < x + 1"), "y"), FunctionalityError);
    EXPECT_THROW(sigma1_to_xrec(F("forall z. y = z"), "y"), std::invalid_argument);
    EXPECT_THROW(sigma1_to_xrec(F("x = x"), "y"), std::invalid_argument);
}

TEST(Compile, LibraryAgreesWithEvaluator) {
    for (const char* n : {"pred", "monus", "sg", "sgbar", "chi_eq", "chi_lt", "max", "min"}) {
        const Schema h = stdlib(n);
        const CompiledProgram c = compile_to_while(h);
        ASSERT_EQ(c.inputs.size(), h.arity());
        EXPECT_EQ(c.output, program_vars(c.program).front());
        for (unsigned x = 0; x <= 6; ++x)
            for (unsigned y = 0; y <= (h.arity() == 2 ? 6u : 0u); ++y) {
                std::vector<Nat> a{x};
                if (h.arity() == 2) a.emplace_back(y);
                EXPECT_EQ(run_compiled(c, a, 1u << 20), ev(h, a)) << n;
            }
    }
    EXPECT_EQ(run_compiled(compile_to_while(stdlib("sg")), {0u}, 1000), Nat{0u});
    EXPECT_EQ(run_compiled(compile_to_while(stdlib("monus")), {7u, 2u}, 1000), Nat{5u});
    EXPECT_FALSE(run_compiled(compile_to_while(Schema::mn(Schema::constant(Nat{1u}, 2))), {3u}, 1000));
}

TEST(Compile, InputsNeverWritten) {
    const CompiledProgram c = compile_to_while(parse_schema("pr(proj(1,1); cn(add; proj(3,3), proj(1,3)))"));
    for_each_node(c.program, [&](const Program& n, std::size_t) {
        if (n.kind() != ProgramKind::Assign) return;
        for (const Var& in : c.inputs) EXPECT_NE(n.target(), in);
    });
}

TEST(Pi1, CounterexampleSearch) {
    const CompiledProgram a = pi1_counterexample_program(F("y < 5"), "y");
    EXPECT_EQ(run_compiled(a, {Nat{7u}}, 1000000), Nat{5u});
    const CompiledProgram b = pi1_counterexample_program(F("0 < y + 1"), "y");
    EXPECT_FALSE(run_compiled(b, {Nat{0u}}, 10000));
    const CompiledProgram c = pi1_counterexample_program(F("~(y = y)"), "y");
    EXPECT_EQ(run_compiled(c, {Nat{2u}}, 10000), Nat{0u});
    EXPECT_THROW(pi1_counterexample_program(F("exists z. z = y"), "y"), std::invalid_argument);
}

}  // namespace
