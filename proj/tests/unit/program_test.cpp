#include "hoarith/parse.hpp"
#include "hoarith/program.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hoarith;

namespace {

Program P(const char* s) { return parse_program(s); }

TEST(ProgramVars, FirstOccurrenceOrder) {
    EXPECT_EQ(program_vars(P("y:=0; while y<x do y:=y+1 od")), (std::vector<Var>{"y", "x"}));
    EXPECT_EQ(program_vars(P("x:=x")), (std::vector<Var>{"x"}));
    EXPECT_EQ(program_vars(P("if a<b then c:=0 else c:=1 fi")), (std::vector<Var>{"a", "b", "c"}));
}

TEST(Run, Examples) {
    const Program loop = P("y:=0; while y<x do y:=y+1 od");
    const RunOutcome r = run(loop, ProgState::for_program(loop, {{"x", Nat{3u}}, {"y", Nat{17u}}}), 100);
    ASSERT_TRUE(r.terminated);
    EXPECT_EQ(r.state.get("x"), Nat{3u});
    EXPECT_EQ(r.state.get("y"), Nat{3u});
    // 1 assignment, 4 guard tests, 3 body assignments.
    EXPECT_EQ(r.steps, 8u);

    const Program id = P("x:=x");
    const RunOutcome s = run(id, ProgState({"x"}, {Nat{5u}}), 10);
    EXPECT_TRUE(s.terminated);
    EXPECT_EQ(s.state.get("x"), Nat{5u});
    EXPECT_EQ(s.steps, 1u);

    const Program spin = P("while x<x+1 do x:=x od");
    EXPECT_FALSE(run(spin, ProgState({"x"}, {Nat{0u}}), 1000).terminated);
}

TEST(Run, Conditionals) {
    const Program p = P("if x < 3 then y := 1 else y := x * x fi");
    EXPECT_EQ(run(p, ProgState({"x", "y"}, {Nat{2u}, Nat{0u}}), 10).state.get("y"), Nat{1u});
    EXPECT_EQ(run(p, ProgState({"x", "y"}, {Nat{5u}, Nat{0u}}), 10).state.get("y"), Nat{25u});
    const Program q = P("if ~(x < 3) -> x < 1 then y := 1 else y := 2 fi");
    EXPECT_EQ(run(q, ProgState({"x", "y"}, {Nat{0u}, Nat{0u}}), 10).state.get("y"), Nat{1u});
    EXPECT_EQ(run(q, ProgState({"x", "y"}, {Nat{4u}, Nat{0u}}), 10).state.get("y"), Nat{2u});
}

TEST(Run, DeterminismAndFuelMonotonicity) {
    testgen::Rng rng(31);
    const std::vector<Var> vars{"x", "y", "z"};
    for (int k = 0; k < 200; ++k) {
        const Program p = testgen::random_program(rng, vars, 3);
        const std::vector<Var> pv = program_vars(p);
        std::vector<Nat> in;
        for (std::size_t i = 0; i < pv.size(); ++i) in.emplace_back(testgen::pick(rng, 6));
        const ProgState s(pv, in);
        const RunOutcome a = run(p, s, 2000);
        const RunOutcome b = run(p, s, 2000);
        EXPECT_EQ(a.terminated, b.terminated);
        EXPECT_EQ(a.state, b.state);
        EXPECT_EQ(a.steps, b.steps);
        if (!a.terminated) continue;
        for (std::uint64_t more : {a.steps, a.steps + 1, a.steps * 3 + 10}) {
            const RunOutcome c = run(p, s, more);
            EXPECT_TRUE(c.terminated);
            EXPECT_EQ(c.state, a.state);
        }
        if (a.steps > 0) {
            EXPECT_FALSE(run(p, s, a.steps - 1).terminated);
        }
    }
}

TEST(Run, FrameOnlyProgramVariables) {
    const Program p = P("y := x + 1");
    const ProgState s = ProgState::for_program(p, {{"x", Nat{4u}}, {"unused", Nat{9u}}});
    EXPECT_EQ(s.vars(), (std::vector<Var>{"y", "x"}));
    const RunOutcome r = run(p, s, 5);
    EXPECT_EQ(r.state.vars(), s.vars());
    EXPECT_EQ(r.state.get("y"), Nat{5u});
}

TEST(Run, MissingVariableIsRejected) {
    EXPECT_THROW(run(P("y := x"), ProgState({"y"}, {Nat{0u}}), 5), std::exception);
}

TEST(Programs, RightAssociate) {
    const Program left = Program::seq(Program::seq(P("x:=1"), P("y:=2")), P("z:=3"));
    const Program right = P("x:=1; y:=2; z:=3");
    EXPECT_FALSE(programs_equal(left, right));
    EXPECT_TRUE(programs_equal(right_associate(left), right));
    EXPECT_EQ(to_string(left), to_string(right_associate(left)));
}

TEST(Programs, NodeIdsArePreOrder) {
    const Program p = P("x:=1; while x<3 do x:=x+1 od");
    std::vector<std::pair<ProgramKind, std::size_t>> seen;
    for_each_node(p, [&](const Program& n, std::size_t id) { seen.emplace_back(n.kind(), id); });
    ASSERT_EQ(seen.size(), p.size());
    EXPECT_EQ(seen[0], std::make_pair(ProgramKind::Seq, std::size_t{0}));
    EXPECT_EQ(seen[1], std::make_pair(ProgramKind::Assign, std::size_t{1}));
    EXPECT_EQ(seen[2], std::make_pair(ProgramKind::While, std::size_t{2}));
    EXPECT_EQ(seen[3], std::make_pair(ProgramKind::Assign, std::size_t{3}));
}

TEST(Programs, GuardAsFormula) {
    const Formula f = to_formula(parse_bool("~(x < 1) -> y < x"));
    EXPECT_TRUE(alpha_equivalent(f, parse_formula("~(x < 1) -> y < x")));
}

TEST(ProgState, Accessors) {
    const ProgState s({"a", "b"}, {Nat{1u}, Nat{2u}});
    EXPECT_EQ(s.with("b", Nat{7u}).get("b"), Nat{7u});
    EXPECT_EQ(s.to_assignment().get("a"), Nat{1u});
    EXPECT_EQ(s.to_assignment({{"n", Nat{4u}}}).get("n"), Nat{4u});
    EXPECT_THROW((void)s.get("c"), std::exception);
}

}  // namespace
