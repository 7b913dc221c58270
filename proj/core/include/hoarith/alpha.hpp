#pragma once

#include "hoarith/eval.hpp"
#include "hoarith/program.hpp"
#include "hoarith/syntax.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hoarith {

/// Program variables x and their output copies y (x', x'', ... as needed).
struct AlphaSignature {
    std::vector<Var> inputs;
    std::vector<Var> outputs;
};

/// Output names for S avoiding the program variables and `avoid`.
AlphaSignature alpha_signature(const Program& s, const std::set<Var>& avoid = {});

/// The input-output formula alpha_S(x, y) built by structural recursion:
///
///   x_i := E        y_i = E(x) /\ y_j = x_j (j != i)
///   S1; S2          exists z. alpha_S1(x, z) /\ alpha_S2(z, y)
///   if B ...        (B(x) /\ alpha_S1(x, y)) \/ (~B(x) /\ alpha_S2(x, y))
///   while B do S0   (exists i. exists w. A(i, w, x, y)) /\ ~B(y)
///
/// with A(i,w,x,y) = x = (w)_0 /\ forall j<i. (B((w)_j) /\ alpha_S0((w)_j, (w)_{j+1}))
///                   /\ y = (w)_i.
/// A state vector is stored in the sequence as its tuple code; (w)_j and
/// the tuple components are read through bounded quantifiers whose atoms
/// pin every witness, so the decoding is exact for the evaluator.
Formula encode_alpha(const Program& s, const std::set<Var>& avoid = {});

struct AlphaOut {
    Formula formula;
    Var result;               // the designated output variable
    std::vector<Var> inputs;  // the remaining free variables
};

/// alpha^(i)_S(p, y) = exists q, y. (alpha_S(x, y) /\ y = y_i) with
/// 1-based index i and inputs p. Throws std::out_of_range for a bad index
/// and std::invalid_argument for an input that is not a program variable.
AlphaOut encode_alpha_out(const Program& s, std::size_t index, const std::vector<Var>& inputs,
                          const Var& result = "y");

/// alpha_S(a, b) with numerals for x and y; unbounded quantifiers kept.
Formula alpha_at(const Program& s, const std::vector<Nat>& a, const std::vector<Nat>& b);

/// When S terminates on `input` within `fuel`, alpha_S(a, b) with every
/// unbounded existential replaced by its value from the execution trace.
/// Universal loops over a body that needs witnesses are unfolded, and the
/// untaken side of a conditional gets zeros. The result is closed and has
/// only bounded quantifiers.
std::optional<Formula> instantiate_alpha(const Program& s, const ProgState& input, std::uint64_t fuel);

// --- Hoare triples ----------------------------------------------------------------

enum class TripleMode : std::uint8_t { Plain, WithParams };

struct HoareTriple {
    Formula pre;
    Program prog;
    Formula post;
    TripleMode mode = TripleMode::Plain;
    std::vector<Var> params;  // WithParams only
};

/// Universal closure of p(x) /\ alpha_S(x, y) -> q(y/x). Parameters are
/// bound first, then x, then y, then anything else free.
Formula vc(const HoareTriple& t);

/// p(a) /\ alpha-instance(a, b) -> q(b) for the run from `input`, with
/// parameters taken from `params`. nullopt when the run exhausts fuel.
std::optional<Formula> vc_instance(const HoareTriple& t, const VarAssignment& params, const ProgState& input,
                                   std::uint64_t fuel);

enum class VerdictKind : std::uint8_t { VerifiedUpTo, Counterexample, Inconclusive };

struct TripleStats {
    std::uint64_t points = 0;
    std::uint64_t pre_true = 0;
    std::uint64_t pre_unknown = 0;
    std::uint64_t terminated = 0;
    std::uint64_t fuel_exhausted = 0;
    std::uint64_t post_true = 0;
    std::uint64_t post_unknown = 0;
};

struct Verdict {
    VerdictKind kind = VerdictKind::VerifiedUpTo;
    Nat grid;
    std::uint64_t fuel = 0;
    Budget budget;
    std::vector<std::string> caveats;  // also the reports of an inconclusive sweep
    TripleStats stats;
    // Counterexample only.
    VarAssignment params;
    ProgState input;
    ProgState output;
};

std::string to_string(VerdictKind k);

/// Sweeps every parameter and input tuple with components <= grid in
/// lexicographic order (parameters first). The first point whose run
/// terminates with an exactly false postcondition is the counterexample.
/// Fuel exhaustion and unknown assertion verdicts are listed as caveats;
/// the sweep is inconclusive when unknowns occurred and no point was
/// positively confirmed.
Verdict check_triple(const HoareTriple& t, const Nat& grid, std::uint64_t fuel, const Budget& b = {});

}  // namespace hoarith
