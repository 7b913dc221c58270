#pragma once

#include "hoarith/alpha.hpp"
#include "hoarith/eval.hpp"
#include "hoarith/parse.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hoarith {

enum class ProofRule : std::uint8_t { Assign, Seq, Cond, While, Conseq };

/// One rule application. `conclusion` is the triple the node proves; the
/// premises are the conclusions of `premises`:
///
///   Assign  {q[E/x]} x:=E {q}                            no premises
///   Seq     {p} S1;S2 {q}       from {p} S1 {r}, {r} S2 {q}
///   Cond    {p} if B ... fi {q} from {p /\ B} S1 {q}, {p /\ ~B} S2 {q}
///   While   {I} while B do S od {I /\ ~B}   from {I /\ B} S {I}
///   Conseq  {p'} S {q'}         from {p} S {q}, with p' -> p and q -> q'
struct ProofNode {
    ProofRule rule = ProofRule::Assign;
    HoareTriple conclusion;
    std::optional<Formula> invariant;  // While only
    std::vector<ProofNode> premises;
    std::size_t line = 0;  // source line when parsed from text, else 0
};

enum class NodeStatus : std::uint8_t { Accepted, SideConditionUnknown, Rejected };

struct NodeReport {
    std::string location;  // pre-order path such as "1.2", plus the source line when known
    ProofRule rule = ProofRule::Assign;
    NodeStatus status = NodeStatus::Accepted;
    std::string reason;                     // Rejected: what failed
    std::vector<Formula> unknown_conditions;  // SideConditionUnknown: closed side conditions
};

struct CheckReport {
    NodeStatus overall = NodeStatus::Accepted;  // Rejected if any node is, else Unknown if any node is
    std::vector<NodeReport> nodes;              // pre-order
    std::vector<std::string> caveats;
    Nat grid;
    Budget budget;

    /// No node was rejected; undecided side conditions are listed as caveats.
    [[nodiscard]] bool accepted() const noexcept { return overall != NodeStatus::Rejected; }
};

std::string to_string(ProofRule r);
std::string to_string(NodeStatus s);

/// Checks every rule application. Schematic premises are compared up to
/// alpha-equivalence of assertions; sequences are compared after
/// re-association. Consequence side conditions are universally closed and
/// swept over all assignments with values <= grid: an exactly false
/// instance rejects, all true accepts, anything else leaves the node
/// SideConditionUnknown.
CheckReport check_proof(const ProofNode& p, const Nat& grid, const Budget& b = {});

/// Parses the block format:
///
///   seq {
///     pre:  true
///     prog: y := 0; while y < x do y := y + 1 od
///     post: ~(y < x)
///     assign { ... }
///     while { inv: true  ... }
///   }
///
/// Rule keywords are assign, seq, cond, while and conseq. Each block gives
/// `pre:`, `prog:` and `post:` fields on lines of their own (while adds
/// `inv:`), then its premise blocks in order. `#` starts a comment. Errors
/// are ParseError with the span of the offending line.
ProofNode parse_proof(std::string_view text);

/// The block format of a proof tree, accepted by parse_proof.
std::string to_string(const ProofNode& p);

}  // namespace hoarith
