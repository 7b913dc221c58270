#pragma once

#include "hoarith/syntax.hpp"

#include <cstdint>
#include <string>

namespace hoarith {

enum class HKind : std::uint8_t { Sigma, Pi };

/// Position of a formula in the arithmetical hierarchy.
///
/// `both` marks formulas that sit in Sigma_n and Pi_n at the reported n
/// (every quantifier-free or bounded formula, and mixed conjunctions such as
/// (exists x. a) /\ (forall y. b)); kind is then reported as Sigma.
/// `strict` means the formula literally is a block prefix with n
/// alternations over a matrix free of unbounded quantifiers.
struct HierarchyLevel {
    HKind kind = HKind::Sigma;
    unsigned n = 0;
    bool strict = false;
    bool both = false;

    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const HierarchyLevel&, const HierarchyLevel&) = default;
};

HierarchyLevel dual(const HierarchyLevel& l);

/// Replaces -> and <-> by ~, /\ and \/.
Formula desugar(const Formula& f);
/// Desugars, then pushes negation down to atoms. Negated atoms stay as
/// ~(atom); negated constants flip.
Formula nnf(const Formula& f);

/// Least generalized level, computed structurally after nnf.
HierarchyLevel classify(const Formula& f);

/// True when f has no unbounded quantifiers.
bool is_level_zero(const Formula& f);

/// Logically equivalent strict formula at the level classify reports.
/// Bounded quantifiers stay in the matrix; an unbounded quantifier under a
/// bounded one of the other kind is pulled out by collection,
/// e.g. forall i<t. exists y. p  ~>  exists Y. forall i<t. exists y<Y. p.
Formula prenexify(const Formula& f);

}  // namespace hoarith
