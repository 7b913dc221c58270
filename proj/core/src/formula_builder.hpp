#pragma once

// Shared machinery for formulas that read beta-coded sequences through
// bounded quantifiers (alpha_S and the gamma_h of recursion schemas).

#include "hoarith/syntax.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hoarith::detail {

using Terms = std::vector<Term>;
using Cont = std::function<Formula(const Terms&)>;
using PairCont = std::function<Formula(const Term&, const Term&)>;

/// Balanced conjunction, keeping evaluation depth logarithmic for long lists.
Formula conj_balanced(const std::vector<Formula>& fs);

Terms numerals(const std::vector<Nat>& vs);
Terms var_terms(const std::vector<Var>& vs);
Formula equal_vectors(const Terms& a, const Terms& b);

class FormulaBuilder {
public:
    explicit FormulaBuilder(std::set<Var> used = {}) : used_(std::move(used)) {}

    Var claim(Var v);
    /// prefix1, prefix2, ... skipping names already in use.
    Var bound_name(const std::string& prefix);
    std::set<Var>& used() { return used_; }

    /// Cantor unpairing of t, continuing with k(first, second).
    Formula unpair(const Term& t, const PairCont& k);
    /// Splits t into an m-tuple of components.
    Formula untuple(const Term& t, std::size_t m, Terms acc, const Cont& k);
    /// Reads entry j of sequence code w, itself an m-tuple.
    Formula decode(const Term& w, const Term& j, std::size_t m, const Cont& k);

private:
    std::set<Var> used_;
    std::map<std::string, unsigned> counters_;
};

}  // namespace hoarith::detail
