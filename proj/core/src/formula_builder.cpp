#include "formula_builder.hpp"

namespace hoarith::detail {

namespace {

Formula conj_range(const std::vector<Formula>& fs, std::size_t lo, std::size_t hi) {
    if (lo == hi) return Formula::top();
    if (hi - lo == 1) return fs[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return Formula::conj(conj_range(fs, lo, mid), conj_range(fs, mid, hi));
}

}  // namespace

Formula conj_balanced(const std::vector<Formula>& fs) { return conj_range(fs, 0, fs.size()); }

Terms numerals(const std::vector<Nat>& vs) {
    Terms out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(mk_numeral(v));
    return out;
}

Terms var_terms(const std::vector<Var>& vs) {
    Terms out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(Term::var(v));
    return out;
}

Formula equal_vectors(const Terms& a, const Terms& b) {
    std::vector<Formula> parts;
    for (std::size_t k = 0; k < a.size(); ++k) parts.push_back(Formula::eq(a[k], b[k]));
    return Formula::conj_all(parts);
}

Var FormulaBuilder::claim(Var v) {
    used_.insert(v);
    return v;
}

Var FormulaBuilder::bound_name(const std::string& prefix) {
    unsigned& k = counters_[prefix];
    for (;;) {
        Var v = prefix + std::to_string(++k);
        if (used_.count(v) == 0) return claim(v);
    }
}

// s is the largest with s(s+1) <= 2t, pinned from both sides so the
// evaluator can solve for it; then t = s(s+1)/2 + a with a + r = s.
Formula FormulaBuilder::unpair(const Term& t, const PairCont& k) {
    const Var sv = bound_name("s");
    const Var av = bound_name("a");
    const Var rv = bound_name("r");
    const Term s = Term::var(sv);
    const Term a = Term::var(av);
    const Term r = Term::var(rv);
    const Term one = Term::one();
    const Term tri = s * (s + one);
    const Term twice_t = t + t;
    Formula inner = Formula::conj(Formula::eq(a + r, s), k(a, r));
    Formula mid = Formula::conj(Formula::eq(tri + a + a, twice_t), Formula::bexists(rv, s + one, inner));
    Formula pin = Formula::conj(Formula::lt(tri, twice_t + one), Formula::lt(twice_t, (s + one) * (s + one + one)));
    return Formula::bexists(sv, t + one, Formula::conj(pin, Formula::bexists(av, s + one, mid)));
}

Formula FormulaBuilder::untuple(const Term& t, std::size_t m, Terms acc, const Cont& k) {
    if (m == 1) {
        acc.push_back(t);
        return k(acc);
    }
    return unpair(t, [&, acc](const Term& first, const Term& rest) mutable {
        acc.push_back(first);
        return untuple(rest, m - 1, acc, k);
    });
}

// w = <b, c>; entry j is b mod (1 + (j+1)c), with quotient and remainder pinned.
Formula FormulaBuilder::decode(const Term& w, const Term& j, std::size_t m, const Cont& k) {
    return unpair(w, [&](const Term& b, const Term& c) {
        const Term one = Term::one();
        const Term mod = one + (j + one) * c;
        const Var qv = bound_name("q");
        const Var tv = bound_name("t");
        const Term q = Term::var(qv);
        const Term t = Term::var(tv);
        Formula rem = Formula::bexists(tv, mod, Formula::conj(Formula::eq(b, q * mod + t), untuple(t, m, {}, k)));
        Formula quot = Formula::conj(Formula::conj(Formula::lt(q * mod, b + one), Formula::lt(b, q * mod + mod)), rem);
        return Formula::bexists(qv, b + one, quot);
    });
}

}  // namespace hoarith::detail
