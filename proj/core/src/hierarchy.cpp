#include "hoarith/hierarchy.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace hoarith {

std::string HierarchyLevel::to_string() const {
    std::string s = (kind == HKind::Sigma ? "Sigma_" : "Pi_") + std::to_string(n);
    if (both) s += n == 0 ? " (Delta_0)" : " (also Pi_" + std::to_string(n) + ")";
    s += strict ? " strict" : " generalized";
    return s;
}

HierarchyLevel dual(const HierarchyLevel& l) {
    HierarchyLevel d = l;
    if (!l.both) d.kind = l.kind == HKind::Sigma ? HKind::Pi : HKind::Sigma;
    return d;
}

Formula desugar(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::Not: return Formula::neg(desugar(f.sub()));
        case FormulaKind::And: return Formula::conj(desugar(f.first()), desugar(f.second()));
        case FormulaKind::Or: return Formula::disj(desugar(f.first()), desugar(f.second()));
        case FormulaKind::Implies: return Formula::disj(Formula::neg(desugar(f.first())), desugar(f.second()));
        case FormulaKind::Iff: {
            const Formula a = desugar(f.first());
            const Formula b = desugar(f.second());
            return Formula::conj(Formula::disj(Formula::neg(a), b), Formula::disj(Formula::neg(b), a));
        }
        case FormulaKind::Forall: return Formula::forall(f.var(), desugar(f.body()));
        case FormulaKind::Exists: return Formula::exists(f.var(), desugar(f.body()));
        case FormulaKind::BForall: return Formula::bforall(f.var(), f.bound(), desugar(f.body()));
        case FormulaKind::BExists: return Formula::bexists(f.var(), f.bound(), desugar(f.body()));
    }
    throw std::logic_error("desugar: unreachable");
}

namespace {

Formula push_neg(const Formula& f, bool negate) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt: return negate ? Formula::neg(f) : f;
        case FormulaKind::True: return negate ? Formula::bottom() : f;
        case FormulaKind::False: return negate ? Formula::top() : f;
        case FormulaKind::Not: return push_neg(f.sub(), !negate);
        case FormulaKind::And:
        case FormulaKind::Or: {
            const Formula a = push_neg(f.first(), negate);
            const Formula b = push_neg(f.second(), negate);
            const bool is_and = (f.kind() == FormulaKind::And) != negate;
            return is_and ? Formula::conj(a, b) : Formula::disj(a, b);
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            const bool universal = (f.kind() == FormulaKind::Forall) != negate;
            const Formula body = push_neg(f.body(), negate);
            return universal ? Formula::forall(f.var(), body) : Formula::exists(f.var(), body);
        }
        case FormulaKind::BForall:
        case FormulaKind::BExists: {
            const bool universal = (f.kind() == FormulaKind::BForall) != negate;
            const Formula body = push_neg(f.body(), negate);
            return universal ? Formula::bforall(f.var(), f.bound(), body) : Formula::bexists(f.var(), f.bound(), body);
        }
        case FormulaKind::Implies:
        case FormulaKind::Iff: break;
    }
    throw std::logic_error("nnf: connective survived desugaring");
}

struct Levels {
    unsigned sigma;
    unsigned pi;
};

Levels normalize(Levels l) {
    l.sigma = std::min(l.sigma, l.pi + 1);
    l.pi = std::min(l.pi, l.sigma + 1);
    return l;
}

// Least generalized Sigma / Pi indices of a formula in nnf.
Levels levels(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::And:
        case FormulaKind::Or: {
            const Levels a = levels(f.first());
            const Levels b = levels(f.second());
            return normalize({std::max(a.sigma, b.sigma), std::max(a.pi, b.pi)});
        }
        case FormulaKind::Exists: {
            const unsigned s = std::max(levels(f.body()).sigma, 1U);
            return {s, s + 1};
        }
        case FormulaKind::Forall: {
            const unsigned p = std::max(levels(f.body()).pi, 1U);
            return {p + 1, p};
        }
        case FormulaKind::BForall:
        case FormulaKind::BExists: return levels(f.body());
        default: return {0, 0};
    }
}

bool has_unbounded(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Forall:
        case FormulaKind::Exists: return true;
        case FormulaKind::Not:
        case FormulaKind::BForall:
        case FormulaKind::BExists: return has_unbounded(f.sub());
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: return has_unbounded(f.first()) || has_unbounded(f.second());
        default: return false;
    }
}

// --- prenex form --------------------------------------------------------------

struct Prenex {
    bool starts_exists = true;
    std::vector<std::vector<Var>> slots;  // alternating blocks
    Formula matrix;
};

bool slot_is_exists(const Prenex& p, std::size_t j) { return p.starts_exists == (j % 2 == 0); }

Prenex shifted(Prenex p) {
    p.slots.insert(p.slots.begin(), std::vector<Var>{});
    p.starts_exists = !p.starts_exists;
    return p;
}

// `prefer` is the kind of the nearest enclosing unbounded quantifier. Aligning
// to it never costs an alternation there, since the other alignment is at
// most one block shorter.
Prenex merge(Prenex a, Prenex b, bool conj, std::optional<bool> prefer) {
    Formula m = conj ? Formula::conj(a.matrix, b.matrix) : Formula::disj(a.matrix, b.matrix);
    if (a.slots.empty()) return Prenex{b.starts_exists, std::move(b.slots), m};
    if (b.slots.empty()) return Prenex{a.starts_exists, std::move(a.slots), m};
    if (a.starts_exists != b.starts_exists) {
        // Shifting b aligns to a's kind; shifting a aligns to b's.
        const std::size_t keep_a = std::max(a.slots.size(), b.slots.size() + 1);
        const std::size_t keep_b = std::max(a.slots.size() + 1, b.slots.size());
        const bool align_to_a = prefer ? a.starts_exists == *prefer
                                       : keep_a < keep_b || (keep_a == keep_b && a.starts_exists);
        if (align_to_a) {
            b = shifted(std::move(b));
        } else {
            a = shifted(std::move(a));
        }
    }
    Prenex out{a.starts_exists, {}, m};
    out.slots.resize(std::max(a.slots.size(), b.slots.size()));
    for (std::size_t j = 0; j < out.slots.size(); ++j) {
        if (j < a.slots.size()) out.slots[j] = a.slots[j];
        if (j < b.slots.size()) out.slots[j].insert(out.slots[j].end(), b.slots[j].begin(), b.slots[j].end());
    }
    return out;
}

struct BoundedQ {
    bool exists;
    Var x;
    Term bound;
};

class Prenexer {
public:
    explicit Prenexer(const Formula& f) : used_(all_vars(f)) {}

    // Renames binders apart so no name is bound twice or both free and bound.
    Formula rename_apart(const Formula& f, std::set<Var>& seen) {
        switch (f.kind()) {
            case FormulaKind::Not: return Formula::neg(rename_apart(f.sub(), seen));
            case FormulaKind::And: {
                Formula a = rename_apart(f.first(), seen);
                return Formula::conj(a, rename_apart(f.second(), seen));
            }
            case FormulaKind::Or: {
                Formula a = rename_apart(f.first(), seen);
                return Formula::disj(a, rename_apart(f.second(), seen));
            }
            case FormulaKind::Forall:
            case FormulaKind::Exists:
            case FormulaKind::BForall:
            case FormulaKind::BExists: {
                Var x = f.var();
                Formula body = f.body();
                if (seen.count(x) != 0) {
                    const Var y = fresh(x);
                    body = substitute(body, x, Term::var(y));
                    x = y;
                }
                seen.insert(x);
                body = rename_apart(body, seen);
                switch (f.kind()) {
                    case FormulaKind::Forall: return Formula::forall(x, body);
                    case FormulaKind::Exists: return Formula::exists(x, body);
                    case FormulaKind::BForall: return Formula::bforall(x, f.bound(), body);
                    default: return Formula::bexists(x, f.bound(), body);
                }
            }
            default: return f;
        }
    }

    Prenex run(const Formula& f, std::optional<bool> prefer) {
        switch (f.kind()) {
            case FormulaKind::And:
            case FormulaKind::Or:
                return merge(run(f.first(), prefer), run(f.second(), prefer), f.kind() == FormulaKind::And, prefer);
            case FormulaKind::Exists:
            case FormulaKind::Forall: {
                const bool ex = f.kind() == FormulaKind::Exists;
                Prenex p = run(f.body(), ex);
                if (p.slots.empty() || p.starts_exists != ex) {
                    p.slots.insert(p.slots.begin(), std::vector<Var>{});
                    p.starts_exists = ex;
                }
                p.slots.front().insert(p.slots.front().begin(), f.var());
                return p;
            }
            case FormulaKind::BForall:
            case FormulaKind::BExists: {
                Prenex p = run(f.body(), prefer);
                std::vector<BoundedQ> inner{{f.kind() == FormulaKind::BExists, f.var(), f.bound()}};
                return pull_through(inner, std::move(p));
            }
            default: return Prenex{true, {}, f};
        }
    }

    Var fresh(const Var& base = "W") {
        Var v = fresh_var(base, used_, true);
        used_.insert(v);
        return v;
    }

    std::set<Var>& used() { return used_; }

private:
    // Moves every unbounded block of p outward past the bounded quantifiers
    // in `outer` (outermost first).
    Prenex pull_through(std::vector<BoundedQ> outer, Prenex p) {
        for (std::size_t j = 0; j < p.slots.size(); ++j) {
            const bool ex = slot_is_exists(p, j);
            const bool commutes = std::all_of(outer.begin(), outer.end(), [&](const BoundedQ& q) { return q.exists == ex; });
            if (commutes || p.slots[j].empty()) continue;
            const Var big = fresh();
            for (const Var& v : p.slots[j]) outer.push_back(BoundedQ{ex, v, Term::var(big)});
            p.slots[j] = {big};
        }
        Formula m = p.matrix;
        for (auto it = outer.rbegin(); it != outer.rend(); ++it) {
            m = it->exists ? Formula::bexists(it->x, it->bound, m) : Formula::bforall(it->x, it->bound, m);
        }
        p.matrix = m;
        return p;
    }

    std::set<Var> used_;
};

}  // namespace

Formula nnf(const Formula& f) { return push_neg(desugar(f), false); }

bool is_level_zero(const Formula& f) { return !has_unbounded(f); }

HierarchyLevel classify(const Formula& f) {
    const Levels l = normalize(levels(nnf(f)));
    HierarchyLevel out;
    out.n = std::min(l.sigma, l.pi);
    out.kind = l.pi < l.sigma ? HKind::Pi : HKind::Sigma;
    out.both = l.sigma == l.pi;

    // Strict shape: alternating blocks of unbounded quantifiers, then a
    // matrix with none.
    const Formula* cur = &f;
    unsigned blocks = 0;
    bool first_exists = true;
    FormulaKind last = FormulaKind::True;
    while (cur->is_unbounded_quantifier()) {
        if (blocks == 0) first_exists = cur->kind() == FormulaKind::Exists;
        if (blocks == 0 || cur->kind() != last) ++blocks;
        last = cur->kind();
        cur = &cur->body();
    }
    const bool kind_ok = blocks == 0 || out.both || first_exists == (out.kind == HKind::Sigma);
    out.strict = !has_unbounded(*cur) && blocks == out.n && kind_ok;
    return out;
}

Formula prenexify(const Formula& f) {
    Prenexer px(f);
    std::set<Var> seen = free_vars(f);
    const Formula renamed = px.rename_apart(nnf(f), seen);
    for (const Var& v : seen) px.used().insert(v);
    const HierarchyLevel level = classify(f);
    Prenex p = px.run(renamed, level.both ? std::nullopt : std::optional<bool>(level.kind == HKind::Sigma));

    Formula out = p.matrix;
    for (std::size_t j = p.slots.size(); j-- > 0;) {
        const bool ex = slot_is_exists(p, j);
        const auto& vs = p.slots[j];
        out = ex ? Formula::exists_all(vs, out) : Formula::forall_all(vs, out);
    }
    return out;
}

}  // namespace hoarith
