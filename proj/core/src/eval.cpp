#include "hoarith/eval.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

namespace hoarith {

TriState TriState::negated() const {
    switch (value_) {
        case Value::True: return no();
        case Value::False: return yes();
        default: return *this;
    }
}

std::string TriState::to_string() const {
    switch (value_) {
        case Value::True: return "true";
        case Value::False: return "false";
        default: return "unknown(" + reason_ + ")";
    }
}

namespace {

// Scoped environment: quantifier bindings pushed over an immutable base.
class Env {
public:
    explicit Env(const VarAssignment& base) : base_(base) {}

    [[nodiscard]] const Nat& lookup(const Var& x) const {
        static const Nat zero;
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            if (*it->first == x) return it->second;
        }
        const Nat* v = base_.find(x);
        return v ? *v : zero;
    }

    void push(const Var& x, Nat v) { stack_.emplace_back(&x, std::move(v)); }
    void set_top(Nat v) { stack_.back().second = std::move(v); }
    void pop() { stack_.pop_back(); }

private:
    const VarAssignment& base_;
    std::vector<std::pair<const Var*, Nat>> stack_;
};

Nat eval_term_env(const Term& t, const Env& env) {
    switch (t.kind()) {
        case TermKind::Zero: return Nat{};
        case TermKind::One: return Nat{1u};
        case TermKind::Literal: return t.value();
        case TermKind::Var: return env.lookup(t.name());
        case TermKind::Sum: return eval_term_env(t.lhs(), env) + eval_term_env(t.rhs(), env);
        case TermKind::Product: {
            Nat a = eval_term_env(t.lhs(), env);
            if (a.is_zero()) return a;
            return a * eval_term_env(t.rhs(), env);
        }
    }
    return Nat{};
}

// --- candidate narrowing -------------------------------------------------------
//
// A term with nonnegative coefficients is, as a function of one variable x, a
// polynomial with nonnegative coefficients: either constant or strictly
// increasing. So each atom mentioning x on one side only restricts x to an
// interval, which lets quantifier search skip values that are certainly
// refuted by a top-level conjunct of the body.

constexpr std::size_t kMaxDegree = 12;

using Poly = std::vector<Nat>;

Nat poly_eval(const Poly& p, const Nat& x) {
    Nat acc;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// Least x with p(x) >= r, for strictly increasing p (degree >= 1).
Nat least_at_least(const Poly& p, const Nat& r) {
    if (poly_eval(p, Nat{}) >= r) return Nat{};
    if (p.size() == 2) {
        const Nat need = r - p[0];
        return (need + p[1] - 1) / p[1];
    }
    Nat x;
    if (p.size() == 3) {
        // c2 x^2 + c1 x + c0 >= r via the quadratic formula, then correct.
        const Nat disc = p[1] * p[1] + Nat{4u} * p[2] * (r - p[0]);
        const Nat root = isqrt(disc);
        x = root > p[1] ? (root - p[1]) / (Nat{2u} * p[2]) : Nat{};
        while (!x.is_zero() && poly_eval(p, x - 1) >= r) x = x - 1;
        while (poly_eval(p, x) < r) x += 1;
        return x;
    }
    Nat hi{1u};
    while (poly_eval(p, hi) < r) hi *= 2;
    Nat lo = hi / 2;  // p(lo) < r unless lo == 0, and p(0) < r here
    while (hi - lo > 1) {
        Nat mid = (lo + hi) / 2;
        if (poly_eval(p, mid) >= r) hi = std::move(mid);
        else lo = std::move(mid);
    }
    return hi;
}

struct Interval {
    Nat lo;
    std::optional<Nat> hi;  // exclusive; nullopt = unbounded
    bool empty = false;

    void restrict_lo(const Nat& v) {
        if (v > lo) lo = v;
        check();
    }
    void restrict_hi(const Nat& v) {
        if (!hi || v < *hi) hi = v;
        check();
    }
    void check() {
        if (hi && *hi <= lo) empty = true;
    }
};

struct Constraint {
    const Formula* atom;
    bool polarity;
};

// Collects atoms that must have the given truth value whenever f does.
// Returns false when f can certainly not take that value.
bool mentions_any(const Formula& atom, const std::vector<Var>& vars) {
    return std::any_of(vars.begin(), vars.end(),
                       [&](const Var& v) { return occurs_in(v, atom.left()) || occurs_in(v, atom.right()); });
}

// Atoms whose truth value `want` is necessary for f to evaluate to `want`.
// Looks through quantifiers of the matching kind; atoms mentioning their
// variables (listed in `inner`) are dropped.
bool collect_constraints(const Formula& f, bool want, std::vector<Constraint>& out, std::vector<Var>& inner) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            if (!mentions_any(f, inner)) out.push_back({&f, want});
            return true;
        case FormulaKind::True: return want;
        case FormulaKind::False: return !want;
        case FormulaKind::Not: return collect_constraints(f.sub(), !want, out, inner);
        case FormulaKind::And:
            if (want)
                return collect_constraints(f.first(), true, out, inner) &&
                       collect_constraints(f.second(), true, out, inner);
            return true;
        case FormulaKind::Or:
            if (!want)
                return collect_constraints(f.first(), false, out, inner) &&
                       collect_constraints(f.second(), false, out, inner);
            return true;
        case FormulaKind::Implies:
            if (!want)
                return collect_constraints(f.first(), true, out, inner) &&
                       collect_constraints(f.second(), false, out, inner);
            return true;
        case FormulaKind::Exists:
        case FormulaKind::BExists:
        case FormulaKind::Forall:
        case FormulaKind::BForall: {
            const bool existential = f.kind() == FormulaKind::Exists || f.kind() == FormulaKind::BExists;
            if (existential != want) return true;
            inner.push_back(f.var());
            const bool possible = collect_constraints(f.body(), want, out, inner);
            inner.pop_back();
            return possible;
        }
        default: return true;
    }
}

bool collect_constraints(const Formula& f, bool want, std::vector<Constraint>& out) {
    std::vector<Var> inner;
    return collect_constraints(f, want, out, inner);
}

bool is_literal(const Formula& f) {
    if (f.kind() == FormulaKind::Not) return f.sub().is_atom();
    return f.is_atom();
}

// Polynomial in x with coefficient terms free of x, expanded once per atom.
using SymPoly = std::vector<Term>;

bool sym_poly(const Term& t, const Var& x, SymPoly& out) {
    switch (t.kind()) {
        case TermKind::Var:
            if (t.name() == x) out = {Term::zero(), Term::one()};
            else out = {t};
            return true;
        case TermKind::Sum: {
            SymPoly a;
            SymPoly b;
            if (!sym_poly(t.lhs(), x, a) || !sym_poly(t.rhs(), x, b)) return false;
            if (a.size() < b.size()) std::swap(a, b);
            for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] + b[i];
            out = std::move(a);
            return true;
        }
        case TermKind::Product: {
            SymPoly a;
            SymPoly b;
            if (!sym_poly(t.lhs(), x, a) || !sym_poly(t.rhs(), x, b)) return false;
            if (a.size() + b.size() - 1 > kMaxDegree + 1) return false;
            std::vector<std::optional<Term>> r(a.size() + b.size() - 1);
            for (std::size_t i = 0; i < a.size(); ++i) {
                for (std::size_t j = 0; j < b.size(); ++j) {
                    Term prod = a[i] * b[j];
                    r[i + j] = r[i + j] ? *r[i + j] + prod : prod;
                }
            }
            out.clear();
            for (auto& c : r) out.push_back(c ? std::move(*c) : Term::zero());
            return true;
        }
        default: out = {t}; return true;
    }
}

void collect_names(const Term& t, std::vector<Var>& out) {
    switch (t.kind()) {
        case TermKind::Var:
            if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
            return;
        case TermKind::Sum:
        case TermKind::Product:
            collect_names(t.lhs(), out);
            collect_names(t.rhs(), out);
            return;
        default: return;
    }
}

// One top-level atom of a quantifier body, prepared for narrowing on x.
struct Prepared {
    bool polarity = true;
    bool is_eq = true;
    bool in_left = true;  // x occurs on the left side only (else the right only)
    SymPoly poly;         // the side containing x
    Term other;           // the side free of x
    std::vector<Var> names;  // every variable of the atom, for the unassigned check
};

struct PreparedBody {
    bool impossible = false;  // the body can never take the wanted value
    std::vector<Prepared> atoms;
};

PreparedBody prepare(const Formula& body, bool want, const Var& x) {
    PreparedBody pb;
    std::vector<Constraint> cs;
    if (!collect_constraints(body, want, cs)) {
        pb.impossible = true;
        return pb;
    }
    for (const Constraint& c : cs) {
        const Formula& a = *c.atom;
        const bool in_left = occurs_in(x, a.left());
        const bool in_right = occurs_in(x, a.right());
        if (in_left == in_right) continue;
        Prepared p;
        p.polarity = c.polarity;
        p.is_eq = a.kind() == FormulaKind::Eq;
        p.in_left = in_left;
        if (!sym_poly(in_left ? a.left() : a.right(), x, p.poly)) continue;
        p.other = in_left ? a.right() : a.left();
        collect_names(a.left(), p.names);
        collect_names(a.right(), p.names);
        pb.atoms.push_back(std::move(p));
    }
    return pb;
}

// Restricts iv to the values of x compatible with one prepared atom.
void apply_prepared(const Prepared& c, const Env& env, const std::vector<const Var*>& unassigned, Poly& p,
                    Interval& iv) {
    for (const Var* u : unassigned) {
        if (std::find(c.names.begin(), c.names.end(), *u) != c.names.end()) return;
    }
    p.clear();
    for (const Term& t : c.poly) p.push_back(eval_term_env(t, env));
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
    const Nat other = eval_term_env(c.other, env);

    if (p.size() == 1) {
        // Truth of the atom does not depend on x.
        bool holds = false;
        if (c.is_eq) holds = p[0] == other;
        else holds = c.in_left ? p[0] < other : other < p[0];
        if (holds != c.polarity) iv.empty = true;
        return;
    }

    if (c.is_eq) {
        if (!c.polarity) return;
        const Nat s = least_at_least(p, other);
        if (poly_eval(p, s) != other) {
            iv.empty = true;
            return;
        }
        iv.restrict_lo(s);
        iv.restrict_hi(s + 1);
        return;
    }
    // Lt: encode as p(x) < bound (prefix) or p(x) >= bound (suffix).
    if (c.in_left == c.polarity) {
        // in_left & true:  p(x) < other.   in_right & false: p(x) <= other.
        iv.restrict_hi(least_at_least(p, c.polarity ? other : other + 1));
    } else {
        // in_right & true: p(x) > other.   in_left & false: p(x) >= other.
        iv.restrict_lo(least_at_least(p, c.polarity ? other + 1 : other));
    }
}

struct PrepKey {
    const void* body;
    const Var* x;
    bool want;
    friend bool operator==(const PrepKey&, const PrepKey&) = default;
};

struct PrepKeyHash {
    std::size_t operator()(const PrepKey& k) const noexcept {
        const auto h1 = std::hash<const void*>{}(k.body);
        const auto h2 = std::hash<const void*>{}(k.x);
        return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::size_t>(k.want);
    }
};

// Prepared bodies live as long as the formula being evaluated, so node
// addresses are stable keys for one evaluation.
class Narrower {
public:
    Interval narrow(const Formula& body, bool want, const Var& x, const Env& env,
                    const std::vector<const Var*>& unassigned = {}) {
        auto [it, fresh] = cache_.try_emplace(PrepKey{body.id(), &x, want});
        if (fresh) it->second = prepare(body, want, x);
        const PreparedBody& pb = it->second;
        Interval iv;
        if (pb.impossible) {
            iv.empty = true;
            return iv;
        }
        for (const Prepared& c : pb.atoms) {
            apply_prepared(c, env, unassigned, scratch_, iv);
            if (iv.empty) break;
        }
        return iv;
    }

private:
    std::unordered_map<PrepKey, PreparedBody, PrepKeyHash> cache_;
    Poly scratch_;
};

// --- evaluation ------------------------------------------------------------------

class Evaluator {
public:
    Evaluator(const VarAssignment& v, const Budget& b) : env_(v), budget_(b) {}

    TriState eval(const Formula& f) {
        if (++depth_ > budget_.max_depth) {
            --depth_;
            return TriState::unknown("depth guard exceeded");
        }
        TriState r = eval_inner(f);
        --depth_;
        return r;
    }

    Env& env() { return env_; }
    Narrower& narrower() { return narrower_; }

private:
    TriState eval_inner(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::Eq:
                return TriState::of(eval_term_env(f.left(), env_) == eval_term_env(f.right(), env_));
            case FormulaKind::Lt:
                return TriState::of(eval_term_env(f.left(), env_) < eval_term_env(f.right(), env_));
            case FormulaKind::True: return TriState::yes();
            case FormulaKind::False: return TriState::no();
            case FormulaKind::Not: return eval(f.sub()).negated();
            case FormulaKind::And:
            case FormulaKind::Or: {
                // Both connectives are commutative in the Kleene tables, so a
                // literal right operand is tried first as a cheap short cut.
                const bool swap = is_literal(f.second()) && !is_literal(f.first());
                const Formula& p = swap ? f.second() : f.first();
                const Formula& q = swap ? f.first() : f.second();
                const bool is_and = f.kind() == FormulaKind::And;
                TriState a = eval(p);
                if (is_and ? a.is_false() : a.is_true()) return a;
                TriState b = eval(q);
                if (is_and ? b.is_false() : b.is_true()) return b;
                return a.is_unknown() ? a : b;
            }
            case FormulaKind::Implies: {
                TriState a = eval(f.first());
                if (a.is_false()) return TriState::yes();
                TriState b = eval(f.second());
                if (b.is_true()) return b;
                if (a.is_unknown()) return a;
                return b;
            }
            case FormulaKind::Iff: {
                TriState a = eval(f.first());
                if (a.is_unknown()) return a;
                TriState b = eval(f.second());
                if (b.is_unknown()) return b;
                return TriState::of(a.is_true() == b.is_true());
            }
            case FormulaKind::BExists:
            case FormulaKind::BForall: return eval_bounded(f);
            case FormulaKind::Exists:
            case FormulaKind::Forall: return eval_unbounded(f);
        }
        return TriState::unknown("unreachable");
    }

    // Searches for a deciding value of the bound variable over [lo, hi).
    // existential: a True body decides; universal: a False body decides.
    // The reason for an undecided search is built only when needed.
    template <class Reason>
    TriState search(const Formula& f, bool existential, Nat lo, const Nat& hi, bool exhaustive,
                    const Reason& exhausted_reason) {
        std::optional<TriState> unknown;
        env_.push(f.var(), lo);
        for (Nat x = std::move(lo); x < hi; x += 1) {
            env_.set_top(x);
            TriState r = eval(f.body());
            if (existential ? r.is_true() : r.is_false()) {
                env_.pop();
                return r;
            }
            if (r.is_unknown() && !unknown) unknown = std::move(r);
        }
        env_.pop();
        if (unknown) return *unknown;
        if (exhaustive) return existential ? TriState::no() : TriState::yes();
        return TriState::unknown(exhausted_reason());
    }

    TriState eval_bounded(const Formula& f) {
        const bool existential = f.kind() == FormulaKind::BExists;
        const Nat bound = eval_term_env(f.bound(), env_);
        Interval iv = narrower_.narrow(f.body(), existential, f.var(), env_);
        if (iv.empty) return existential ? TriState::no() : TriState::yes();
        const Nat hi = iv.hi && *iv.hi < bound ? *iv.hi : bound;
        return search(f, existential, iv.lo, hi, true, [] { return std::string{}; });
    }

    TriState eval_unbounded(const Formula& f) {
        const bool existential = f.kind() == FormulaKind::Exists;
        Interval iv = narrower_.narrow(f.body(), existential, f.var(), env_);
        if (iv.empty) return existential ? TriState::no() : TriState::yes();
        const Nat window = budget_.q_bound + 1;
        const Nat limit = iv.lo + window;
        const bool exhaustive = iv.hi && *iv.hi <= limit;
        const Nat hi = exhaustive ? *iv.hi : limit;
        auto reason = [&] {
            const std::string what = existential ? "no witness" : "no counterexample";
            if (iv.lo.is_zero()) return what + " \xe2\x89\xa4 " + budget_.q_bound.to_string();
            return what + " for " + f.var() + " <= " + (hi - 1).to_string();
        };
        return search(f, existential, iv.lo, hi, exhaustive, reason);
    }

    Env env_;
    Narrower narrower_;
    const Budget& budget_;
    std::size_t depth_ = 0;
};

}  // namespace

Nat eval_term(const Term& t, const VarAssignment& v) {
    Env env(v);
    return eval_term_env(t, env);
}

TriState eval_formula(const Formula& f, const VarAssignment& v, const Budget& b) {
    Evaluator ev(v, b);
    return ev.eval(f);
}

namespace {

bool witness_search(Evaluator& ev, const std::vector<const Var*>& block, std::size_t i, const Formula& body,
                    const Budget& b, Witnesses& acc) {
    if (i == block.size()) {
        TriState r = ev.eval(body);
        if (r.is_unknown()) {
            std::string at;
            for (const auto& [x, n] : acc) at += (at.empty() ? "" : ", ") + x + "=" + n.to_string();
            throw NotExactError("find_witnesses: body not exactly evaluable at (" + at + "): " + r.reason());
        }
        return r.is_true();
    }
    const std::vector<const Var*> later(block.begin() + static_cast<std::ptrdiff_t>(i) + 1, block.end());
    Interval iv = ev.narrower().narrow(body, true, *block[i], ev.env(), later);
    if (iv.empty) return false;
    const Nat limit = iv.lo + b.q_bound + 1;
    const Nat hi = iv.hi && *iv.hi < limit ? *iv.hi : limit;
    ev.env().push(*block[i], iv.lo);
    for (Nat x = iv.lo; x < hi; x += 1) {
        ev.env().set_top(x);
        acc.emplace_back(*block[i], x);
        if (witness_search(ev, block, i + 1, body, b, acc)) {
            ev.env().pop();
            return true;
        }
        acc.pop_back();
    }
    ev.env().pop();
    return false;
}

}  // namespace

std::optional<Witnesses> find_witnesses(const Formula& f, const VarAssignment& v, const Budget& b) {
    std::vector<const Var*> block;
    const Formula* body = &f;
    while (body->kind() == FormulaKind::Exists) {
        block.push_back(&body->var());
        body = &body->body();
    }
    // Later-block variables that are not yet assigned must not be read as 0
    // during narrowing, so they are excluded via the "unassigned" list.
    Evaluator ev(v, b);
    Witnesses acc;
    if (!witness_search(ev, block, 0, *body, b, acc)) return std::nullopt;
    return acc;
}

}  // namespace hoarith
