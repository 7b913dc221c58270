#include "hoarith/syntax.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace hoarith {

// --- Term ------------------------------------------------------------------

Term::Term() {
    static const Term z = [] {
        auto node = std::shared_ptr<Node>(new Node{TermKind::Zero, Nat{}, Var{}, Term(nullptr), Term(nullptr)});
        return Term(std::move(node));
    }();
    n_ = z.n_;
}

Term Term::zero() { return Term(); }

Term Term::one() {
    static const Term o(std::shared_ptr<const Node>(new Node{TermKind::One, Nat{1}, Var{}, Term(nullptr), Term(nullptr)}));
    return o;
}

Term Term::literal(Nat n) {
    return Term(std::shared_ptr<const Node>(new Node{TermKind::Literal, std::move(n), Var{}, Term(nullptr), Term(nullptr)}));
}

Term Term::var(Var name) {
    if (name.empty()) throw std::invalid_argument("Term::var: empty variable name");
    return Term(std::shared_ptr<const Node>(new Node{TermKind::Var, Nat{}, std::move(name), Term(nullptr), Term(nullptr)}));
}

Term Term::sum(Term a, Term b) {
    return Term(std::shared_ptr<const Node>(new Node{TermKind::Sum, Nat{}, Var{}, std::move(a), std::move(b)}));
}

Term Term::product(Term a, Term b) {
    return Term(std::shared_ptr<const Node>(new Node{TermKind::Product, Nat{}, Var{}, std::move(a), std::move(b)}));
}

// --- Formula -------------------------------------------------------------------

Formula::Formula() {
    static const Formula t(std::shared_ptr<const Node>(
        new Node{FormulaKind::True, Term(), Term(), Formula(nullptr), Formula(nullptr), Var{}}));
    n_ = t.n_;
}

Formula Formula::make(FormulaKind k, Term t1, Term t2, Formula a, Formula b, Var v) {
    return Formula(std::shared_ptr<const Node>(
        new Node{k, std::move(t1), std::move(t2), std::move(a), std::move(b), std::move(v)}));
}

Formula Formula::eq(Term a, Term b) {
    return make(FormulaKind::Eq, std::move(a), std::move(b), Formula(nullptr), Formula(nullptr), {});
}
Formula Formula::lt(Term a, Term b) {
    return make(FormulaKind::Lt, std::move(a), std::move(b), Formula(nullptr), Formula(nullptr), {});
}
Formula Formula::top() { return Formula(); }
Formula Formula::bottom() {
    static const Formula f = make(FormulaKind::False, Term(), Term(), Formula(nullptr), Formula(nullptr), {});
    return f;
}
Formula Formula::neg(Formula f) {
    return make(FormulaKind::Not, Term(), Term(), std::move(f), Formula(nullptr), {});
}
Formula Formula::conj(Formula a, Formula b) {
    return make(FormulaKind::And, Term(), Term(), std::move(a), std::move(b), {});
}
Formula Formula::disj(Formula a, Formula b) {
    return make(FormulaKind::Or, Term(), Term(), std::move(a), std::move(b), {});
}
Formula Formula::implies(Formula a, Formula b) {
    return make(FormulaKind::Implies, Term(), Term(), std::move(a), std::move(b), {});
}
Formula Formula::iff(Formula a, Formula b) {
    return make(FormulaKind::Iff, Term(), Term(), std::move(a), std::move(b), {});
}
Formula Formula::forall(Var x, Formula body) {
    if (x.empty()) throw std::invalid_argument("forall: empty variable name");
    return make(FormulaKind::Forall, Term(), Term(), std::move(body), Formula(nullptr), std::move(x));
}
Formula Formula::exists(Var x, Formula body) {
    if (x.empty()) throw std::invalid_argument("exists: empty variable name");
    return make(FormulaKind::Exists, Term(), Term(), std::move(body), Formula(nullptr), std::move(x));
}
Formula Formula::bforall(Var x, Term bound, Formula body) {
    if (x.empty()) throw std::invalid_argument("bounded forall: empty variable name");
    if (occurs_in(x, bound)) throw std::invalid_argument("bounded forall: bound term mentions " + x);
    return make(FormulaKind::BForall, std::move(bound), Term(), std::move(body), Formula(nullptr), std::move(x));
}
Formula Formula::bexists(Var x, Term bound, Formula body) {
    if (x.empty()) throw std::invalid_argument("bounded exists: empty variable name");
    if (occurs_in(x, bound)) throw std::invalid_argument("bounded exists: bound term mentions " + x);
    return make(FormulaKind::BExists, std::move(bound), Term(), std::move(body), Formula(nullptr), std::move(x));
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

Formula Formula::exists_all(const std::vector<Var>& xs, Formula body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

Formula Formula::forall_all(const std::vector<Var>& xs, Formula body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = forall(*it, std::move(body));
    return body;
}

bool Formula::is_atom() const noexcept {
    const auto k = kind();
    return k == FormulaKind::Eq || k == FormulaKind::Lt || k == FormulaKind::True || k == FormulaKind::False;
}

bool Formula::is_binary() const noexcept {
    const auto k = kind();
    return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies || k == FormulaKind::Iff;
}

bool Formula::is_quantifier() const noexcept { return is_bounded_quantifier() || is_unbounded_quantifier(); }

bool Formula::is_bounded_quantifier() const noexcept {
    return kind() == FormulaKind::BForall || kind() == FormulaKind::BExists;
}

bool Formula::is_unbounded_quantifier() const noexcept {
    return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists;
}

// --- VarAssignment -----------------------------------------------------------

Nat VarAssignment::get(const Var& x) const {
    auto it = values_.find(x);
    return it == values_.end() ? Nat{} : it->second;
}

const Nat* VarAssignment::find(const Var& x) const noexcept {
    auto it = values_.find(x);
    return it == values_.end() ? nullptr : &it->second;
}

VarAssignment VarAssignment::with(const Var& x, Nat value) const {
    auto copy = values_;
    copy[x] = std::move(value);
    return VarAssignment(std::move(copy));
}

// --- helpers -------------------------------------------------------------------

Term mk_numeral(const Nat& n) { return Term::literal(n); }

Term expand_to_core(const Term& t) {
    switch (t.kind()) {
        case TermKind::Zero:
        case TermKind::One:
        case TermKind::Var:
            return t;
        case TermKind::Literal: {
            if (t.value().is_zero()) return Term::zero();
            const auto n = t.value().to_u64();
            if (!n) throw std::length_error("expand_to_core: literal too large to expand");
            Term acc = Term::one();
            for (std::uint64_t i = 1; i < *n; ++i) acc = Term::sum(acc, Term::one());
            return acc;
        }
        case TermKind::Sum: return Term::sum(expand_to_core(t.lhs()), expand_to_core(t.rhs()));
        case TermKind::Product: return Term::product(expand_to_core(t.lhs()), expand_to_core(t.rhs()));
    }
    return t;
}

Formula expand_to_core(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Eq: return Formula::eq(expand_to_core(f.left()), expand_to_core(f.right()));
        case FormulaKind::Lt: return Formula::lt(expand_to_core(f.left()), expand_to_core(f.right()));
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::Not: return Formula::neg(expand_to_core(f.sub()));
        case FormulaKind::And: return Formula::conj(expand_to_core(f.first()), expand_to_core(f.second()));
        case FormulaKind::Or: return Formula::disj(expand_to_core(f.first()), expand_to_core(f.second()));
        case FormulaKind::Implies: return Formula::implies(expand_to_core(f.first()), expand_to_core(f.second()));
        case FormulaKind::Iff: return Formula::iff(expand_to_core(f.first()), expand_to_core(f.second()));
        case FormulaKind::Forall: return Formula::forall(f.var(), expand_to_core(f.body()));
        case FormulaKind::Exists: return Formula::exists(f.var(), expand_to_core(f.body()));
        case FormulaKind::BForall:
            return Formula::bforall(f.var(), expand_to_core(f.bound()), expand_to_core(f.body()));
        case FormulaKind::BExists:
            return Formula::bexists(f.var(), expand_to_core(f.bound()), expand_to_core(f.body()));
    }
    return f;
}

namespace {

void collect_term_vars(const Term& t, std::set<Var>& out) {
    switch (t.kind()) {
        case TermKind::Var: out.insert(t.name()); break;
        case TermKind::Sum:
        case TermKind::Product:
            collect_term_vars(t.lhs(), out);
            collect_term_vars(t.rhs(), out);
            break;
        default: break;
    }
}

void collect_term_vars_ordered(const Term& t, const std::vector<Var>& bound, std::vector<Var>& out,
                               std::set<Var>& seen) {
    switch (t.kind()) {
        case TermKind::Var:
            if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() && seen.insert(t.name()).second) {
                out.push_back(t.name());
            }
            break;
        case TermKind::Sum:
        case TermKind::Product:
            collect_term_vars_ordered(t.lhs(), bound, out, seen);
            collect_term_vars_ordered(t.rhs(), bound, out, seen);
            break;
        default: break;
    }
}

void collect_free(const Formula& f, std::vector<Var>& bound, std::vector<Var>& out, std::set<Var>& seen) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            collect_term_vars_ordered(f.left(), bound, out, seen);
            collect_term_vars_ordered(f.right(), bound, out, seen);
            break;
        case FormulaKind::True:
        case FormulaKind::False: break;
        case FormulaKind::Not: collect_free(f.sub(), bound, out, seen); break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            collect_free(f.first(), bound, out, seen);
            collect_free(f.second(), bound, out, seen);
            break;
        case FormulaKind::BForall:
        case FormulaKind::BExists:
            collect_term_vars_ordered(f.bound(), bound, out, seen);
            [[fallthrough]];
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            bound.push_back(f.var());
            collect_free(f.body(), bound, out, seen);
            bound.pop_back();
            break;
    }
}

void collect_all(const Formula& f, std::set<Var>& out) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            collect_term_vars(f.left(), out);
            collect_term_vars(f.right(), out);
            break;
        case FormulaKind::True:
        case FormulaKind::False: break;
        case FormulaKind::Not: collect_all(f.sub(), out); break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            collect_all(f.first(), out);
            collect_all(f.second(), out);
            break;
        case FormulaKind::BForall:
        case FormulaKind::BExists:
            collect_term_vars(f.bound(), out);
            [[fallthrough]];
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            out.insert(f.var());
            collect_all(f.body(), out);
            break;
    }
}

}  // namespace

std::set<Var> free_vars(const Term& t) {
    std::set<Var> out;
    collect_term_vars(t, out);
    return out;
}

std::vector<Var> free_vars_ordered(const Formula& f) {
    std::vector<Var> bound;
    std::vector<Var> out;
    std::set<Var> seen;
    collect_free(f, bound, out, seen);
    return out;
}

std::set<Var> free_vars(const Formula& f) {
    auto ordered = free_vars_ordered(f);
    return {ordered.begin(), ordered.end()};
}

std::set<Var> all_vars(const Formula& f) {
    std::set<Var> out;
    collect_all(f, out);
    return out;
}

bool occurs_in(const Var& x, const Term& t) {
    switch (t.kind()) {
        case TermKind::Var: return t.name() == x;
        case TermKind::Sum:
        case TermKind::Product: return occurs_in(x, t.lhs()) || occurs_in(x, t.rhs());
        default: return false;
    }
}

Var fresh_var(const Var& base, const std::set<Var>& avoid, bool allow_base) {
    if (allow_base && avoid.count(base) == 0) return base;
    Var candidate = base + "'";
    while (avoid.count(candidate) != 0) candidate += "'";
    return candidate;
}

// --- substitution ----------------------------------------------------------------

Term substitute(const Term& t, const Substitution& pairs) {
    switch (t.kind()) {
        case TermKind::Var:
            for (const auto& [x, s] : pairs) {
                if (x == t.name()) return s;
            }
            return t;
        case TermKind::Sum:
        case TermKind::Product: {
            Term a = substitute(t.lhs(), pairs);
            Term b = substitute(t.rhs(), pairs);
            return t.kind() == TermKind::Sum ? Term::sum(std::move(a), std::move(b))
                                             : Term::product(std::move(a), std::move(b));
        }
        default: return t;
    }
}

namespace {

Formula subst(const Formula& f, const Substitution& pairs);

Formula subst_binder(const Formula& f, const Substitution& pairs) {
    const bool bounded = f.is_bounded_quantifier();
    Term new_bound = bounded ? substitute(f.bound(), pairs) : Term();
    const std::set<Var> body_free = free_vars(f.body());

    // Only pairs acting on variables free in the body matter below the binder.
    Substitution inner;
    for (const auto& p : pairs) {
        if (p.first != f.var() && body_free.count(p.first) != 0) inner.push_back(p);
    }

    std::set<Var> range_vars;
    for (const auto& p : inner) collect_term_vars(p.second, range_vars);
    const bool captured = range_vars.count(f.var()) != 0 || (bounded && occurs_in(f.var(), new_bound));

    Var x = f.var();
    if (captured) {
        std::set<Var> avoid = body_free;
        avoid.insert(range_vars.begin(), range_vars.end());
        if (bounded) collect_term_vars(new_bound, avoid);
        for (const auto& p : inner) avoid.insert(p.first);
        x = fresh_var(f.var(), avoid);
        inner.emplace_back(f.var(), Term::var(x));
    }

    Formula body = inner.empty() ? f.body() : subst(f.body(), inner);
    switch (f.kind()) {
        case FormulaKind::Forall: return Formula::forall(x, std::move(body));
        case FormulaKind::Exists: return Formula::exists(x, std::move(body));
        case FormulaKind::BForall: return Formula::bforall(x, std::move(new_bound), std::move(body));
        default: return Formula::bexists(x, std::move(new_bound), std::move(body));
    }
}

Formula subst(const Formula& f, const Substitution& pairs) {
    switch (f.kind()) {
        case FormulaKind::Eq: return Formula::eq(substitute(f.left(), pairs), substitute(f.right(), pairs));
        case FormulaKind::Lt: return Formula::lt(substitute(f.left(), pairs), substitute(f.right(), pairs));
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::Not: return Formula::neg(subst(f.sub(), pairs));
        case FormulaKind::And: return Formula::conj(subst(f.first(), pairs), subst(f.second(), pairs));
        case FormulaKind::Or: return Formula::disj(subst(f.first(), pairs), subst(f.second(), pairs));
        case FormulaKind::Implies: return Formula::implies(subst(f.first(), pairs), subst(f.second(), pairs));
        case FormulaKind::Iff: return Formula::iff(subst(f.first(), pairs), subst(f.second(), pairs));
        default: return subst_binder(f, pairs);
    }
}

}  // namespace

Formula substitute(const Formula& f, const Substitution& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            if (pairs[i].first == pairs[j].first) {
                throw std::invalid_argument("substitute: duplicate target variable " + pairs[i].first);
            }
        }
    }
    if (pairs.empty()) return f;
    return subst(f, pairs);
}

Formula substitute(const Formula& f, const Var& x, const Term& t) { return substitute(f, Substitution{{x, t}}); }

// --- comparison --------------------------------------------------------------------

namespace {

// Zero/One and Literal(0)/Literal(1) compare equal.
bool numeral_value(const Term& t, Nat& out) {
    switch (t.kind()) {
        case TermKind::Zero: out = 0; return true;
        case TermKind::One: out = 1; return true;
        case TermKind::Literal: out = t.value(); return true;
        default: return false;
    }
}

long bound_index(const std::vector<Var>& stack, const Var& x) {
    for (std::size_t i = stack.size(); i-- > 0;) {
        if (stack[i] == x) return static_cast<long>(i);
    }
    return -1;
}

bool terms_alpha(const Term& a, const Term& b, const std::vector<Var>& sa, const std::vector<Var>& sb) {
    Nat va;
    Nat vb;
    const bool na = numeral_value(a, va);
    const bool nb = numeral_value(b, vb);
    if (na || nb) return na && nb && va == vb;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::Var: {
            const long ia = bound_index(sa, a.name());
            const long ib = bound_index(sb, b.name());
            if (ia != ib) return false;
            return ia >= 0 || a.name() == b.name();
        }
        case TermKind::Sum:
        case TermKind::Product:
            return terms_alpha(a.lhs(), b.lhs(), sa, sb) && terms_alpha(a.rhs(), b.rhs(), sa, sb);
        default: return false;
    }
}

bool formulas_alpha(const Formula& a, const Formula& b, std::vector<Var>& sa, std::vector<Var>& sb) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            return terms_alpha(a.left(), b.left(), sa, sb) && terms_alpha(a.right(), b.right(), sa, sb);
        case FormulaKind::True:
        case FormulaKind::False: return true;
        case FormulaKind::Not: return formulas_alpha(a.sub(), b.sub(), sa, sb);
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            return formulas_alpha(a.first(), b.first(), sa, sb) && formulas_alpha(a.second(), b.second(), sa, sb);
        case FormulaKind::BForall:
        case FormulaKind::BExists:
            if (!terms_alpha(a.bound(), b.bound(), sa, sb)) return false;
            [[fallthrough]];
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            sa.push_back(a.var());
            sb.push_back(b.var());
            const bool ok = formulas_alpha(a.body(), b.body(), sa, sb);
            sa.pop_back();
            sb.pop_back();
            return ok;
        }
    }
    return false;
}

}  // namespace

bool terms_equal(const Term& a, const Term& b) { return terms_alpha(a, b, {}, {}); }

bool alpha_equivalent(const Formula& a, const Formula& b) {
    std::vector<Var> sa;
    std::vector<Var> sb;
    return formulas_alpha(a, b, sa, sb);
}

std::size_t formula_size(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Not:
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::BForall:
        case FormulaKind::BExists: return 1 + formula_size(f.sub());
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: return 1 + formula_size(f.first()) + formula_size(f.second());
        default: return 1;
    }
}

// --- printing ------------------------------------------------------------------------
//
// Precedence (loosest first): <-> (right), -> (right), \/ (left), /\ (left),
// then ~ and atoms. Quantifier bodies run to the end of the enclosing text, so
// a quantifier is parenthesized unless nothing follows it.

namespace {

void print_term(std::ostream& os, const Term& t, int min_prec) {
    switch (t.kind()) {
        case TermKind::Zero: os << '0'; return;
        case TermKind::One: os << '1'; return;
        case TermKind::Literal: os << t.value(); return;
        case TermKind::Var: os << t.name(); return;
        case TermKind::Sum:
        case TermKind::Product: {
            const int prec = t.kind() == TermKind::Sum ? 0 : 1;
            const bool parens = prec < min_prec;
            if (parens) os << '(';
            print_term(os, t.lhs(), prec);
            os << (t.kind() == TermKind::Sum ? " + " : " * ");
            print_term(os, t.rhs(), prec + 1);
            if (parens) os << ')';
            return;
        }
    }
}

int formula_prec(FormulaKind k) {
    switch (k) {
        case FormulaKind::Iff: return 0;
        case FormulaKind::Implies: return 1;
        case FormulaKind::Or: return 2;
        case FormulaKind::And: return 3;
        default: return 4;
    }
}

void print_formula(std::ostream& os, const Formula& f, int min_prec, bool tail) {
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            print_term(os, f.left(), 0);
            os << (f.kind() == FormulaKind::Eq ? " = " : " < ");
            print_term(os, f.right(), 0);
            return;
        case FormulaKind::True: os << "true"; return;
        case FormulaKind::False: os << "false"; return;
        case FormulaKind::Not:
            os << '~';
            if (f.sub().kind() == FormulaKind::Eq || f.sub().kind() == FormulaKind::Lt) {
                os << '(';
                print_formula(os, f.sub(), 0, true);
                os << ')';
            } else {
                print_formula(os, f.sub(), 4, tail);
            }
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: {
            const int prec = formula_prec(f.kind());
            const bool parens = prec < min_prec;
            const bool right_assoc = f.kind() == FormulaKind::Implies || f.kind() == FormulaKind::Iff;
            if (parens) os << '(';
            print_formula(os, f.first(), right_assoc ? prec + 1 : prec, false);
            switch (f.kind()) {
                case FormulaKind::And: os << " /\\ "; break;
                case FormulaKind::Or: os << " \\/ "; break;
                case FormulaKind::Implies: os << " -> "; break;
                default: os << " <-> "; break;
            }
            print_formula(os, f.second(), right_assoc ? prec : prec + 1, parens || tail);
            if (parens) os << ')';
            return;
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::BForall:
        case FormulaKind::BExists: {
            const bool parens = !tail;
            if (parens) os << '(';
            const bool universal = f.kind() == FormulaKind::Forall || f.kind() == FormulaKind::BForall;
            os << (universal ? "forall " : "exists ") << f.var();
            if (f.is_bounded_quantifier()) {
                os << " < ";
                print_term(os, f.bound(), 0);
            }
            os << ". ";
            print_formula(os, f.body(), 0, true);
            if (parens) os << ')';
            return;
        }
    }
}

}  // namespace

std::string to_string(const Term& t) {
    std::ostringstream os;
    print_term(os, t, 0);
    return os.str();
}

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print_formula(os, f, 0, true);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

}  // namespace hoarith
