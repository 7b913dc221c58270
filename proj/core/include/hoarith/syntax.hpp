#pragma once

#include "hoarith/nat.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hoarith {

/// Variable identifier. Generated names may carry trailing primes (x', x'').
using Var = std::string;

enum class TermKind : std::uint8_t { Zero, One, Literal, Var, Sum, Product };

/// Immutable term of the language over {0, 1, +, *}. Cheap to copy.
class Term {
public:
    Term();  // Zero

    static Term zero();
    static Term one();
    static Term literal(Nat n);
    static Term var(Var name);
    static Term sum(Term a, Term b);
    static Term product(Term a, Term b);

    [[nodiscard]] TermKind kind() const noexcept;
    [[nodiscard]] const Nat& value() const noexcept;   // Literal only
    [[nodiscard]] const Var& name() const noexcept;    // Var only
    [[nodiscard]] const Term& lhs() const noexcept;    // Sum / Product
    [[nodiscard]] const Term& rhs() const noexcept;
    [[nodiscard]] bool is_var() const noexcept { return kind() == TermKind::Var; }

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

struct Term::Node {
    TermKind kind;
    Nat value;
    Var name;
    Term a;
    Term b;
};

inline TermKind Term::kind() const noexcept { return n_->kind; }
inline const Nat& Term::value() const noexcept { return n_->value; }
inline const Var& Term::name() const noexcept { return n_->name; }
inline const Term& Term::lhs() const noexcept { return n_->a; }
inline const Term& Term::rhs() const noexcept { return n_->b; }

enum class FormulaKind : std::uint8_t {
    Eq, Lt, True, False, Not, And, Or, Implies, Iff, Forall, Exists, BForall, BExists
};

/// Immutable formula. Bounded quantifiers BForall(x,t,f) / BExists(x,t,f)
/// read "forall x < t. f" and "exists x < t. f"; t must not mention x.
class Formula {
public:
    Formula();  // True

    static Formula eq(Term a, Term b);
    static Formula lt(Term a, Term b);
    static Formula top();
    static Formula bottom();
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula forall(Var x, Formula body);
    static Formula exists(Var x, Formula body);
    /// Throws std::invalid_argument if x occurs in bound.
    static Formula bforall(Var x, Term bound, Formula body);
    static Formula bexists(Var x, Term bound, Formula body);

    /// Left-nested conjunction; empty list gives true.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);
    /// exists x1. exists x2. ... body
    static Formula exists_all(const std::vector<Var>& xs, Formula body);
    static Formula forall_all(const std::vector<Var>& xs, Formula body);

    [[nodiscard]] FormulaKind kind() const noexcept;
    [[nodiscard]] const Term& left() const noexcept;   // Eq / Lt
    [[nodiscard]] const Term& right() const noexcept;  // Eq / Lt
    [[nodiscard]] const Term& bound() const noexcept;  // BForall / BExists
    [[nodiscard]] const Formula& sub() const noexcept;     // Not, quantifier body
    [[nodiscard]] const Formula& first() const noexcept;   // binary connectives
    [[nodiscard]] const Formula& second() const noexcept;
    [[nodiscard]] const Var& var() const noexcept;     // quantifiers
    [[nodiscard]] const Formula& body() const noexcept { return sub(); }

    [[nodiscard]] bool is_atom() const noexcept;
    [[nodiscard]] bool is_binary() const noexcept;
    [[nodiscard]] bool is_quantifier() const noexcept;
    [[nodiscard]] bool is_bounded_quantifier() const noexcept;
    [[nodiscard]] bool is_unbounded_quantifier() const noexcept;
    [[nodiscard]] bool same_node(const Formula& o) const noexcept { return n_ == o.n_; }
    /// Node identity, stable while any copy of this formula is alive.
    [[nodiscard]] const void* id() const noexcept { return n_.get(); }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static Formula make(FormulaKind k, Term t1, Term t2, Formula a, Formula b, Var v);
    std::shared_ptr<const Node> n_;
};

struct Formula::Node {
    FormulaKind kind;
    Term t1;
    Term t2;
    Formula a;
    Formula b;
    Var var;
};

inline FormulaKind Formula::kind() const noexcept { return n_->kind; }
inline const Term& Formula::left() const noexcept { return n_->t1; }
inline const Term& Formula::right() const noexcept { return n_->t2; }
inline const Term& Formula::bound() const noexcept { return n_->t1; }
inline const Formula& Formula::sub() const noexcept { return n_->a; }
inline const Formula& Formula::first() const noexcept { return n_->a; }
inline const Formula& Formula::second() const noexcept { return n_->b; }
inline const Var& Formula::var() const noexcept { return n_->var; }

/// Immutable variable assignment; unmapped variables read as 0.
class VarAssignment {
public:
    VarAssignment() = default;
    VarAssignment(std::initializer_list<std::pair<const Var, Nat>> init) : values_(init) {}
    explicit VarAssignment(std::map<Var, Nat> values) : values_(std::move(values)) {}

    [[nodiscard]] Nat get(const Var& x) const;
    /// nullptr when x is unmapped.
    [[nodiscard]] const Nat* find(const Var& x) const noexcept;
    [[nodiscard]] bool contains(const Var& x) const { return values_.count(x) != 0; }
    [[nodiscard]] VarAssignment with(const Var& x, Nat value) const;
    [[nodiscard]] const std::map<Var, Nat>& entries() const noexcept { return values_; }

    friend bool operator==(const VarAssignment&, const VarAssignment&) = default;

private:
    std::map<Var, Nat> values_;
};

// --- construction helpers --------------------------------------------------

Term mk_numeral(const Nat& n);
inline Term var(Var x) { return Term::var(std::move(x)); }
inline Term operator+(const Term& a, const Term& b) { return Term::sum(a, b); }
inline Term operator*(const Term& a, const Term& b) { return Term::product(a, b); }

/// Rewrites every literal as a left-nested sum of ones (Zero for 0).
Term expand_to_core(const Term& t);
Formula expand_to_core(const Formula& f);

// --- variables ---------------------------------------------------------------

std::set<Var> free_vars(const Term& t);
std::set<Var> free_vars(const Formula& f);
/// Free variables in order of first occurrence (left to right).
std::vector<Var> free_vars_ordered(const Formula& f);
/// Every variable name occurring anywhere, bound or free.
std::set<Var> all_vars(const Formula& f);
bool occurs_in(const Var& x, const Term& t);

/// First of base', base'', ... (or base itself) not in avoid.
Var fresh_var(const Var& base, const std::set<Var>& avoid, bool allow_base = false);

// --- substitution and comparison -------------------------------------------

using Substitution = std::vector<std::pair<Var, Term>>;

Term substitute(const Term& t, const Substitution& pairs);
/// Capture-avoiding simultaneous substitution. Target variables must be distinct.
Formula substitute(const Formula& f, const Substitution& pairs);
Formula substitute(const Formula& f, const Var& x, const Term& t);

/// Structural equality treating Literal(0)/Literal(1) as Zero/One.
bool terms_equal(const Term& a, const Term& b);
/// Equality up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

std::size_t formula_size(const Formula& f);

// --- concrete syntax ----------------------------------------------------------

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Formula& f);

}  // namespace hoarith
