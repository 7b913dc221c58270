#pragma once

#include "hoarith/nat.hpp"
#include "hoarith/syntax.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hoarith {

enum class BoolKind : std::uint8_t { Less, Not, Implies };

/// Loop and branch guards: E1 < E2, negation, implication.
class BoolExpr {
public:
    static BoolExpr less(Term a, Term b);
    static BoolExpr negate(BoolExpr b);
    static BoolExpr implies(BoolExpr a, BoolExpr b);

    [[nodiscard]] BoolKind kind() const noexcept { return n_->kind; }
    [[nodiscard]] const Term& left() const noexcept { return n_->t1; }
    [[nodiscard]] const Term& right() const noexcept { return n_->t2; }
    [[nodiscard]] const BoolExpr& sub() const noexcept { return *n_->a; }
    [[nodiscard]] const BoolExpr& first() const noexcept { return *n_->a; }
    [[nodiscard]] const BoolExpr& second() const noexcept { return *n_->b; }

private:
    struct Node {
        BoolKind kind;
        Term t1;
        Term t2;
        std::shared_ptr<const BoolExpr> a;
        std::shared_ptr<const BoolExpr> b;
    };
    explicit BoolExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

enum class ProgramKind : std::uint8_t { Assign, Seq, If, While };

/// Immutable while-program. Node ids are pre-order positions; a node's id is
/// determined by its position in the tree being traversed (see for_each_node).
class Program {
public:
    static Program assign(Var x, Term e);
    static Program seq(Program a, Program b);
    static Program if_then_else(BoolExpr b, Program then_branch, Program else_branch);
    static Program while_do(BoolExpr b, Program body);

    [[nodiscard]] ProgramKind kind() const noexcept { return n_->kind; }
    [[nodiscard]] const Var& target() const noexcept { return n_->var; }     // Assign
    [[nodiscard]] const Term& expr() const noexcept { return n_->term; }     // Assign
    [[nodiscard]] const BoolExpr& guard() const noexcept { return *n_->guard; }  // If / While
    [[nodiscard]] const Program& first() const noexcept { return *n_->a; }   // Seq
    [[nodiscard]] const Program& second() const noexcept { return *n_->b; }  // Seq
    [[nodiscard]] const Program& then_branch() const noexcept { return *n_->a; }
    [[nodiscard]] const Program& else_branch() const noexcept { return *n_->b; }
    [[nodiscard]] const Program& body() const noexcept { return *n_->a; }    // While
    /// Number of nodes in this subtree.
    [[nodiscard]] std::size_t size() const noexcept { return n_->size; }
    [[nodiscard]] std::size_t depth() const noexcept { return n_->depth; }

private:
    struct Node {
        ProgramKind kind;
        Var var;
        Term term;
        std::shared_ptr<const BoolExpr> guard;
        std::shared_ptr<const Program> a;
        std::shared_ptr<const Program> b;
        std::size_t size;
        std::size_t depth;
    };
    explicit Program(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

/// Visits every node in pre-order with its node id.
void for_each_node(const Program& p, const std::function<void(const Program&, std::size_t)>& fn);

/// Program variables in first-occurrence pre-order.
std::vector<Var> program_vars(const Program& p);

/// Structural equality (terms compared with terms_equal).
bool programs_equal(const Program& a, const Program& b);
bool bool_exprs_equal(const BoolExpr& a, const BoolExpr& b);
/// Re-associates every sequence to the right, which is how `;` parses.
Program right_associate(const Program& p);

/// Embeds a guard into the formula language (Less -> Lt and so on).
Formula to_formula(const BoolExpr& b);

/// Values for an ordered vector of variables.
class ProgState {
public:
    ProgState() = default;
    ProgState(std::vector<Var> vars, std::vector<Nat> values);
    /// Values for program_vars(p) taken from a (unmapped variables read 0).
    static ProgState for_program(const Program& p, const VarAssignment& a);

    [[nodiscard]] const std::vector<Var>& vars() const noexcept { return vars_; }
    [[nodiscard]] const std::vector<Nat>& values() const noexcept { return values_; }
    [[nodiscard]] const Nat& get(const Var& x) const;
    [[nodiscard]] ProgState with(const Var& x, Nat v) const;
    [[nodiscard]] VarAssignment to_assignment() const;
    /// Overlays this state on an assignment (used to add parameters).
    [[nodiscard]] VarAssignment to_assignment(const VarAssignment& base) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ProgState&, const ProgState&) = default;

private:
    std::vector<Var> vars_;
    std::vector<Nat> values_;
};

struct RunOutcome {
    bool terminated = false;
    ProgState state;  // final state, or the last state when fuel ran out
    std::uint64_t steps = 0;
};

/// Fuel-bounded big-step execution. One unit per assignment and per
/// guard test. The input must give a value to every program variable.
RunOutcome run(const Program& p, const ProgState& input, std::uint64_t fuel);

std::string to_string(const BoolExpr& b);
std::string to_string(const Program& p);
std::ostream& operator<<(std::ostream& os, const BoolExpr& b);
std::ostream& operator<<(std::ostream& os, const Program& p);

}  // namespace hoarith
