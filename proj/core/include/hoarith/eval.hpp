#pragma once

#include "hoarith/nat.hpp"
#include "hoarith/syntax.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hoarith {

/// Three-valued verdict of budgeted evaluation.
class TriState {
public:
    enum class Value : std::uint8_t { True, False, Unknown };

    static TriState yes() { return TriState(Value::True, {}); }
    static TriState no() { return TriState(Value::False, {}); }
    static TriState unknown(std::string reason) { return TriState(Value::Unknown, std::move(reason)); }
    static TriState of(bool b) { return b ? yes() : no(); }

    [[nodiscard]] Value value() const noexcept { return value_; }
    [[nodiscard]] bool is_true() const noexcept { return value_ == Value::True; }
    [[nodiscard]] bool is_false() const noexcept { return value_ == Value::False; }
    [[nodiscard]] bool is_unknown() const noexcept { return value_ == Value::Unknown; }
    [[nodiscard]] bool is_exact() const noexcept { return value_ != Value::Unknown; }
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }
    [[nodiscard]] TriState negated() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const TriState& a, const TriState& b) noexcept { return a.value_ == b.value_; }

private:
    TriState(Value v, std::string reason) : value_(v), reason_(std::move(reason)) {}
    Value value_;
    std::string reason_;
};

/// Search limits for unbounded quantifiers.
///
/// An unbounded quantifier probes at most q_bound+1 candidate values in
/// ascending order. Candidates come from 0, 1, 2, ... except that values
/// refuted by atomic constraints of the body are skipped; when those
/// constraints confine the variable to a finite range of at most q_bound+1
/// values, the search is exhaustive and the verdict exact.
struct Budget {
    Nat q_bound = 64;
    std::size_t max_depth = 4096;
};

Nat eval_term(const Term& t, const VarAssignment& v);

TriState eval_formula(const Formula& f, const VarAssignment& v, const Budget& b = {});

/// Raised by find_witnesses when the body cannot be evaluated exactly.
class NotExactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Witnesses = std::vector<std::pair<Var, Nat>>;

/// Strips the leading block of unbounded existentials and searches for the
/// lexicographically least witness tuple within the budget. Returns nullopt
/// when no probed tuple satisfies the body; throws NotExactError when the body
/// evaluates to Unknown at a probed tuple.
std::optional<Witnesses> find_witnesses(const Formula& f, const VarAssignment& v, const Budget& b = {});

}  // namespace hoarith
