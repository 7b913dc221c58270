#pragma once

#include "hoarith/eval.hpp"
#include "hoarith/nat.hpp"
#include "hoarith/program.hpp"
#include "hoarith/syntax.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hoarith {

enum class SchemaKind : std::uint8_t { Const, Proj, Add, Mul, Cn, Pr, Mn };

/// Description of an X-recursive function.
///
/// Arity rules: Cn[f; g1..gm] needs f of arity m and every g of a common
/// arity n (the result arity). Pr[f; g] of arity n needs f of arity n-1 and g
/// of arity n+1; the recursion runs on the last argument. Mn[f] of arity n
/// needs f of arity n+1 and searches its last argument. Constructors throw
/// std::invalid_argument on a mismatch.
class Schema {
public:
    static Schema constant(Nat m, std::size_t arity);
    /// id_i^n with 1-based i.
    static Schema proj(std::size_t i, std::size_t arity);
    static Schema add();
    static Schema mul();
    static Schema cn(Schema f, std::vector<Schema> gs);
    static Schema pr(Schema f, Schema g);
    static Schema mn(Schema f);

    [[nodiscard]] SchemaKind kind() const noexcept { return n_->kind; }
    [[nodiscard]] std::size_t arity() const noexcept { return n_->arity; }
    [[nodiscard]] const Nat& value() const noexcept { return n_->value; }     // Const
    [[nodiscard]] std::size_t index() const noexcept { return n_->index; }    // Proj
    [[nodiscard]] const Schema& f() const noexcept { return n_->kids.front(); }  // Cn, Pr, Mn
    [[nodiscard]] const Schema& g() const noexcept { return n_->kids[1]; }       // Pr
    /// Cn only: g1..gm.
    [[nodiscard]] std::vector<Schema> gs() const { return {n_->kids.begin() + 1, n_->kids.end()}; }
    [[nodiscard]] bool contains_mn() const noexcept { return n_->has_mn; }
    [[nodiscard]] std::size_t size() const noexcept { return n_->size; }

    /// Library name attached by stdlib(), used only for compact printing.
    [[nodiscard]] const std::string& label() const noexcept { return n_->label; }
    [[nodiscard]] Schema labelled(std::string name) const;

    /// Node identity, stable for the lifetime of the schema.
    [[nodiscard]] const void* id() const noexcept { return n_.get(); }

private:
    struct Node {
        SchemaKind kind = SchemaKind::Const;
        std::size_t arity = 0;
        Nat value;
        std::size_t index = 0;
        std::vector<Schema> kids;
        bool has_mn = false;
        std::size_t size = 1;
        std::string label;
    };
    explicit Schema(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static Schema make(Node n);
    std::shared_ptr<const Node> n_;
};

/// Structural equality ignoring labels.
bool schemas_equal(const Schema& a, const Schema& b);

/// Combinator text, e.g. `pr(proj(1,1); cn(pred; proj(3,3)))`. With
/// `compact`, labelled library schemas print by name.
std::string to_string(const Schema& h, bool compact = false);

/// Parses the combinator text. Accepted forms: const(m,n), proj(i,n), add,
/// mul, cn(f; g1,...,gm), pr(f; g), mn(f), the library names pred, monus, sg,
/// sgbar, chi_eq, chi_lt, max, min, and the combinators sum_of(f),
/// prod_of(f), bforall(c), bexists(c), cases(c1, g1; c2, g2; ...).
/// Throws ParseError.
Schema parse_schema(std::string_view text);

// --- evaluation ----------------------------------------------------------------

struct XEvalResult {
    bool diverged = false;
    Nat value;                  // valid unless diverged
    std::uint64_t fuel_spent = 0;
};

/// Call-by-value evaluation. Cost model: one unit per elementary
/// application, per recursion step and per minimization probe, plus the
/// cost of the subcomputations. Runs out of fuel report diverged.
/// Throws std::invalid_argument on arity mismatch or zero fuel.
XEvalResult xrec_eval(const Schema& h, const std::vector<Nat>& args, std::uint64_t fuel);

// --- defining formulas ---------------------------------------------------------

struct Gamma {
    Formula formula;
    std::vector<Var> inputs;  // x1..xn
    Var result;               // y
};

/// The generalized Sigma_1 defining formula gamma_h(x1..xn, y). Sequence
/// entries (w)_i are read through bounded quantifiers, as in alpha_S.
Gamma gamma(const Schema& h);

/// gamma_h(args, result) with every unbounded existential replaced by its
/// value from the evaluation of h at `args`; universal steps whose clause
/// needs witnesses are unfolded. nullopt when h diverges within `fuel`.
std::optional<Formula> instantiate_gamma(const Schema& h, const std::vector<Nat>& args, const Nat& result,
                                         std::uint64_t fuel);

// --- library -------------------------------------------------------------------

/// Fixed library members: pred, monus, sg, sgbar, chi_eq, chi_lt, max, min.
/// Throws std::invalid_argument for other names.
Schema stdlib(std::string_view name);

/// g(x, y) = sum_{i<=y} f(x, i) and the product analogue, for f of arity >= 1.
Schema sum_of(const Schema& f);
Schema prod_of(const Schema& f);
/// Characteristic functions of forall i<=y c(x,i) and exists i<=y c(x,i).
Schema bforall(const Schema& c);
Schema bexists(const Schema& c);
/// sum_i g_i * c_i over (condition, value) pairs of one common arity.
Schema cases(const std::vector<std::pair<Schema, Schema>>& branches);

/// The schema computing term t over the argument list vars (the last
/// occurrence of a repeated name wins).
Schema term_schema(const Term& t, const std::vector<Var>& vars);

/// Characteristic function of a formula without unbounded quantifiers, over
/// free_vars_ordered(f) or the given variable order. Strict bounds use the
/// non-strict closures at t-1 together with a guard for t = 0.
/// Throws std::invalid_argument for unbounded quantifiers or a free
/// variable missing from `vars`.
Schema sigma0_char(const Formula& f);
Schema sigma0_char(const Formula& f, const std::vector<Var>& vars);

// --- Sigma_1 functions -----------------------------------------------------------

/// Thrown when sampling finds two results for one input.
class FunctionalityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Sigma1Options {
    std::optional<std::vector<Var>> inputs;  // default: free variables of f except the result
    std::uint64_t sample_grid = 3;           // inputs swept for the functionality check
    std::uint64_t sample_results = 12;       // candidate results per input
    Budget budget{Nat{16u}, 4096};
};

struct Sigma1Function {
    Schema schema;
    std::vector<Var> inputs;
    Var result;
};

/// f_phi = Cn[h; id_1..id_n, g] with
///   g(x)    = least w with exists y<w exists z<w. psi(x, y, z)
///   h(x, b) = least v with v<b /\ exists z<b. psi(x, v, z)
/// where exists z. psi is the prenex form of f. Throws std::invalid_argument
/// on a shape violation and FunctionalityError when sampling finds two
/// results for one input.
Sigma1Function sigma1_to_xrec(const Formula& f, const Var& result, const Sigma1Options& opt = {});

struct CompiledProgram {
    Program program;
    std::vector<Var> inputs;
    Var output;  // the first variable of the program
};

/// While-program computing h into `output` from `inputs` (default x1..xn):
/// Cn evaluates into fresh registers, Pr is a counting loop around an
/// accumulator, Mn a search loop. Registers are written before they are
/// read and inputs are never written. Every unit charged by xrec_eval
/// corresponds to at least one interpreter step, so exhausting fuel in
/// xrec_eval implies exhausting it in the program.
CompiledProgram compile_to_while(const Schema& h, const std::vector<Var>& inputs = {}, const Var& output = "y");

/// compile_to_while(sigma1_to_xrec(f)) with the formula's inputs and result name.
CompiledProgram sigma1_to_program(const Formula& f, const Var& result, const Sigma1Options& opt = {});

/// For psi(y) without unbounded quantifiers: compiles
/// phi(x, y) = x = x /\ ~psi(y) /\ forall i<y. psi(i), so the program halts
/// with the least counterexample to forall y. psi(y) when one exists.
CompiledProgram pi1_counterexample_program(const Formula& psi, const Var& y);

}  // namespace hoarith
