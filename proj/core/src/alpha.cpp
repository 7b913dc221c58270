#include "hoarith/alpha.hpp"

#include "hoarith/coding.hpp"

#include "formula_builder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace hoarith {

namespace {

using detail::Cont;
using detail::Terms;
using detail::conj_balanced;
using detail::equal_vectors;
using detail::numerals;
using detail::var_terms;

bool needs_witnesses(const Program& s) {
    switch (s.kind()) {
        case ProgramKind::Assign: return false;
        case ProgramKind::If: return needs_witnesses(s.then_branch()) || needs_witnesses(s.else_branch());
        default: return true;
    }
}

enum class Mode { Symbolic, Concrete, Zero };

class Builder : public detail::FormulaBuilder {
public:
    Builder(const Program& top, const std::set<Var>& avoid, std::uint64_t fuel = 0)
        : xs_(program_vars(top)), fuel_(fuel) {
        used().insert(avoid.begin(), avoid.end());
        used().insert(xs_.begin(), xs_.end());
        for (const auto& x : xs_) ys_.push_back(claim(fresh_var(x + "'", used(), true)));
    }

    const std::vector<Var>& xs() const { return xs_; }
    const std::vector<Var>& ys() const { return ys_; }

    // alpha_s(in, out). In concrete mode `state` is the full state on entry.
    Formula build(const Program& s, const Terms& in, const Terms& out, Mode mode, const ProgState* state) {
        switch (s.kind()) {
            case ProgramKind::Assign: return assign_clause(s, in, out);
            case ProgramKind::Seq: return seq_clause(s, in, out, mode, state);
            case ProgramKind::If: return if_clause(s, in, out, mode, state);
            case ProgramKind::While: return while_clause(s, in, out, mode, state);
        }
        throw std::logic_error("alpha: unreachable");
    }

private:
    Substitution over(const Terms& in) const {
        Substitution sub;
        sub.reserve(xs_.size());
        for (std::size_t k = 0; k < xs_.size(); ++k) sub.emplace_back(xs_[k], in[k]);
        return sub;
    }

    Formula guard_at(const BoolExpr& b, const Terms& in) const { return substitute(to_formula(b), over(in)); }

    Formula assign_clause(const Program& s, const Terms& in, const Terms& out) const {
        std::vector<Formula> parts;
        const Term e = substitute(s.expr(), over(in));
        for (std::size_t k = 0; k < xs_.size(); ++k) {
            if (xs_[k] == s.target()) {
                parts.insert(parts.begin(), Formula::eq(out[k], e));
            } else {
                parts.push_back(Formula::eq(out[k], in[k]));
            }
        }
        return Formula::conj_all(parts);
    }

    ProgState run_part(const Program& s, const ProgState& state) const {
        const RunOutcome r = run(s, state, fuel_);
        if (!r.terminated) throw std::logic_error("alpha: sub-run did not terminate within the outer budget");
        ProgState full = state;
        for (std::size_t k = 0; k < r.state.vars().size(); ++k) full = full.with(r.state.vars()[k], r.state.values()[k]);
        return full;
    }

    Formula seq_clause(const Program& s, const Terms& in, const Terms& out, Mode mode, const ProgState* state) {
        if (mode == Mode::Symbolic) {
            std::vector<Var> zs;
            for (const auto& x : xs_) zs.push_back(claim(fresh_var(x + "''", used(), true)));
            const Terms z = var_terms(zs);
            Formula body = Formula::conj(build(s.first(), in, z, mode, nullptr), build(s.second(), z, out, mode, nullptr));
            return Formula::exists_all(zs, body);
        }
        if (mode == Mode::Zero) {
            const Terms z(xs_.size(), Term::zero());
            return Formula::conj(build(s.first(), in, z, mode, nullptr), build(s.second(), z, out, mode, nullptr));
        }
        const ProgState mid = run_part(s.first(), *state);
        const Terms z = numerals(mid.values());
        return Formula::conj(build(s.first(), in, z, mode, state), build(s.second(), z, out, mode, &mid));
    }

    Formula if_clause(const Program& s, const Terms& in, const Terms& out, Mode mode, const ProgState* state) {
        const Formula b = guard_at(s.guard(), in);
        Mode then_mode = mode;
        Mode else_mode = mode;
        if (mode == Mode::Concrete) {
            const bool taken = eval_formula(to_formula(s.guard()), state->to_assignment()).is_true();
            (taken ? else_mode : then_mode) = Mode::Zero;
        }
        return Formula::disj(Formula::conj(b, build(s.then_branch(), in, out, then_mode, state)),
                             Formula::conj(Formula::neg(b), build(s.else_branch(), in, out, else_mode, state)));
    }

    Formula while_clause(const Program& s, const Terms& in, const Terms& out, Mode mode, const ProgState* state) {
        const Program& body = s.body();
        const Formula not_b_out = Formula::neg(guard_at(s.guard(), out));

        Term i_term;
        Term w_term;
        Var iv;
        Var wv;
        Var jv = bound_name("j");
        std::vector<ProgState> heads;
        if (mode == Mode::Symbolic) {
            iv = bound_name("i");
            wv = bound_name("w");
            i_term = Term::var(iv);
            w_term = Term::var(wv);
        } else if (mode == Mode::Zero) {
            i_term = Term::zero();
            w_term = Term::zero();
        } else {
            heads.push_back(*state);
            const Formula guard = to_formula(s.guard());
            while (eval_formula(guard, heads.back().to_assignment()).is_true()) {
                heads.push_back(run_part(body, heads.back()));
            }
            std::vector<Nat> codes;
            codes.reserve(heads.size());
            for (const auto& h : heads) codes.push_back(tuple_encode(h.values()));
            i_term = mk_numeral(Nat(heads.size() - 1));
            w_term = mk_numeral(seq_encode(codes));
        }

        const Formula first = decode(w_term, Term::zero(), xs_.size(), [&](const Terms& u) { return equal_vectors(in, u); });
        const Formula last = decode(w_term, i_term, xs_.size(), [&](const Terms& u) { return equal_vectors(out, u); });

        auto step = [&](const Term& j, Mode body_mode, const ProgState* body_state) {
            return decode(w_term, j, xs_.size(), [&](const Terms& u) {
                return decode(w_term, j + Term::one(), xs_.size(), [&](const Terms& v) {
                    return Formula::conj(guard_at(s.guard(), u), build(body, u, v, body_mode, body_state));
                });
            });
        };

        Formula steps;
        if (mode == Mode::Concrete && needs_witnesses(body)) {
            std::vector<Formula> unrolled;
            unrolled.reserve(heads.size());
            for (std::size_t n = 0; n + 1 < heads.size(); ++n) {
                unrolled.push_back(step(mk_numeral(Nat(n)), Mode::Concrete, &heads[n]));
            }
            steps = conj_balanced(unrolled);
        } else {
            const Mode body_mode = mode == Mode::Concrete ? Mode::Symbolic : mode;
            steps = Formula::bforall(jv, i_term, step(Term::var(jv), body_mode, nullptr));
        }

        Formula a = Formula::conj(Formula::conj(first, steps), last);
        if (mode == Mode::Symbolic) a = Formula::exists(iv, Formula::exists(wv, a));
        return Formula::conj(a, not_b_out);
    }

    std::vector<Var> xs_;
    std::vector<Var> ys_;
    std::uint64_t fuel_;
};

}  // namespace

AlphaSignature alpha_signature(const Program& s, const std::set<Var>& avoid) {
    Builder b(s, avoid);
    return AlphaSignature{b.xs(), b.ys()};
}

Formula encode_alpha(const Program& s, const std::set<Var>& avoid) {
    Builder b(s, avoid);
    return b.build(s, var_terms(b.xs()), var_terms(b.ys()), Mode::Symbolic, nullptr);
}

AlphaOut encode_alpha_out(const Program& s, std::size_t index, const std::vector<Var>& inputs, const Var& result) {
    Builder b(s, {});
    const auto& xs = b.xs();
    if (index < 1 || index > xs.size()) {
        throw std::out_of_range("output index " + std::to_string(index) + " outside 1.." + std::to_string(xs.size()));
    }
    for (const auto& p : inputs) {
        if (std::find(xs.begin(), xs.end(), p) == xs.end()) throw std::invalid_argument("input " + p + " is not a program variable");
    }
    const Formula alpha = b.build(s, var_terms(xs), var_terms(b.ys()), Mode::Symbolic, nullptr);
    Var r = result;
    if (b.used().count(r) != 0 || std::find(inputs.begin(), inputs.end(), r) != inputs.end()) {
        r = fresh_var(result, b.used());
    }
    std::vector<Var> closed;
    for (const auto& x : xs) {
        if (std::find(inputs.begin(), inputs.end(), x) == inputs.end()) closed.push_back(x);
    }
    closed.insert(closed.end(), b.ys().begin(), b.ys().end());
    Formula f = Formula::exists_all(closed, Formula::conj(alpha, Formula::eq(Term::var(r), Term::var(b.ys()[index - 1]))));
    return AlphaOut{f, r, inputs};
}

Formula alpha_at(const Program& s, const std::vector<Nat>& a, const std::vector<Nat>& bvals) {
    Builder b(s, {});
    if (a.size() != b.xs().size() || bvals.size() != b.xs().size()) throw std::invalid_argument("alpha_at: vector length");
    return b.build(s, numerals(a), numerals(bvals), Mode::Symbolic, nullptr);
}

std::optional<Formula> instantiate_alpha(const Program& s, const ProgState& input, std::uint64_t fuel) {
    const RunOutcome r = run(s, input, fuel);
    if (!r.terminated) return std::nullopt;
    Builder b(s, {}, fuel);
    const ProgState start = ProgState::for_program(s, input.to_assignment());
    return b.build(s, numerals(start.values()), numerals(r.state.values()), Mode::Concrete, &start);
}

// --- triples ---------------------------------------------------------------------------

namespace {

std::set<Var> triple_avoid(const HoareTriple& t) {
    std::set<Var> avoid = all_vars(t.pre);
    for (const auto& v : all_vars(t.post)) avoid.insert(v);
    avoid.insert(t.params.begin(), t.params.end());
    return avoid;
}

Substitution rename_to(const std::vector<Var>& from, const std::vector<Var>& to) {
    Substitution s;
    for (std::size_t k = 0; k < from.size(); ++k) s.emplace_back(from[k], Term::var(to[k]));
    return s;
}

}  // namespace

Formula vc(const HoareTriple& t) {
    const std::set<Var> avoid = triple_avoid(t);
    const AlphaSignature sig = alpha_signature(t.prog, avoid);
    const Formula alpha = encode_alpha(t.prog, avoid);
    const Formula post_y = substitute(t.post, rename_to(sig.inputs, sig.outputs));
    const Formula body = Formula::implies(Formula::conj(t.pre, alpha), post_y);

    std::vector<Var> order;
    if (t.mode == TripleMode::WithParams) order = t.params;
    order.insert(order.end(), sig.inputs.begin(), sig.inputs.end());
    order.insert(order.end(), sig.outputs.begin(), sig.outputs.end());
    for (const auto& v : free_vars_ordered(body)) {
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
    return Formula::forall_all(order, body);
}

std::optional<Formula> vc_instance(const HoareTriple& t, const VarAssignment& params, const ProgState& input,
                                   std::uint64_t fuel) {
    const auto alpha = instantiate_alpha(t.prog, input, fuel);
    if (!alpha) return std::nullopt;
    const RunOutcome r = run(t.prog, input, fuel);
    Substitution at_in;
    Substitution at_out;
    for (const auto& [v, val] : params.entries()) {
        at_in.emplace_back(v, mk_numeral(val));
        at_out.emplace_back(v, mk_numeral(val));
    }
    for (std::size_t k = 0; k < input.vars().size(); ++k) {
        auto drop = [&](Substitution& s, const Var& v) {
            s.erase(std::remove_if(s.begin(), s.end(), [&](const auto& p) { return p.first == v; }), s.end());
        };
        drop(at_in, input.vars()[k]);
        drop(at_out, input.vars()[k]);
        at_in.emplace_back(input.vars()[k], mk_numeral(input.values()[k]));
    }
    for (std::size_t k = 0; k < r.state.vars().size(); ++k) {
        at_out.emplace_back(r.state.vars()[k], mk_numeral(r.state.values()[k]));
    }
    return Formula::implies(Formula::conj(substitute(t.pre, at_in), *alpha), substitute(t.post, at_out));
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::VerifiedUpTo: return "verified-up-to";
        case VerdictKind::Counterexample: return "counterexample";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict check_triple(const HoareTriple& t, const Nat& grid, std::uint64_t fuel, const Budget& b) {
    if (fuel == 0) throw std::invalid_argument("check_triple: fuel must be at least 1");
    const auto gv = grid.to_u64();
    if (!gv || *gv > 1'000'000) throw std::invalid_argument("check_triple: grid too large");
    const std::uint64_t g = *gv;

    std::vector<Var> params;
    if (t.mode == TripleMode::WithParams) params = t.params;
    const std::vector<Var> xs = program_vars(t.prog);
    std::vector<Var> dims = params;
    dims.insert(dims.end(), xs.begin(), xs.end());

    Verdict out;
    out.grid = grid;
    out.fuel = fuel;
    out.budget = b;
    TripleStats& st = out.stats;

    std::vector<std::uint64_t> point(dims.size(), 0);
    bool more = true;
    while (more) {
        ++st.points;
        std::map<Var, Nat> pm;
        std::vector<Nat> xv;
        for (std::size_t k = 0; k < params.size(); ++k) pm[params[k]] = Nat(point[k]);
        for (std::size_t k = 0; k < xs.size(); ++k) xv.emplace_back(point[params.size() + k]);
        const VarAssignment pa(pm);
        const ProgState input(xs, xv);

        const TriState pre = eval_formula(t.pre, input.to_assignment(pa), b);
        if (pre.is_unknown()) {
            ++st.pre_unknown;
        } else if (pre.is_true()) {
            ++st.pre_true;
            const RunOutcome r = run(t.prog, input, fuel);
            if (!r.terminated) {
                ++st.fuel_exhausted;
            } else {
                ++st.terminated;
                const TriState post = eval_formula(t.post, r.state.to_assignment(pa), b);
                if (post.is_false()) {
                    out.kind = VerdictKind::Counterexample;
                    out.params = pa;
                    out.input = input;
                    out.output = r.state;
                    return out;
                }
                if (post.is_unknown()) {
                    ++st.post_unknown;
                } else {
                    ++st.post_true;
                }
            }
        }

        // Odometer increment, last dimension fastest.
        more = false;
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (point[k] < g) {
                ++point[k];
                more = true;
                break;
            }
            point[k] = 0;
        }
    }

    auto count = [](std::uint64_t n, const char* what) { return std::to_string(n) + " " + what; };
    if (st.pre_true == 0 && st.pre_unknown == 0) out.caveats.push_back("precondition never held on the grid");
    if (st.fuel_exhausted > 0) {
        if (st.fuel_exhausted == st.pre_true) {
            out.caveats.push_back("all runs fuel-exhausted; divergence assumed");
        } else {
            out.caveats.push_back(count(st.fuel_exhausted, "runs fuel-exhausted; divergence assumed"));
        }
    }
    if (st.pre_unknown > 0) out.caveats.push_back(count(st.pre_unknown, "precondition verdicts unknown; points skipped"));
    if (st.post_unknown > 0) out.caveats.push_back(count(st.post_unknown, "postcondition verdicts unknown"));
    const bool unknowns = st.pre_unknown + st.post_unknown > 0;
    out.kind = unknowns && st.post_true == 0 ? VerdictKind::Inconclusive : VerdictKind::VerifiedUpTo;
    return out;
}

}  // namespace hoarith
