#include "hoarith/xrec.hpp"

#include "hoarith/coding.hpp"
#include "hoarith/hierarchy.hpp"
#include "hoarith/parse.hpp"

#include "formula_builder.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>

namespace hoarith {

// --- schema nodes ------------------------------------------------------------------

Schema Schema::make(Node n) {
    for (const auto& k : n.kids) {
        n.size += k.size();
        n.has_mn = n.has_mn || k.contains_mn();
    }
    if (n.kind == SchemaKind::Mn) n.has_mn = true;
    return Schema(std::make_shared<const Node>(std::move(n)));
}

Schema Schema::constant(Nat m, std::size_t arity) {
    Node n;
    n.kind = SchemaKind::Const;
    n.arity = arity;
    n.value = std::move(m);
    return make(std::move(n));
}

Schema Schema::proj(std::size_t i, std::size_t arity) {
    if (i < 1 || i > arity) {
        throw std::invalid_argument("proj(" + std::to_string(i) + "," + std::to_string(arity) + "): index out of range");
    }
    Node n;
    n.kind = SchemaKind::Proj;
    n.arity = arity;
    n.index = i;
    return make(std::move(n));
}

Schema Schema::add() {
    Node n;
    n.kind = SchemaKind::Add;
    n.arity = 2;
    return make(std::move(n));
}

Schema Schema::mul() {
    Node n;
    n.kind = SchemaKind::Mul;
    n.arity = 2;
    return make(std::move(n));
}

Schema Schema::cn(Schema f, std::vector<Schema> gs) {
    if (gs.empty()) throw std::invalid_argument("cn: needs at least one inner function");
    if (f.arity() != gs.size()) {
        throw std::invalid_argument("cn: outer arity " + std::to_string(f.arity()) + " but " +
                                    std::to_string(gs.size()) + " inner functions");
    }
    const std::size_t n_ar = gs.front().arity();
    for (const auto& g : gs) {
        if (g.arity() != n_ar) throw std::invalid_argument("cn: inner functions disagree on arity");
    }
    Node n;
    n.kind = SchemaKind::Cn;
    n.arity = n_ar;
    n.kids.push_back(std::move(f));
    for (auto& g : gs) n.kids.push_back(std::move(g));
    return make(std::move(n));
}

Schema Schema::pr(Schema f, Schema g) {
    if (g.arity() != f.arity() + 2) {
        throw std::invalid_argument("pr: step arity " + std::to_string(g.arity()) + " must be base arity " +
                                    std::to_string(f.arity()) + " + 2");
    }
    Node n;
    n.kind = SchemaKind::Pr;
    n.arity = f.arity() + 1;
    n.kids = {std::move(f), std::move(g)};
    return make(std::move(n));
}

Schema Schema::mn(Schema f) {
    if (f.arity() == 0) throw std::invalid_argument("mn: needs a function of at least one argument");
    Node n;
    n.kind = SchemaKind::Mn;
    n.arity = f.arity() - 1;
    n.kids = {std::move(f)};
    return make(std::move(n));
}

Schema Schema::labelled(std::string name) const {
    Node n = *n_;
    n.label = std::move(name);
    return Schema(std::make_shared<const Node>(std::move(n)));
}

bool schemas_equal(const Schema& a, const Schema& b) {
    if (a.id() == b.id()) return true;
    if (a.kind() != b.kind() || a.arity() != b.arity() || a.size() != b.size()) return false;
    switch (a.kind()) {
        case SchemaKind::Const: return a.value() == b.value();
        case SchemaKind::Proj: return a.index() == b.index();
        case SchemaKind::Add:
        case SchemaKind::Mul: return true;
        case SchemaKind::Pr: return schemas_equal(a.f(), b.f()) && schemas_equal(a.g(), b.g());
        case SchemaKind::Mn: return schemas_equal(a.f(), b.f());
        case SchemaKind::Cn: {
            if (!schemas_equal(a.f(), b.f())) return false;
            const auto ga = a.gs();
            const auto gb = b.gs();
            if (ga.size() != gb.size()) return false;
            for (std::size_t k = 0; k < ga.size(); ++k) {
                if (!schemas_equal(ga[k], gb[k])) return false;
            }
            return true;
        }
    }
    return false;
}

namespace {

bool is_fixed_library_name(const std::string& s) {
    static const std::vector<std::string> names = {"pred", "monus", "sg", "sgbar", "chi_eq", "chi_lt", "max", "min"};
    return std::find(names.begin(), names.end(), s) != names.end();
}

void print(const Schema& h, bool compact, std::string& out) {
    if (compact && is_fixed_library_name(h.label())) {
        out += h.label();
        return;
    }
    switch (h.kind()) {
        case SchemaKind::Const:
            out += "const(" + h.value().to_string() + "," + std::to_string(h.arity()) + ")";
            return;
        case SchemaKind::Proj:
            out += "proj(" + std::to_string(h.index()) + "," + std::to_string(h.arity()) + ")";
            return;
        case SchemaKind::Add: out += "add"; return;
        case SchemaKind::Mul: out += "mul"; return;
        case SchemaKind::Cn: {
            out += "cn(";
            print(h.f(), compact, out);
            out += "; ";
            const auto gs = h.gs();
            for (std::size_t k = 0; k < gs.size(); ++k) {
                if (k != 0) out += ", ";
                print(gs[k], compact, out);
            }
            out += ")";
            return;
        }
        case SchemaKind::Pr:
            out += "pr(";
            print(h.f(), compact, out);
            out += "; ";
            print(h.g(), compact, out);
            out += ")";
            return;
        case SchemaKind::Mn:
            out += "mn(";
            print(h.f(), compact, out);
            out += ")";
            return;
    }
}

}  // namespace

std::string to_string(const Schema& h, bool compact) {
    std::string out;
    print(h, compact, out);
    return out;
}

// --- schema text --------------------------------------------------------------------

namespace {

class SchemaParser {
public:
    explicit SchemaParser(std::string_view text) : p_(text) {}

    Schema parse() {
        Schema h = schema();
        p_.expect_end();
        return h;
    }

private:
    using Tok = detail::Tok;

    std::size_t count() {
        const detail::Token& t = p_.expect(Tok::Number, "a number");
        try {
            const auto v = Nat::parse(t.text).to_u64();
            if (v && *v <= 1'000'000) return static_cast<std::size_t>(*v);
        } catch (const std::invalid_argument&) {
        }
        p_.fail_at(t, "count too large");
    }

    Schema checked(const detail::Token& at, const std::function<Schema()>& make) {
        try {
            return make();
        } catch (const std::invalid_argument& e) {
            p_.fail_at(at, e.what());
        }
    }

    Schema schema() {
        const detail::Token& t = p_.expect(Tok::Ident, "a schema");
        const std::string name(t.text);
        if (name == "add") return Schema::add();
        if (name == "mul") return Schema::mul();
        if (is_fixed_library_name(name)) return stdlib(name);

        p_.expect(Tok::LParen, "'('");
        Schema out = [&]() -> Schema {
            if (name == "const") {
                const detail::Token& m = p_.expect(Tok::Number, "a constant");
                p_.expect(Tok::Comma, "','");
                const std::size_t n = count();
                return Schema::constant(Nat::parse(m.text), n);
            }
            if (name == "proj") {
                const std::size_t i = count();
                p_.expect(Tok::Comma, "','");
                const std::size_t n = count();
                return checked(t, [&] { return Schema::proj(i, n); });
            }
            if (name == "cn") {
                Schema f = schema();
                p_.expect(Tok::Semi, "';'");
                std::vector<Schema> gs{schema()};
                while (p_.accept(Tok::Comma)) gs.push_back(schema());
                return checked(t, [&] { return Schema::cn(f, gs); });
            }
            if (name == "pr") {
                Schema f = schema();
                p_.expect(Tok::Semi, "';'");
                Schema g = schema();
                return checked(t, [&] { return Schema::pr(f, g); });
            }
            if (name == "mn") {
                Schema f = schema();
                return checked(t, [&] { return Schema::mn(f); });
            }
            if (name == "sum_of" || name == "prod_of" || name == "bforall" || name == "bexists") {
                Schema f = schema();
                return checked(t, [&] {
                    if (name == "sum_of") return sum_of(f);
                    if (name == "prod_of") return prod_of(f);
                    if (name == "bforall") return bforall(f);
                    return bexists(f);
                });
            }
            if (name == "cases") {
                std::vector<std::pair<Schema, Schema>> branches;
                do {
                    Schema c = schema();
                    p_.expect(Tok::Comma, "','");
                    branches.emplace_back(c, schema());
                } while (p_.accept(Tok::Semi));
                return checked(t, [&] { return cases(branches); });
            }
            p_.fail_at(t, "unknown schema '" + name + "'");
        }();
        p_.expect(Tok::RParen, "')'");
        return out;
    }

    detail::Parser p_;
};

}  // namespace

Schema parse_schema(std::string_view text) { return SchemaParser(text).parse(); }

// --- evaluation ---------------------------------------------------------------------

namespace {

struct Key {
    const void* node;
    std::vector<Nat> args;
    friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t h = std::hash<const void*>{}(k.node);
        for (const auto& a : k.args) h = h * 1000003u ^ a.hash();
        return h;
    }
};

struct Done {
    Nat value;
    std::uint64_t cost;
};

// Memoizing evaluator. Results and their costs are cached so repeated
// subcomputations are charged in full without being redone; for Pr the
// prefix h(x,0..k) is kept so a later call with a larger y resumes.
class Evaluator {
public:
    explicit Evaluator(std::uint64_t fuel) : left_(fuel) {}

    std::optional<Nat> eval(const Schema& h, const std::vector<Nat>& a) {
        switch (h.kind()) {
            case SchemaKind::Const:
                if (!charge(1)) return std::nullopt;
                return h.value();
            case SchemaKind::Proj:
                if (!charge(1)) return std::nullopt;
                return a[h.index() - 1];
            case SchemaKind::Add:
                if (!charge(1)) return std::nullopt;
                return a[0] + a[1];
            case SchemaKind::Mul:
                if (!charge(1)) return std::nullopt;
                return a[0] * a[1];
            default: break;
        }
        Key key{h.id(), a};
        if (auto it = memo_.find(key); it != memo_.end()) {
            if (!charge(it->second.cost)) return std::nullopt;
            return it->second.value;
        }
        const std::uint64_t before = left_;
        std::optional<Nat> v;
        switch (h.kind()) {
            case SchemaKind::Cn: v = eval_cn(h, a); break;
            case SchemaKind::Pr: v = eval_pr(h, a); break;
            default: v = eval_mn(h, a); break;
        }
        if (v) memo_.emplace(std::move(key), Done{*v, before - left_});
        return v;
    }

    [[nodiscard]] std::uint64_t left() const { return left_; }

private:
    bool charge(std::uint64_t c) {
        if (c > left_) {
            left_ = 0;
            return false;
        }
        left_ -= c;
        return true;
    }

    std::optional<Nat> eval_cn(const Schema& h, const std::vector<Nat>& a) {
        std::vector<Nat> zs;
        for (const auto& g : h.gs()) {
            auto z = eval(g, a);
            if (!z) return std::nullopt;
            zs.push_back(std::move(*z));
        }
        return eval(h.f(), zs);
    }

    std::optional<Nat> eval_pr(const Schema& h, const std::vector<Nat>& a) {
        std::vector<Nat> xs(a.begin(), a.end() - 1);
        const Nat& y = a.back();
        // Charge for the longest usable cached prefix, then continue from it.
        auto& prefix = prefixes_[Key{h.id(), xs}];
        if (prefix.empty()) {
            const std::uint64_t before = left_;
            auto v = eval(h.f(), xs);
            if (!v) return std::nullopt;
            prefix.push_back(Done{*v, before - left_});
        } else {
            const Nat have{static_cast<std::uint64_t>(prefix.size() - 1)};
            const std::size_t k = y < have ? static_cast<std::size_t>(*y.to_u64()) : prefix.size() - 1;
            if (!charge(prefix[k].cost)) return std::nullopt;
            if (!(have < y)) return prefix[k].value;
        }
        // Resume from the last cached step.
        Nat acc = prefix.back().value;
        std::uint64_t cum = prefix.back().cost;
        std::vector<Nat> step_args = xs;
        step_args.emplace_back();
        step_args.emplace_back();
        for (Nat i{static_cast<std::uint64_t>(prefix.size() - 1)}; i < y; i += 1) {
            const std::uint64_t before = left_;
            if (!charge(1)) return std::nullopt;
            step_args[xs.size()] = i;
            step_args[xs.size() + 1] = acc;
            auto next = eval(h.g(), step_args);
            if (!next) return std::nullopt;
            acc = std::move(*next);
            cum += before - left_;
            if (prefix.size() < kMaxPrefix) prefix.push_back(Done{acc, cum});
        }
        return acc;
    }

    std::optional<Nat> eval_mn(const Schema& h, const std::vector<Nat>& a) {
        std::vector<Nat> probe = a;
        probe.emplace_back();
        for (Nat y{};; y += 1) {
            if (!charge(1)) return std::nullopt;
            probe.back() = y;
            auto v = eval(h.f(), probe);
            if (!v) return std::nullopt;
            if (v->is_zero()) return y;
        }
    }

    static constexpr std::size_t kMaxPrefix = 1u << 20;

    std::uint64_t left_;
    std::unordered_map<Key, Done, KeyHash> memo_;
    std::unordered_map<Key, std::vector<Done>, KeyHash> prefixes_;
};

}  // namespace

XEvalResult xrec_eval(const Schema& h, const std::vector<Nat>& args, std::uint64_t fuel) {
    if (args.size() != h.arity()) {
        throw std::invalid_argument("xrec_eval: arity " + std::to_string(h.arity()) + " but " +
                                    std::to_string(args.size()) + " arguments");
    }
    if (fuel == 0) throw std::invalid_argument("xrec_eval: fuel must be at least 1");
    Evaluator ev(fuel);
    auto v = ev.eval(h, args);
    XEvalResult out;
    out.diverged = !v;
    if (v) out.value = std::move(*v);
    out.fuel_spent = fuel - ev.left();
    return out;
}

// --- gamma -------------------------------------------------------------------------

namespace {

using detail::Terms;

bool needs_witnesses(const Schema& h) {
    return h.kind() == SchemaKind::Cn || h.kind() == SchemaKind::Pr || h.kind() == SchemaKind::Mn;
}

class GammaBuilder : public detail::FormulaBuilder {
public:
    GammaBuilder(std::set<Var> used, Evaluator* ev) : FormulaBuilder(std::move(used)), ev_(ev) {}

    // gamma_h(in, out). `args` holds the values of `in` in concrete mode;
    // `out_true` says whether out is the value h takes there.
    Formula build(const Schema& h, const Terms& in, const Term& out, const std::vector<Nat>* args, bool out_true) {
        switch (h.kind()) {
            case SchemaKind::Const: return Formula::eq(out, mk_numeral(h.value()));
            case SchemaKind::Proj: return Formula::eq(out, in[h.index() - 1]);
            case SchemaKind::Add: return Formula::eq(out, in[0] + in[1]);
            case SchemaKind::Mul: return Formula::eq(out, in[0] * in[1]);
            case SchemaKind::Cn: return cn_clause(h, in, out, args, out_true);
            case SchemaKind::Pr: return pr_clause(h, in, out, args);
            case SchemaKind::Mn: return mn_clause(h, in, out, args, out_true);
        }
        throw std::logic_error("gamma: unreachable");
    }

private:
    Nat value_of(const Schema& h, const std::vector<Nat>& a) {
        auto v = ev_->eval(h, a);
        if (!v) throw std::logic_error("gamma: subcomputation diverged under the outer budget");
        return *v;
    }

    Formula cn_clause(const Schema& h, const Terms& in, const Term& out, const std::vector<Nat>* args, bool out_true) {
        const auto gs = h.gs();
        std::vector<Formula> parts;
        if (args == nullptr) {
            std::vector<Var> zs;
            for (std::size_t k = 0; k < gs.size(); ++k) zs.push_back(bound_name("z"));
            const Terms z = detail::var_terms(zs);
            for (std::size_t k = 0; k < gs.size(); ++k) parts.push_back(build(gs[k], in, z[k], nullptr, true));
            parts.push_back(build(h.f(), z, out, nullptr, true));
            return Formula::exists_all(zs, Formula::conj_all(parts));
        }
        std::vector<Nat> vals;
        for (const auto& g : gs) vals.push_back(value_of(g, *args));
        const Terms z = detail::numerals(vals);
        for (std::size_t k = 0; k < gs.size(); ++k) parts.push_back(build(gs[k], in, z[k], args, true));
        parts.push_back(build(h.f(), z, out, &vals, out_true));
        return Formula::conj_all(parts);
    }

    Formula pr_clause(const Schema& h, const Terms& in, const Term& out, const std::vector<Nat>* args) {
        const Terms xs(in.begin(), in.end() - 1);
        const Term& y = in.back();
        Term w;
        Var wv;
        std::vector<Nat> trace;
        std::vector<Nat> xvals;
        if (args == nullptr) {
            wv = bound_name("w");
            w = Term::var(wv);
        } else {
            xvals.assign(args->begin(), args->end() - 1);
            trace.push_back(value_of(h.f(), xvals));
            std::vector<Nat> sa = xvals;
            sa.emplace_back();
            sa.emplace_back();
            for (Nat i{}; i < args->back(); i += 1) {
                sa[xvals.size()] = i;
                sa[xvals.size() + 1] = trace.back();
                trace.push_back(value_of(h.g(), sa));
            }
            w = mk_numeral(seq_encode(trace));
        }

        const Formula first = decode(w, Term::zero(), 1, [&](const Terms& u) {
            return build(h.f(), xs, u[0], args == nullptr ? nullptr : &xvals, true);
        });
        const Formula last = decode(w, y, 1, [&](const Terms& u) { return Formula::eq(u[0], out); });

        auto step = [&](const Term& i, const std::vector<Nat>* sargs) {
            return decode(w, i, 1, [&](const Terms& u) {
                return decode(w, i + Term::one(), 1, [&](const Terms& v) {
                    Terms gin = xs;
                    gin.push_back(i);
                    gin.push_back(u[0]);
                    return build(h.g(), gin, v[0], sargs, true);
                });
            });
        };

        Formula steps;
        if (args != nullptr && needs_witnesses(h.g())) {
            std::vector<Formula> unrolled;
            for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
                std::vector<Nat> sa = xvals;
                sa.emplace_back(static_cast<std::uint64_t>(k));
                sa.push_back(trace[k]);
                unrolled.push_back(step(mk_numeral(Nat(static_cast<std::uint64_t>(k))), &sa));
            }
            steps = detail::conj_balanced(unrolled);
        } else {
            const Var iv = bound_name("i");
            steps = Formula::bforall(iv, y, step(Term::var(iv), nullptr));
        }
        Formula body = Formula::conj(Formula::conj(first, steps), last);
        return args == nullptr ? Formula::exists(wv, body) : body;
    }

    Formula mn_clause(const Schema& h, const Terms& in, const Term& out, const std::vector<Nat>* args, bool out_true) {
        const Schema& f = h.f();
        Terms zin = in;
        zin.push_back(out);
        if (args == nullptr || !out_true) {
            const Formula zero = build(f, zin, Term::zero(), nullptr, true);
            const Var iv = bound_name("i");
            const Var zv = bound_name("z");
            Terms iin = in;
            iin.push_back(Term::var(iv));
            const Formula nonzero = Formula::conj(build(f, iin, Term::var(zv), nullptr, true),
                                                  Formula::neg(Formula::eq(Term::var(zv), Term::zero())));
            return Formula::conj(zero, Formula::bforall(iv, out, Formula::exists(zv, nonzero)));
        }
        const Nat y = value_of(h, *args);
        std::vector<Nat> probe = *args;
        probe.push_back(y);
        const Formula zero = build(f, zin, Term::zero(), &probe, true);
        std::vector<Formula> unrolled;
        for (Nat i{}; i < y; i += 1) {
            probe.back() = i;
            const Nat z = value_of(f, probe);
            Terms iin = in;
            iin.push_back(mk_numeral(i));
            unrolled.push_back(Formula::conj(build(f, iin, mk_numeral(z), &probe, true),
                                             Formula::neg(Formula::eq(mk_numeral(z), Term::zero()))));
        }
        return Formula::conj(zero, detail::conj_balanced(unrolled));
    }

    Evaluator* ev_;
};

std::vector<Var> default_inputs(std::size_t n) {
    std::vector<Var> xs;
    for (std::size_t k = 1; k <= n; ++k) xs.push_back("x" + std::to_string(k));
    return xs;
}

}  // namespace

Gamma gamma(const Schema& h) {
    const std::vector<Var> xs = default_inputs(h.arity());
    std::set<Var> used(xs.begin(), xs.end());
    used.insert("y");
    GammaBuilder b(used, nullptr);
    return Gamma{b.build(h, detail::var_terms(xs), Term::var("y"), nullptr, true), xs, "y"};
}

std::optional<Formula> instantiate_gamma(const Schema& h, const std::vector<Nat>& args, const Nat& result,
                                         std::uint64_t fuel) {
    const XEvalResult r = xrec_eval(h, args, fuel);
    if (r.diverged) return std::nullopt;
    Evaluator ev(std::numeric_limits<std::uint64_t>::max());
    GammaBuilder b({}, &ev);
    return b.build(h, detail::numerals(args), mk_numeral(result), &args, result == r.value);
}

// --- library -----------------------------------------------------------------------

namespace {

// Pr[Cn[f, id_1..id_n, 0], Cn[op, Cn[f, id_1..id_n, Cn[+, id_{n+1}, 1]], id_{n+2}]]
Schema fold_of(const Schema& f, const Schema& op) {
    if (f.arity() == 0) throw std::invalid_argument("sum_of/prod_of: the summand needs at least one argument");
    const std::size_t n = f.arity() - 1;
    std::vector<Schema> base_args;
    for (std::size_t i = 1; i <= n; ++i) base_args.push_back(Schema::proj(i, n));
    base_args.push_back(Schema::constant(Nat{}, n));
    const Schema base = Schema::cn(f, base_args);

    const std::size_t m = n + 2;
    std::vector<Schema> step_args;
    for (std::size_t i = 1; i <= n; ++i) step_args.push_back(Schema::proj(i, m));
    step_args.push_back(Schema::cn(Schema::add(), {Schema::proj(n + 1, m), Schema::constant(Nat{1u}, m)}));
    const Schema next = Schema::cn(f, step_args);
    const Schema step = Schema::cn(op, {next, Schema::proj(n + 2, m)});
    return Schema::pr(base, step);
}

Schema monus_of(const Schema& a, const Schema& b) { return Schema::cn(stdlib("monus"), {a, b}); }
Schema sg_of(const Schema& a) { return Schema::cn(stdlib("sg"), {a}); }
Schema one(std::size_t n) { return Schema::constant(Nat{1u}, n); }

// 1 - c, the closure for negation.
Schema negation(const Schema& c) { return monus_of(one(c.arity()), c); }

}  // namespace

Schema sum_of(const Schema& f) { return fold_of(f, Schema::add()).labelled("sum_of"); }
Schema prod_of(const Schema& f) { return fold_of(f, Schema::mul()).labelled("prod_of"); }
Schema bforall(const Schema& c) { return prod_of(c).labelled("bforall"); }
Schema bexists(const Schema& c) { return sg_of(sum_of(c)).labelled("bexists"); }

Schema cases(const std::vector<std::pair<Schema, Schema>>& branches) {
    if (branches.empty()) throw std::invalid_argument("cases: needs at least one branch");
    const std::size_t n = branches.front().first.arity();
    std::optional<Schema> acc;
    for (const auto& [c, g] : branches) {
        if (c.arity() != n || g.arity() != n) throw std::invalid_argument("cases: branches disagree on arity");
        Schema term = Schema::cn(Schema::mul(), {g, c});
        acc = acc ? Schema::cn(Schema::add(), {*acc, term}) : term;
    }
    return acc->labelled("cases");
}

Schema stdlib(std::string_view name) {
    static const auto build = [](std::string_view nm) -> Schema {
        const Schema p1 = Schema::proj(1, 2);
        const Schema p2 = Schema::proj(2, 2);
        if (nm == "pred") return Schema::pr(Schema::constant(Nat{}, 0), Schema::proj(1, 2));
        if (nm == "monus") return Schema::pr(Schema::proj(1, 1), Schema::cn(stdlib("pred"), {Schema::proj(3, 3)}));
        if (nm == "sg") {
            const Schema x = Schema::proj(1, 1);
            return monus_of(one(1), monus_of(one(1), x));
        }
        if (nm == "sgbar") return monus_of(one(1), Schema::proj(1, 1));
        if (nm == "chi_eq") {
            const Schema s = Schema::cn(Schema::add(), {sg_of(monus_of(p1, p2)), sg_of(monus_of(p2, p1))});
            return monus_of(one(2), s);
        }
        if (nm == "chi_lt") return sg_of(monus_of(p2, p1));
        if (nm == "max") {
            const Schema lt = stdlib("chi_lt");
            return cases({{negation(lt), p1}, {lt, p2}});
        }
        if (nm == "min") {
            const Schema lt = stdlib("chi_lt");
            return cases({{lt, p1}, {negation(lt), p2}});
        }
        throw std::invalid_argument("unknown library schema '" + std::string(nm) + "'");
    };
    static std::map<std::string, Schema, std::less<>> cache;
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    Schema s = build(name).labelled(std::string(name));
    cache.emplace(std::string(name), s);
    return s;
}

// --- Sigma_0 characteristic functions ------------------------------------------------

Schema term_schema(const Term& t, const std::vector<Var>& vars) {
    const std::size_t n = vars.size();
    switch (t.kind()) {
        case TermKind::Zero: return Schema::constant(Nat{}, n);
        case TermKind::One: return Schema::constant(Nat{1u}, n);
        case TermKind::Literal: return Schema::constant(t.value(), n);
        case TermKind::Var: {
            for (std::size_t k = n; k-- > 0;) {
                if (vars[k] == t.name()) return Schema::proj(k + 1, n);
            }
            throw std::invalid_argument("variable " + t.name() + " is not among the arguments");
        }
        case TermKind::Sum: return Schema::cn(Schema::add(), {term_schema(t.lhs(), vars), term_schema(t.rhs(), vars)});
        case TermKind::Product:
            return Schema::cn(Schema::mul(), {term_schema(t.lhs(), vars), term_schema(t.rhs(), vars)});
    }
    throw std::logic_error("term_schema: unreachable");
}

namespace {

Schema char_of(const Formula& f, const std::vector<Var>& vars) {
    const std::size_t n = vars.size();
    switch (f.kind()) {
        case FormulaKind::True: return one(n);
        case FormulaKind::False: return Schema::constant(Nat{}, n);
        case FormulaKind::Eq:
            return Schema::cn(stdlib("chi_eq"), {term_schema(f.left(), vars), term_schema(f.right(), vars)});
        case FormulaKind::Lt:
            return Schema::cn(stdlib("chi_lt"), {term_schema(f.left(), vars), term_schema(f.right(), vars)});
        case FormulaKind::Not: return negation(char_of(f.sub(), vars));
        case FormulaKind::And: return Schema::cn(stdlib("min"), {char_of(f.first(), vars), char_of(f.second(), vars)});
        case FormulaKind::Or: return Schema::cn(stdlib("max"), {char_of(f.first(), vars), char_of(f.second(), vars)});
        case FormulaKind::Implies:
            return Schema::cn(stdlib("max"), {negation(char_of(f.first(), vars)), char_of(f.second(), vars)});
        case FormulaKind::Iff: {
            const Schema a = char_of(f.first(), vars);
            const Schema b = char_of(f.second(), vars);
            return Schema::cn(stdlib("min"), {Schema::cn(stdlib("max"), {negation(a), b}),
                                               Schema::cn(stdlib("max"), {negation(b), a})});
        }
        case FormulaKind::BForall:
        case FormulaKind::BExists: {
            // Q i<t. body  as  (t = 0 or forall i<=t-1)  /  (t > 0 and exists i<=t-1).
            std::vector<Var> inner = vars;
            inner.push_back(f.var());
            const Schema c = char_of(f.body(), inner);
            const Schema t = term_schema(f.bound(), vars);
            const bool universal = f.kind() == FormulaKind::BForall;
            const Schema closed = universal ? bforall(c) : bexists(c);
            std::vector<Schema> args;
            for (std::size_t i = 1; i <= n; ++i) args.push_back(Schema::proj(i, n));
            args.push_back(Schema::cn(stdlib("pred"), {t}));
            const Schema at_pred = Schema::cn(closed, args);
            if (universal) return Schema::cn(stdlib("max"), {Schema::cn(stdlib("sgbar"), {t}), at_pred});
            return Schema::cn(stdlib("min"), {sg_of(t), at_pred});
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists: break;
    }
    throw std::invalid_argument("sigma0_char: unbounded quantifier over " + f.var());
}

}  // namespace

Schema sigma0_char(const Formula& f) { return sigma0_char(f, free_vars_ordered(f)); }

Schema sigma0_char(const Formula& f, const std::vector<Var>& vars) {
    if (!is_level_zero(f)) throw std::invalid_argument("sigma0_char: formula has unbounded quantifiers");
    for (const auto& v : free_vars(f)) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
            throw std::invalid_argument("sigma0_char: free variable " + v + " missing from the argument list");
        }
    }
    if (vars.empty()) {
        // Arity-0 characteristic values need one dummy argument to compose.
        throw std::invalid_argument("sigma0_char: needs at least one argument variable");
    }
    return char_of(f, vars);
}

// --- Sigma_1 ---------------------------------------------------------------------------

namespace {

// Least v with R(x, v), as Mn over the characteristic function of ~R.
Schema least(const Formula& r, const std::vector<Var>& vars) { return Schema::mn(negation(sigma0_char(r, vars))); }

void check_functional(const Formula& f, const Var& result, const std::vector<Var>& inputs, const Sigma1Options& opt) {
    std::vector<std::uint64_t> point(inputs.size(), 0);
    for (;;) {
        std::map<Var, Nat> base;
        for (std::size_t k = 0; k < inputs.size(); ++k) base[inputs[k]] = Nat(point[k]);
        std::optional<Nat> seen;
        for (std::uint64_t y = 0; y <= opt.sample_results; ++y) {
            std::map<Var, Nat> a = base;
            a[result] = Nat(y);
            if (!eval_formula(f, VarAssignment(a), opt.budget).is_true()) continue;
            if (seen) {
                std::string where;
                for (std::size_t k = 0; k < inputs.size(); ++k) {
                    where += (k != 0 ? "," : "") + inputs[k] + "=" + std::to_string(point[k]);
                }
                throw FunctionalityError("formula is not functional in " + result + ": at " + where + " both " +
                                         seen->to_string() + " and " + std::to_string(y) + " satisfy it");
            }
            seen = Nat(y);
        }
        std::size_t k = inputs.size();
        while (k > 0 && point[k - 1] == opt.sample_grid) point[--k] = 0;
        if (k == 0) return;
        ++point[k - 1];
    }
}

}  // namespace

Sigma1Function sigma1_to_xrec(const Formula& f, const Var& result, const Sigma1Options& opt) {
    if (free_vars(f).count(result) == 0) throw std::invalid_argument("result variable " + result + " does not occur free");
    std::vector<Var> inputs;
    if (opt.inputs) {
        inputs = *opt.inputs;
        for (const auto& v : free_vars(f)) {
            if (v != result && std::find(inputs.begin(), inputs.end(), v) == inputs.end()) {
                throw std::invalid_argument("free variable " + v + " is neither an input nor the result");
            }
        }
    } else {
        for (const auto& v : free_vars_ordered(f)) {
            if (v != result) inputs.push_back(v);
        }
    }
    if (std::find(inputs.begin(), inputs.end(), result) != inputs.end()) {
        throw std::invalid_argument("the result variable cannot also be an input");
    }

    Formula psi = prenexify(f);
    std::vector<Var> block;
    while (psi.kind() == FormulaKind::Exists) {
        block.push_back(psi.var());
        psi = psi.body();
    }
    if (!is_level_zero(psi)) throw std::invalid_argument("not a Sigma_1 formula: prenex form is " + to_string(prenexify(f)));
    check_functional(f, result, inputs, opt);

    std::set<Var> used = all_vars(psi);
    used.insert(inputs.begin(), inputs.end());
    used.insert(result);
    const Var w = fresh_var("w", used);
    used.insert(w);
    const Var v = fresh_var("v", used);
    used.insert(v);

    // g(x) = least w with exists y<w exists z<w. psi
    Formula rg = psi;
    for (auto it = block.rbegin(); it != block.rend(); ++it) rg = Formula::bexists(*it, Term::var(w), rg);
    rg = Formula::bexists(result, Term::var(w), rg);
    std::vector<Var> gvars = inputs;
    gvars.push_back(w);
    const Schema g = least(rg, gvars);

    // h(x, b) = least v with v<b /\ exists z<b. psi(x, v, z); w plays b.
    Formula rh = substitute(psi, result, Term::var(v));
    for (auto it = block.rbegin(); it != block.rend(); ++it) rh = Formula::bexists(*it, Term::var(w), rh);
    rh = Formula::conj(Formula::lt(Term::var(v), Term::var(w)), rh);
    std::vector<Var> hvars = gvars;
    hvars.push_back(v);
    const Schema h = least(rh, hvars);

    const std::size_t n = inputs.size();
    std::vector<Schema> args;
    for (std::size_t i = 1; i <= n; ++i) args.push_back(Schema::proj(i, n));
    args.push_back(g);
    return Sigma1Function{Schema::cn(h, args), inputs, result};
}

// --- compilation ------------------------------------------------------------------------

namespace {

Program seq_of(const std::vector<Program>& ps) {
    Program out = ps.back();
    for (std::size_t k = ps.size() - 1; k-- > 0;) out = Program::seq(ps[k], out);
    return out;
}

class Compiler {
public:
    explicit Compiler(std::set<Var> used) : used_(std::move(used)) {}

    Var reg(const char* prefix) {
        unsigned& k = counters_[prefix];
        for (;;) {
            Var v = prefix + std::to_string(++k);
            if (used_.insert(v).second) return v;
        }
    }

    // Code storing h(args) into dst. dst is assigned only by the last
    // statement, so args may mention dst.
    void emit(const Schema& h, const std::vector<Var>& args, const Var& dst, std::vector<Program>& out) {
        auto arg = [&](std::size_t i) { return Term::var(args[i]); };
        switch (h.kind()) {
            case SchemaKind::Const: out.push_back(Program::assign(dst, mk_numeral(h.value()))); return;
            case SchemaKind::Proj: out.push_back(Program::assign(dst, arg(h.index() - 1))); return;
            case SchemaKind::Add: out.push_back(Program::assign(dst, arg(0) + arg(1))); return;
            case SchemaKind::Mul: out.push_back(Program::assign(dst, arg(0) * arg(1))); return;
            case SchemaKind::Cn: {
                std::vector<Var> zs;
                for (const auto& g : h.gs()) {
                    zs.push_back(reg("r"));
                    emit(g, args, zs.back(), out);
                }
                emit(h.f(), zs, dst, out);
                return;
            }
            case SchemaKind::Pr: {
                // acc := f(x); i := 0; while i < y do acc := g(x, i, acc); i := i + 1 od; dst := acc
                const std::vector<Var> xs(args.begin(), args.end() - 1);
                const Var acc = reg("acc");
                const Var i = reg("i");
                emit(h.f(), xs, acc, out);
                out.push_back(Program::assign(i, Term::zero()));
                std::vector<Program> body;
                std::vector<Var> gargs = xs;
                gargs.push_back(i);
                gargs.push_back(acc);
                emit(h.g(), gargs, acc, body);
                body.push_back(Program::assign(i, Term::var(i) + Term::one()));
                out.push_back(Program::while_do(BoolExpr::less(Term::var(i), Term::var(args.back())), seq_of(body)));
                out.push_back(Program::assign(dst, Term::var(acc)));
                return;
            }
            case SchemaKind::Mn: {
                // v := 0; t := f(x, v); while 0 < t do v := v + 1; t := f(x, v) od; dst := v
                const Var v = reg("v");
                const Var t = reg("t");
                std::vector<Var> fargs = args;
                fargs.push_back(v);
                out.push_back(Program::assign(v, Term::zero()));
                emit(h.f(), fargs, t, out);
                std::vector<Program> body{Program::assign(v, Term::var(v) + Term::one())};
                emit(h.f(), fargs, t, body);
                out.push_back(Program::while_do(BoolExpr::less(Term::zero(), Term::var(t)), seq_of(body)));
                out.push_back(Program::assign(dst, Term::var(v)));
                return;
            }
        }
    }

private:
    std::set<Var> used_;
    std::map<std::string, unsigned> counters_;
};

}  // namespace

CompiledProgram compile_to_while(const Schema& h, const std::vector<Var>& inputs, const Var& output) {
    const std::vector<Var> xs = inputs.empty() ? default_inputs(h.arity()) : inputs;
    if (xs.size() != h.arity()) {
        throw std::invalid_argument("compile_to_while: arity " + std::to_string(h.arity()) + " but " +
                                    std::to_string(xs.size()) + " inputs");
    }
    std::set<Var> used(xs.begin(), xs.end());
    if (!used.insert(output).second) throw std::invalid_argument("compile_to_while: output collides with an input");
    if (used.size() != xs.size() + 1) throw std::invalid_argument("compile_to_while: repeated input name");

    Compiler c(used);
    std::vector<Program> body;
    c.emit(h, xs, output, body);
    Program prog = seq_of(body);

    // The output must be the first program variable and every input must occur.
    const std::vector<Var> seen = program_vars(prog);
    std::vector<Program> prefix;
    for (const auto& x : xs) {
        if (std::find(seen.begin(), seen.end(), x) == seen.end()) prefix.push_back(Program::assign(output, Term::var(x)));
    }
    if (prefix.empty() && seen.front() != output) prefix.push_back(Program::assign(output, Term::zero()));
    if (!prefix.empty()) {
        prefix.push_back(prog);
        prog = seq_of(prefix);
    }
    return CompiledProgram{prog, xs, output};
}

CompiledProgram sigma1_to_program(const Formula& f, const Var& result, const Sigma1Options& opt) {
    const Sigma1Function fn = sigma1_to_xrec(f, result, opt);
    return compile_to_while(fn.schema, fn.inputs, fn.result);
}

CompiledProgram pi1_counterexample_program(const Formula& psi, const Var& y) {
    if (!is_level_zero(psi)) throw std::invalid_argument("pi1_counterexample_program: psi has unbounded quantifiers");
    for (const auto& v : free_vars(psi)) {
        if (v != y) throw std::invalid_argument("pi1_counterexample_program: psi mentions " + v + " besides " + y);
    }
    std::set<Var> used = all_vars(psi);
    used.insert(y);
    const Var x = fresh_var("x", used, true);
    used.insert(x);
    const Var i = fresh_var("i", used, true);
    const Formula psi_i = substitute(psi, y, Term::var(i));
    const Formula phi = Formula::conj(Formula::conj(Formula::eq(Term::var(x), Term::var(x)), Formula::neg(psi)),
                                      Formula::bforall(i, Term::var(y), psi_i));
    Sigma1Options opt;
    opt.inputs = std::vector<Var>{x};
    return sigma1_to_program(phi, y, opt);
}

}  // namespace hoarith
