#include "json_tree.hpp"

namespace hoarith::cli {

namespace {

const char* kind_name(FormulaKind k) {
    switch (k) {
        case FormulaKind::Eq: return "Eq";
        case FormulaKind::Lt: return "Lt";
        case FormulaKind::True: return "True";
        case FormulaKind::False: return "False";
        case FormulaKind::Not: return "Not";
        case FormulaKind::And: return "And";
        case FormulaKind::Or: return "Or";
        case FormulaKind::Implies: return "Implies";
        case FormulaKind::Iff: return "Iff";
        case FormulaKind::Forall: return "Forall";
        case FormulaKind::Exists: return "Exists";
        case FormulaKind::BForall: return "BForall";
        case FormulaKind::BExists: return "BExists";
    }
    return "?";
}

const char* kind_name(SchemaKind k) {
    switch (k) {
        case SchemaKind::Const: return "Const";
        case SchemaKind::Proj: return "Proj";
        case SchemaKind::Add: return "Add";
        case SchemaKind::Mul: return "Mul";
        case SchemaKind::Cn: return "Cn";
        case SchemaKind::Pr: return "Pr";
        case SchemaKind::Mn: return "Mn";
    }
    return "?";
}

}  // namespace

json to_json(const Term& t) {
    switch (t.kind()) {
        case TermKind::Zero: return {{"kind", "Zero"}};
        case TermKind::One: return {{"kind", "One"}};
        case TermKind::Literal: return {{"kind", "Literal"}, {"value", t.value().to_string()}};
        case TermKind::Var: return {{"kind", "Var"}, {"name", t.name()}};
        case TermKind::Sum: return {{"kind", "Sum"}, {"lhs", to_json(t.lhs())}, {"rhs", to_json(t.rhs())}};
        case TermKind::Product: return {{"kind", "Product"}, {"lhs", to_json(t.lhs())}, {"rhs", to_json(t.rhs())}};
    }
    return {};
}

json to_json(const Formula& f) {
    json j = {{"kind", kind_name(f.kind())}};
    switch (f.kind()) {
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            j["left"] = to_json(f.left());
            j["right"] = to_json(f.right());
            break;
        case FormulaKind::True:
        case FormulaKind::False: break;
        case FormulaKind::Not: j["sub"] = to_json(f.sub()); break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            j["first"] = to_json(f.first());
            j["second"] = to_json(f.second());
            break;
        case FormulaKind::BForall:
        case FormulaKind::BExists:
            j["var"] = f.var();
            j["bound"] = to_json(f.bound());
            j["body"] = to_json(f.body());
            break;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            j["var"] = f.var();
            j["body"] = to_json(f.body());
            break;
    }
    return j;
}

json to_json(const BoolExpr& b) {
    switch (b.kind()) {
        case BoolKind::Less: return {{"kind", "Less"}, {"left", to_json(b.left())}, {"right", to_json(b.right())}};
        case BoolKind::Not: return {{"kind", "Not"}, {"sub", to_json(b.sub())}};
        case BoolKind::Implies:
            return {{"kind", "Implies"}, {"first", to_json(b.first())}, {"second", to_json(b.second())}};
    }
    return {};
}

json to_json(const Program& p) {
    switch (p.kind()) {
        case ProgramKind::Assign: return {{"kind", "Assign"}, {"target", p.target()}, {"expr", to_json(p.expr())}};
        case ProgramKind::Seq: return {{"kind", "Seq"}, {"first", to_json(p.first())}, {"second", to_json(p.second())}};
        case ProgramKind::If:
            return {{"kind", "If"},
                    {"guard", to_json(p.guard())},
                    {"then", to_json(p.then_branch())},
                    {"else", to_json(p.else_branch())}};
        case ProgramKind::While: return {{"kind", "While"}, {"guard", to_json(p.guard())}, {"body", to_json(p.body())}};
    }
    return {};
}

json to_json(const Schema& h) {
    json j = {{"kind", kind_name(h.kind())}, {"arity", h.arity()}};
    if (!h.label().empty()) j["label"] = h.label();
    switch (h.kind()) {
        case SchemaKind::Const: j["value"] = h.value().to_string(); break;
        case SchemaKind::Proj: j["index"] = h.index(); break;
        case SchemaKind::Add:
        case SchemaKind::Mul: break;
        case SchemaKind::Cn: {
            j["f"] = to_json(h.f());
            json gs = json::array();
            for (const Schema& g : h.gs()) gs.push_back(to_json(g));
            j["gs"] = std::move(gs);
            break;
        }
        case SchemaKind::Pr:
            j["f"] = to_json(h.f());
            j["g"] = to_json(h.g());
            break;
        case SchemaKind::Mn: j["f"] = to_json(h.f()); break;
    }
    return j;
}

json to_json(const HierarchyLevel& l) {
    return {{"kind", "Level"},
            {"class", l.kind == HKind::Sigma ? "Sigma" : "Pi"},
            {"n", l.n},
            {"both", l.both},
            {"strict", l.strict},
            {"text", l.to_string()}};
}

json to_json(const ProgState& s) {
    json j = json::object();
    for (std::size_t i = 0; i < s.vars().size(); ++i) j[s.vars()[i]] = s.values()[i].to_string();
    return j;
}

json to_json(const VarAssignment& a) {
    json j = json::object();
    for (const auto& [x, n] : a.entries()) j[x] = n.to_string();
    return j;
}

json to_json(const TriState& t) {
    json j = {{"kind", "TriState"}, {"value", t.is_true() ? "True" : t.is_false() ? "False" : "Unknown"}};
    if (t.is_unknown()) j["reason"] = t.reason();
    return j;
}

json to_json(const Verdict& v) {
    json j = {{"kind", "Verdict"},
              {"verdict", to_string(v.kind)},
              {"grid", v.grid.to_string()},
              {"fuel", v.fuel},
              {"q_bound", v.budget.q_bound.to_string()},
              {"caveats", v.caveats},
              {"stats",
               {{"points", v.stats.points},
                {"pre_true", v.stats.pre_true},
                {"pre_unknown", v.stats.pre_unknown},
                {"terminated", v.stats.terminated},
                {"fuel_exhausted", v.stats.fuel_exhausted},
                {"post_true", v.stats.post_true},
                {"post_unknown", v.stats.post_unknown}}}};
    if (v.kind == VerdictKind::Counterexample) {
        j["counterexample"] = {{"params", to_json(v.params)}, {"input", to_json(v.input)}, {"output", to_json(v.output)}};
    }
    return j;
}

json to_json(const CheckReport& r) {
    json nodes = json::array();
    for (const NodeReport& n : r.nodes) {
        json e = {{"kind", "NodeReport"}, {"location", n.location}, {"rule", to_string(n.rule)},
                  {"status", to_string(n.status)}};
        if (!n.reason.empty()) e["reason"] = n.reason;
        if (!n.unknown_conditions.empty()) {
            json u = json::array();
            for (const Formula& f : n.unknown_conditions) u.push_back(to_string(f));
            e["unknown_conditions"] = std::move(u);
        }
        nodes.push_back(std::move(e));
    }
    return {{"kind", "CheckReport"},
            {"status", to_string(r.overall)},
            {"grid", r.grid.to_string()},
            {"q_bound", r.budget.q_bound.to_string()},
            {"caveats", r.caveats},
            {"nodes", std::move(nodes)}};
}

}  // namespace hoarith::cli
