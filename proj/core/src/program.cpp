#include "hoarith/program.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hoarith {

BoolExpr BoolExpr::less(Term a, Term b) {
    return BoolExpr(std::make_shared<const Node>(Node{BoolKind::Less, std::move(a), std::move(b), nullptr, nullptr}));
}

BoolExpr BoolExpr::negate(BoolExpr b) {
    return BoolExpr(std::make_shared<const Node>(
        Node{BoolKind::Not, Term(), Term(), std::make_shared<const BoolExpr>(std::move(b)), nullptr}));
}

BoolExpr BoolExpr::implies(BoolExpr a, BoolExpr b) {
    return BoolExpr(std::make_shared<const Node>(Node{BoolKind::Implies, Term(), Term(),
                                                      std::make_shared<const BoolExpr>(std::move(a)),
                                                      std::make_shared<const BoolExpr>(std::move(b))}));
}

Program Program::assign(Var x, Term e) {
    if (x.empty()) throw std::invalid_argument("assign: empty variable name");
    return Program(std::make_shared<const Node>(
        Node{ProgramKind::Assign, std::move(x), std::move(e), nullptr, nullptr, nullptr, 1, 1}));
}

Program Program::seq(Program a, Program b) {
    const std::size_t size = 1 + a.size() + b.size();
    const std::size_t depth = 1 + std::max(a.depth(), b.depth());
    return Program(std::make_shared<const Node>(Node{ProgramKind::Seq, Var{}, Term(), nullptr,
                                                     std::make_shared<const Program>(std::move(a)),
                                                     std::make_shared<const Program>(std::move(b)), size, depth}));
}

Program Program::if_then_else(BoolExpr b, Program then_branch, Program else_branch) {
    const std::size_t size = 1 + then_branch.size() + else_branch.size();
    const std::size_t depth = 1 + std::max(then_branch.depth(), else_branch.depth());
    return Program(std::make_shared<const Node>(
        Node{ProgramKind::If, Var{}, Term(), std::make_shared<const BoolExpr>(std::move(b)),
             std::make_shared<const Program>(std::move(then_branch)),
             std::make_shared<const Program>(std::move(else_branch)), size, depth}));
}

Program Program::while_do(BoolExpr b, Program body) {
    const std::size_t size = 1 + body.size();
    const std::size_t depth = 1 + body.depth();
    return Program(std::make_shared<const Node>(Node{ProgramKind::While, Var{}, Term(),
                                                     std::make_shared<const BoolExpr>(std::move(b)),
                                                     std::make_shared<const Program>(std::move(body)), nullptr,
                                                     size, depth}));
}

namespace {

void visit(const Program& p, std::size_t id, const std::function<void(const Program&, std::size_t)>& fn) {
    fn(p, id);
    switch (p.kind()) {
        case ProgramKind::Assign: break;
        case ProgramKind::While: visit(p.body(), id + 1, fn); break;
        default:
            visit(p.first(), id + 1, fn);
            visit(p.second(), id + 1 + p.first().size(), fn);
            break;
    }
}

void term_vars_ordered(const Term& t, std::vector<Var>& out) {
    switch (t.kind()) {
        case TermKind::Var:
            if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
            break;
        case TermKind::Sum:
        case TermKind::Product:
            term_vars_ordered(t.lhs(), out);
            term_vars_ordered(t.rhs(), out);
            break;
        default: break;
    }
}

void bool_vars_ordered(const BoolExpr& b, std::vector<Var>& out) {
    switch (b.kind()) {
        case BoolKind::Less:
            term_vars_ordered(b.left(), out);
            term_vars_ordered(b.right(), out);
            break;
        case BoolKind::Not: bool_vars_ordered(b.sub(), out); break;
        case BoolKind::Implies:
            bool_vars_ordered(b.first(), out);
            bool_vars_ordered(b.second(), out);
            break;
    }
}

}  // namespace

void for_each_node(const Program& p, const std::function<void(const Program&, std::size_t)>& fn) { visit(p, 0, fn); }

std::vector<Var> program_vars(const Program& p) {
    std::vector<Var> out;
    for_each_node(p, [&](const Program& n, std::size_t) {
        switch (n.kind()) {
            case ProgramKind::Assign:
                if (std::find(out.begin(), out.end(), n.target()) == out.end()) out.push_back(n.target());
                term_vars_ordered(n.expr(), out);
                break;
            case ProgramKind::If:
            case ProgramKind::While: bool_vars_ordered(n.guard(), out); break;
            case ProgramKind::Seq: break;
        }
    });
    return out;
}

bool bool_exprs_equal(const BoolExpr& a, const BoolExpr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case BoolKind::Less: return terms_equal(a.left(), b.left()) && terms_equal(a.right(), b.right());
        case BoolKind::Not: return bool_exprs_equal(a.sub(), b.sub());
        case BoolKind::Implies: return bool_exprs_equal(a.first(), b.first()) && bool_exprs_equal(a.second(), b.second());
    }
    return false;
}

bool programs_equal(const Program& a, const Program& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ProgramKind::Assign: return a.target() == b.target() && terms_equal(a.expr(), b.expr());
        case ProgramKind::Seq: return programs_equal(a.first(), b.first()) && programs_equal(a.second(), b.second());
        case ProgramKind::If:
            return bool_exprs_equal(a.guard(), b.guard()) && programs_equal(a.then_branch(), b.then_branch()) &&
                   programs_equal(a.else_branch(), b.else_branch());
        case ProgramKind::While: return bool_exprs_equal(a.guard(), b.guard()) && programs_equal(a.body(), b.body());
    }
    return false;
}

namespace {

void flatten_seq(const Program& p, std::vector<Program>& out) {
    if (p.kind() == ProgramKind::Seq) {
        flatten_seq(p.first(), out);
        flatten_seq(p.second(), out);
    } else {
        out.push_back(right_associate(p));
    }
}

}  // namespace

Program right_associate(const Program& p) {
    switch (p.kind()) {
        case ProgramKind::Assign: return p;
        case ProgramKind::If:
            return Program::if_then_else(p.guard(), right_associate(p.then_branch()), right_associate(p.else_branch()));
        case ProgramKind::While: return Program::while_do(p.guard(), right_associate(p.body()));
        case ProgramKind::Seq: {
            std::vector<Program> parts;
            flatten_seq(p, parts);
            Program acc = parts.back();
            for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Program::seq(parts[i], acc);
            return acc;
        }
    }
    return p;
}

Formula to_formula(const BoolExpr& b) {
    switch (b.kind()) {
        case BoolKind::Less: return Formula::lt(b.left(), b.right());
        case BoolKind::Not: return Formula::neg(to_formula(b.sub()));
        case BoolKind::Implies: return Formula::implies(to_formula(b.first()), to_formula(b.second()));
    }
    return Formula::top();
}

// --- ProgState -------------------------------------------------------------------

ProgState::ProgState(std::vector<Var> vars, std::vector<Nat> values) : vars_(std::move(vars)), values_(std::move(values)) {
    if (vars_.size() != values_.size()) throw std::invalid_argument("ProgState: vars/values length mismatch");
}

ProgState ProgState::for_program(const Program& p, const VarAssignment& a) {
    std::vector<Var> vars = program_vars(p);
    std::vector<Nat> values;
    values.reserve(vars.size());
    for (const auto& x : vars) values.push_back(a.get(x));
    return ProgState(std::move(vars), std::move(values));
}

const Nat& ProgState::get(const Var& x) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == x) return values_[i];
    }
    throw std::out_of_range("ProgState: no variable " + x);
}

ProgState ProgState::with(const Var& x, Nat v) const {
    ProgState copy = *this;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == x) {
            copy.values_[i] = std::move(v);
            return copy;
        }
    }
    throw std::out_of_range("ProgState: no variable " + x);
}

VarAssignment ProgState::to_assignment() const { return to_assignment(VarAssignment{}); }

VarAssignment ProgState::to_assignment(const VarAssignment& base) const {
    auto m = base.entries();
    for (std::size_t i = 0; i < vars_.size(); ++i) m[vars_[i]] = values_[i];
    return VarAssignment(std::move(m));
}

std::string ProgState::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out += ", ";
        out += vars_[i] + "=" + values_[i].to_string();
    }
    return out;
}

// --- interpreter --------------------------------------------------------------
//
// The program is first resolved into index-addressed nodes so that the
// execution loop never looks variables up by name.

namespace {

struct RTerm {
    TermKind kind;
    std::size_t slot = 0;
    Nat literal;
    std::unique_ptr<RTerm> a;
    std::unique_ptr<RTerm> b;
};

struct RBool {
    BoolKind kind;
    std::unique_ptr<RTerm> l;
    std::unique_ptr<RTerm> r;
    std::unique_ptr<RBool> a;
    std::unique_ptr<RBool> b;
};

struct RProg {
    ProgramKind kind;
    std::size_t slot = 0;
    std::unique_ptr<RTerm> expr;
    std::unique_ptr<RBool> guard;
    std::unique_ptr<RProg> a;
    std::unique_ptr<RProg> b;
};

class Resolver {
public:
    explicit Resolver(const std::vector<Var>& vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) slots_.emplace(vars[i], i);
    }

    std::unique_ptr<RTerm> term(const Term& t) {
        auto r = std::make_unique<RTerm>();
        r->kind = t.kind();
        switch (t.kind()) {
            case TermKind::Zero: r->literal = 0; r->kind = TermKind::Literal; break;
            case TermKind::One: r->literal = 1; r->kind = TermKind::Literal; break;
            case TermKind::Literal: r->literal = t.value(); break;
            case TermKind::Var: r->slot = slots_.at(t.name()); break;
            case TermKind::Sum:
            case TermKind::Product:
                r->a = term(t.lhs());
                r->b = term(t.rhs());
                break;
        }
        return r;
    }

    std::unique_ptr<RBool> guard(const BoolExpr& b) {
        auto r = std::make_unique<RBool>();
        r->kind = b.kind();
        switch (b.kind()) {
            case BoolKind::Less:
                r->l = term(b.left());
                r->r = term(b.right());
                break;
            case BoolKind::Not: r->a = guard(b.sub()); break;
            case BoolKind::Implies:
                r->a = guard(b.first());
                r->b = guard(b.second());
                break;
        }
        return r;
    }

    std::unique_ptr<RProg> program(const Program& p) {
        auto r = std::make_unique<RProg>();
        r->kind = p.kind();
        switch (p.kind()) {
            case ProgramKind::Assign:
                r->slot = slots_.at(p.target());
                r->expr = term(p.expr());
                break;
            case ProgramKind::Seq:
                r->a = program(p.first());
                r->b = program(p.second());
                break;
            case ProgramKind::If:
                r->guard = guard(p.guard());
                r->a = program(p.then_branch());
                r->b = program(p.else_branch());
                break;
            case ProgramKind::While:
                r->guard = guard(p.guard());
                r->a = program(p.body());
                break;
        }
        return r;
    }

private:
    std::unordered_map<Var, std::size_t> slots_;
};

class Machine {
public:
    Machine(std::vector<Nat>& regs, std::uint64_t fuel) : regs_(regs), fuel_(fuel) {}

    // Returns false when fuel runs out.
    bool exec(const RProg& p) {
        switch (p.kind) {
            case ProgramKind::Assign:
                if (!tick()) return false;
                regs_[p.slot] = value(*p.expr);
                return true;
            case ProgramKind::Seq: return exec(*p.a) && exec(*p.b);
            case ProgramKind::If:
                if (!tick()) return false;
                return test(*p.guard) ? exec(*p.a) : exec(*p.b);
            case ProgramKind::While:
                for (;;) {
                    if (!tick()) return false;
                    if (!test(*p.guard)) return true;
                    if (!exec(*p.a)) return false;
                }
        }
        return true;
    }

    [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }

private:
    bool tick() {
        if (steps_ >= fuel_) return false;
        ++steps_;
        return true;
    }

    Nat value(const RTerm& t) const {
        switch (t.kind) {
            case TermKind::Literal: return t.literal;
            case TermKind::Var: return regs_[t.slot];
            case TermKind::Sum: return value(*t.a) + value(*t.b);
            case TermKind::Product: return value(*t.a) * value(*t.b);
            default: return Nat{};
        }
    }

    bool test(const RBool& b) const {
        switch (b.kind) {
            case BoolKind::Less: return value(*b.l) < value(*b.r);
            case BoolKind::Not: return !test(*b.a);
            case BoolKind::Implies: return !test(*b.a) || test(*b.b);
        }
        return false;
    }

    std::vector<Nat>& regs_;
    std::uint64_t fuel_;
    std::uint64_t steps_ = 0;
};

}  // namespace

RunOutcome run(const Program& p, const ProgState& input, std::uint64_t fuel) {
    const std::vector<Var> vars = program_vars(p);
    std::vector<Nat> regs;
    regs.reserve(vars.size());
    for (const auto& x : vars) regs.push_back(input.get(x));

    Resolver resolver(vars);
    const auto code = resolver.program(p);
    Machine m(regs, fuel);
    const bool done = m.exec(*code);
    return RunOutcome{done, ProgState(vars, std::move(regs)), m.steps()};
}

// --- printing ----------------------------------------------------------------------

namespace {

void print_bool(std::ostream& os, const BoolExpr& b, bool operand) {
    switch (b.kind()) {
        case BoolKind::Less: os << to_string(b.left()) << " < " << to_string(b.right()); return;
        case BoolKind::Not:
            os << '~';
            if (b.sub().kind() == BoolKind::Not) {
                print_bool(os, b.sub(), true);
            } else {
                os << '(';
                print_bool(os, b.sub(), false);
                os << ')';
            }
            return;
        case BoolKind::Implies:
            if (operand) os << '(';
            print_bool(os, b.first(), b.first().kind() == BoolKind::Implies);
            os << " -> ";
            print_bool(os, b.second(), false);
            if (operand) os << ')';
            return;
    }
}

void print_program(std::ostream& os, const Program& p) {
    switch (p.kind()) {
        case ProgramKind::Assign: os << p.target() << " := " << to_string(p.expr()); return;
        case ProgramKind::Seq:
            print_program(os, p.first());
            os << "; ";
            print_program(os, p.second());
            return;
        case ProgramKind::If:
            os << "if ";
            print_bool(os, p.guard(), false);
            os << " then ";
            print_program(os, p.then_branch());
            os << " else ";
            print_program(os, p.else_branch());
            os << " fi";
            return;
        case ProgramKind::While:
            os << "while ";
            print_bool(os, p.guard(), false);
            os << " do ";
            print_program(os, p.body());
            os << " od";
            return;
    }
}

}  // namespace

std::string to_string(const BoolExpr& b) {
    std::ostringstream os;
    print_bool(os, b, false);
    return os.str();
}

std::string to_string(const Program& p) {
    std::ostringstream os;
    print_program(os, p);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const BoolExpr& b) { return os << to_string(b); }
std::ostream& operator<<(std::ostream& os, const Program& p) { return os << to_string(p); }

}  // namespace hoarith
