#include "hoarith/proof.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace hoarith {

std::string to_string(ProofRule r) {
    switch (r) {
        case ProofRule::Assign: return "assign";
        case ProofRule::Seq: return "seq";
        case ProofRule::Cond: return "cond";
        case ProofRule::While: return "while";
        case ProofRule::Conseq: return "conseq";
    }
    return "?";
}

std::string to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::Accepted: return "Accepted";
        case NodeStatus::SideConditionUnknown: return "SideConditionUnknown";
        case NodeStatus::Rejected: return "Rejected";
    }
    return "?";
}

namespace {

std::size_t expected_premises(ProofRule r) {
    switch (r) {
        case ProofRule::Assign: return 0;
        case ProofRule::Seq:
        case ProofRule::Cond: return 2;
        case ProofRule::While:
        case ProofRule::Conseq: return 1;
    }
    return 0;
}

bool same_program(const Program& a, const Program& b) {
    return programs_equal(right_associate(a), right_associate(b));
}

enum class Sweep : std::uint8_t { AllTrue, SomeFalse, Unknown };

struct SweepResult {
    Sweep verdict = Sweep::AllTrue;
    VarAssignment witness;  // SomeFalse: the falsifying point
};

// Sweeps the implication a -> b over every assignment of its free variables
// with values <= grid.
SweepResult sweep(const Formula& a, const Formula& b, std::uint64_t grid, const Budget& budget) {
    const Formula imp = Formula::implies(a, b);
    const std::vector<Var> vars = free_vars_ordered(imp);
    std::vector<std::uint64_t> point(vars.size(), 0);
    SweepResult out;
    while (true) {
        std::map<Var, Nat> m;
        for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], Nat{point[i]});
        const VarAssignment v{std::move(m)};
        const TriState t = eval_formula(imp, v, budget);
        if (t.is_false()) return {Sweep::SomeFalse, v};
        if (t.is_unknown()) out.verdict = Sweep::Unknown;
        std::size_t i = 0;
        while (i < point.size() && point[i] == grid) point[i++] = 0;
        if (i == point.size()) break;
        ++point[i];
    }
    return out;
}

std::string show_point(const VarAssignment& v) {
    std::string s;
    for (const auto& [x, n] : v.entries()) {
        if (!s.empty()) s += ", ";
        s += x + "=" + n.to_string();
    }
    return s.empty() ? "(closed)" : s;
}

class Checker {
public:
    Checker(std::uint64_t grid, Budget b) : grid_(grid), budget_(std::move(b)) {}

    void visit(const ProofNode& n, const std::string& path) {
        NodeReport r;
        r.location = path;
        if (n.line != 0) r.location += " (line " + std::to_string(n.line) + ")";
        r.rule = n.rule;
        check(n, r);
        const std::size_t at = report.nodes.size();
        report.nodes.push_back(std::move(r));
        if (n.premises.size() == expected_premises(n.rule)) {
            for (std::size_t i = 0; i < n.premises.size(); ++i) visit(n.premises[i], path + "." + std::to_string(i + 1));
        }
        const NodeStatus s = report.nodes[at].status;
        if (s == NodeStatus::Rejected) report.overall = NodeStatus::Rejected;
        else if (s == NodeStatus::SideConditionUnknown && report.overall == NodeStatus::Accepted)
            report.overall = NodeStatus::SideConditionUnknown;
    }

    CheckReport report;

private:
    static void reject(NodeReport& r, std::string why) {
        r.status = NodeStatus::Rejected;
        r.reason = std::move(why);
    }

    void check(const ProofNode& n, NodeReport& r) {
        const HoareTriple& c = n.conclusion;
        if (c.mode != TripleMode::Plain) return reject(r, "proof conclusions must be plain triples");
        if (n.premises.size() != expected_premises(n.rule)) {
            return reject(r, to_string(n.rule) + " takes " + std::to_string(expected_premises(n.rule)) +
                                 " premise(s), got " + std::to_string(n.premises.size()));
        }
        if (n.rule != ProofRule::While && n.invariant) return reject(r, "only while nodes carry an invariant");
        switch (n.rule) {
            case ProofRule::Assign: return check_assign(c, r);
            case ProofRule::Seq: return check_seq(n, r);
            case ProofRule::Cond: return check_cond(n, r);
            case ProofRule::While: return check_while(n, r);
            case ProofRule::Conseq: return check_conseq(n, r);
        }
    }

    static void check_assign(const HoareTriple& c, NodeReport& r) {
        if (c.prog.kind() != ProgramKind::Assign) return reject(r, "program is not an assignment");
        const Formula want = substitute(c.post, c.prog.target(), c.prog.expr());
        if (!alpha_equivalent(c.pre, want))
            reject(r, "precondition should be " + to_string(want) + ", got " + to_string(c.pre));
    }

    static void check_seq(const ProofNode& n, NodeReport& r) {
        const HoareTriple& c = n.conclusion;
        const HoareTriple& l = n.premises[0].conclusion;
        const HoareTriple& rt = n.premises[1].conclusion;
        if (c.prog.kind() != ProgramKind::Seq) return reject(r, "program is not a sequence");
        if (!same_program(Program::seq(l.prog, rt.prog), c.prog))
            return reject(r, "premise programs do not compose to the conclusion program");
        if (!alpha_equivalent(l.pre, c.pre)) return reject(r, "first premise precondition differs from the conclusion");
        if (!alpha_equivalent(rt.post, c.post))
            return reject(r, "second premise postcondition differs from the conclusion");
        if (!alpha_equivalent(l.post, rt.pre))
            reject(r, "middle assertions differ: " + to_string(l.post) + " vs " + to_string(rt.pre));
    }

    static void check_cond(const ProofNode& n, NodeReport& r) {
        const HoareTriple& c = n.conclusion;
        if (c.prog.kind() != ProgramKind::If) return reject(r, "program is not a conditional");
        const Formula b = to_formula(c.prog.guard());
        const HoareTriple& t = n.premises[0].conclusion;
        const HoareTriple& e = n.premises[1].conclusion;
        if (!same_program(t.prog, c.prog.then_branch())) return reject(r, "first premise is not about the then branch");
        if (!same_program(e.prog, c.prog.else_branch())) return reject(r, "second premise is not about the else branch");
        const Formula tpre = Formula::conj(c.pre, b);
        const Formula epre = Formula::conj(c.pre, Formula::neg(b));
        if (!alpha_equivalent(t.pre, tpre)) return reject(r, "then precondition should be " + to_string(tpre));
        if (!alpha_equivalent(e.pre, epre)) return reject(r, "else precondition should be " + to_string(epre));
        if (!alpha_equivalent(t.post, c.post) || !alpha_equivalent(e.post, c.post))
            reject(r, "branch postconditions differ from the conclusion");
    }

    static void check_while(const ProofNode& n, NodeReport& r) {
        const HoareTriple& c = n.conclusion;
        if (c.prog.kind() != ProgramKind::While) return reject(r, "program is not a while loop");
        if (!n.invariant) return reject(r, "while node needs an invariant");
        const Formula& inv = *n.invariant;
        const Formula b = to_formula(c.prog.guard());
        if (!alpha_equivalent(c.pre, inv)) return reject(r, "precondition is not the invariant");
        const Formula post = Formula::conj(inv, Formula::neg(b));
        if (!alpha_equivalent(c.post, post)) return reject(r, "postcondition should be " + to_string(post));
        const HoareTriple& body = n.premises[0].conclusion;
        if (!same_program(body.prog, c.prog.body())) return reject(r, "premise is not about the loop body");
        const Formula bpre = Formula::conj(inv, b);
        if (!alpha_equivalent(body.pre, bpre)) return reject(r, "body precondition should be " + to_string(bpre));
        if (!alpha_equivalent(body.post, inv)) reject(r, "body postcondition is not the invariant");
    }

    void check_conseq(const ProofNode& n, NodeReport& r) const {
        const HoareTriple& c = n.conclusion;
        const HoareTriple& in = n.premises[0].conclusion;
        if (!same_program(in.prog, c.prog)) return reject(r, "premise program differs from the conclusion");
        const std::pair<Formula, Formula> conds[] = {{c.pre, in.pre}, {in.post, c.post}};
        for (const auto& [a, b] : conds) {
            const SweepResult s = sweep(a, b, grid_, budget_);
            const Formula closed = Formula::forall_all(free_vars_ordered(Formula::implies(a, b)), Formula::implies(a, b));
            if (s.verdict == Sweep::SomeFalse) {
                return reject(r, "side condition " + to_string(closed) + " fails at " + show_point(s.witness));
            }
            if (s.verdict == Sweep::Unknown) {
                r.status = NodeStatus::SideConditionUnknown;
                r.unknown_conditions.push_back(closed);
            }
        }
    }

    std::uint64_t grid_;
    Budget budget_;
};

}  // namespace

CheckReport check_proof(const ProofNode& p, const Nat& grid, const Budget& b) {
    const auto g = grid.to_u64();
    if (!g) throw std::invalid_argument("check_proof: grid too large");
    Checker ck(*g, b);
    ck.report.grid = grid;
    ck.report.budget = b;
    ck.visit(p, "1");
    if (ck.report.overall == NodeStatus::SideConditionUnknown)
        ck.report.caveats.push_back("some consequence side conditions were not decided within the evaluation budget");
    return ck.report;
}

// --- block format -------------------------------------------------------------

namespace {

struct Line {
    std::string_view text;  // trimmed
    std::size_t offset = 0;
    std::size_t number = 0;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class ProofParser {
public:
    explicit ProofParser(std::string_view text) {
        std::size_t pos = 0;
        std::size_t number = 1;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view raw = text.substr(pos, nl - pos);
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            const std::string_view t = trim(raw);
            if (!t.empty()) lines_.push_back({t, pos + static_cast<std::size_t>(t.data() - raw.data()), number});
            pos = nl + 1;
            ++number;
        }
        end_ = text.size();
    }

    ProofNode parse() {
        if (lines_.empty()) throw ParseError("empty proof", {0, 0});
        ProofNode root = block();
        if (i_ != lines_.size()) fail(lines_[i_], "text after the root block");
        return root;
    }

private:
    [[noreturn]] static void fail(const Line& l, const std::string& msg) {
        throw ParseError("line " + std::to_string(l.number) + ": " + msg, {l.offset, l.offset + l.text.size()});
    }

    static std::optional<ProofRule> rule_of(std::string_view w) {
        if (w == "assign") return ProofRule::Assign;
        if (w == "seq") return ProofRule::Seq;
        if (w == "cond") return ProofRule::Cond;
        if (w == "while") return ProofRule::While;
        if (w == "conseq") return ProofRule::Conseq;
        return std::nullopt;
    }

    // Re-anchors a ParseError raised inside a field value to the whole text.
    template <class F>
    static auto field(const Line& l, std::size_t value_at, std::string_view value, F&& parse) {
        try {
            return parse(value);
        } catch (const ParseError& e) {
            const std::size_t base = l.offset + value_at;
            throw ParseError("line " + std::to_string(l.number) + ": " + e.message(),
                             {base + e.span().start, base + e.span().end});
        }
    }

    ProofNode block() {
        const Line head = lines_[i_];
        if (head.text.size() < 2 || head.text.back() != '{') fail(head, "expected `<rule> {`");
        const auto rule = rule_of(trim(head.text.substr(0, head.text.size() - 1)));
        if (!rule) fail(head, "unknown rule; expected assign, seq, cond, while or conseq");
        ++i_;
        std::vector<ProofNode> premises;
        std::optional<Formula> inv;
        std::optional<Formula> pre;
        std::optional<Formula> post;
        std::optional<Program> prog;
        while (true) {
            if (i_ == lines_.size()) throw ParseError("line " + std::to_string(head.number) + ": unclosed block", {head.offset, end_});
            const Line l = lines_[i_];
            if (l.text == "}") {
                ++i_;
                break;
            }
            if (l.text.back() == '{') {
                premises.push_back(block());
                continue;
            }
            ++i_;
            // Keys are plain words, so the first colon ends the key even when the value holds `:=`.
            const auto colon = l.text.find(':');
            if (colon == std::string_view::npos) fail(l, "expected `key: value`");
            const std::string_view key = trim(l.text.substr(0, colon));
            std::string_view value = l.text.substr(colon + 1);
            const std::size_t lead = value.find_first_not_of(" \t");
            const std::size_t value_at = colon + 1 + (lead == std::string_view::npos ? value.size() : lead);
            value = trim(value);
            if (!premises.empty()) fail(l, "fields must come before premise blocks");
            auto once = [&](bool seen) {
                if (seen) fail(l, "duplicate field `" + std::string(key) + "`");
            };
            if (key == "pre") {
                once(pre.has_value());
                pre = field(l, value_at, value, [](std::string_view v) { return parse_formula(v); });
            } else if (key == "post") {
                once(post.has_value());
                post = field(l, value_at, value, [](std::string_view v) { return parse_formula(v); });
            } else if (key == "prog") {
                once(prog.has_value());
                prog = field(l, value_at, value, [](std::string_view v) { return parse_program(v); });
            } else if (key == "inv") {
                once(inv.has_value());
                if (*rule != ProofRule::While) fail(l, "`inv` belongs to while blocks");
                inv = field(l, value_at, value, [](std::string_view v) { return parse_formula(v); });
            } else {
                fail(l, "unknown field `" + std::string(key) + "`");
            }
        }
        if (!pre || !prog || !post) fail(head, "block needs pre, prog and post fields");
        if (*rule == ProofRule::While && !inv) fail(head, "while block needs an inv field");
        return ProofNode{*rule, HoareTriple{*pre, *prog, *post, TripleMode::Plain, {}}, std::move(inv), std::move(premises),
                         head.number};
    }

    std::vector<Line> lines_;
    std::size_t i_ = 0;
    std::size_t end_ = 0;
};

void print(const ProofNode& n, int depth, std::ostringstream& os) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << to_string(n.rule) << " {\n";
    if (n.invariant) os << pad << "  inv: " << to_string(*n.invariant) << '\n';
    os << pad << "  pre: " << to_string(n.conclusion.pre) << '\n';
    os << pad << "  prog: " << to_string(n.conclusion.prog) << '\n';
    os << pad << "  post: " << to_string(n.conclusion.post) << '\n';
    for (const ProofNode& p : n.premises) print(p, depth + 1, os);
    os << pad << "}\n";
}

}  // namespace

ProofNode parse_proof(std::string_view text) { return ProofParser(text).parse(); }

std::string to_string(const ProofNode& p) {
    std::ostringstream os;
    print(p, 0, os);
    return os.str();
}

}  // namespace hoarith
