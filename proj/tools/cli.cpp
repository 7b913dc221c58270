#include "cli.hpp"

#include "json_tree.hpp"

#include "hoarith/parse.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hoarith::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A ParseError together with the text it points into, for caret display.
struct LocatedParseError {
    ParseError error;
    std::string source;
    std::string what;  // which input
};

// Positional text arguments: `@path` reads a file, `-` reads stdin.
std::string read_text(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1), std::ios::binary);
        if (!in) throw UsageError("cannot read " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

std::string read_file(const std::string& path) { return read_text(path == "-" ? path : "@" + path); }

template <class F>
auto parsed(const std::string& text, const std::string& what, F&& parse) {
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw LocatedParseError{e, text, what};
    }
}

Formula formula_arg(const std::string& text, const std::string& what = "formula") {
    return parsed(text, what, [](const std::string& t) { return parse_formula(t); });
}

Program program_arg(const std::string& text) {
    return parsed(text, "program", [](const std::string& t) { return parse_program(t); });
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

Nat nat_arg(const std::string& s, const std::string& what) {
    try {
        return Nat::parse(s);
    } catch (const std::invalid_argument&) {
        throw UsageError(what + ": `" + s + "` is not a natural number");
    }
}

// "x=3,y=0"
VarAssignment assignment_arg(const std::string& s) {
    std::map<Var, Nat> m;
    for (const std::string& item : split(s, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value, got `" + item + "`");
        std::string name = item.substr(0, eq);
        name.erase(name.find_last_not_of(" \t") + 1);
        const auto value = item.substr(item.find_first_not_of(" \t", eq + 1) == std::string::npos
                                           ? item.size()
                                           : item.find_first_not_of(" \t", eq + 1));
        m[name] = nat_arg(value, name);
    }
    return VarAssignment{std::move(m)};
}

std::vector<Nat> nats_arg(const std::string& s) {
    std::vector<Nat> out;
    for (const std::string& item : split(s, ',')) out.push_back(nat_arg(item, "argument"));
    return out;
}

std::string show(const VarAssignment& a) {
    std::string s;
    for (const auto& [x, n] : a.entries()) s += (s.empty() ? "" : ", ") + x + "=" + n.to_string();
    return s;
}

std::string show(const TriState& t) {
    if (t.is_true()) return "True";
    if (t.is_false()) return "False";
    return "Unknown (" + t.reason() + ")";
}

int exit_for(const TriState& t) { return t.is_true() ? kOk : t.is_false() ? kFalse : kUnknown; }

struct Options {
    bool json = false;
    std::string text;
    std::string input;
    std::uint64_t fuel = 1'000'000;
    std::size_t out_index = 0;
    std::string inputs;
    std::string assign;
    std::uint64_t qbound = 64;
    std::string pre = "true";
    std::string post = "true";
    std::uint64_t grid = 5;
    std::string params;
    std::string schema;
    std::string args;
    std::string value;
    std::string result = "y";
    std::string var = "y";
    bool run = false;
};

Budget budget_of(const Options& o) {
    Budget b;
    b.q_bound = Nat{o.qbound};
    return b;
}

class Commands {
public:
    Commands(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    int parse_formula_cmd() {
        const Formula f = formula_arg(read_text(o_.text));
        return emit({{"kind", "FormulaResult"}, {"text", to_string(f)}, {"ast", to_json(f)}}, to_string(f));
    }

    int parse_program_cmd() {
        const Program p = program_arg(read_text(o_.text));
        return emit({{"kind", "ProgramResult"}, {"text", to_string(p)}, {"ast", to_json(p)}}, to_string(p));
    }

    int run_cmd() {
        const Program p = program_arg(read_text(o_.text));
        const ProgState in = ProgState::for_program(p, assignment_arg(o_.input));
        const RunOutcome r = run(p, in, o_.fuel);
        const std::string status = r.terminated ? "terminated" : "fuel exhausted";
        const int code = r.terminated ? kOk : kUnknown;
        return emit({{"kind", "RunOutcome"},
                     {"terminated", r.terminated},
                     {"steps", r.steps},
                     {"fuel", o_.fuel},
                     {"state", to_json(r.state)}},
                    status + " after " + std::to_string(r.steps) + " steps: " + r.state.to_string(), code);
    }

    int encode_alpha_cmd() {
        const Program p = program_arg(read_text(o_.text));
        if (o_.out_index == 0) {
            const AlphaSignature sig = alpha_signature(p);
            const Formula f = encode_alpha(p);
            return emit({{"kind", "Alpha"},
                         {"inputs", sig.inputs},
                         {"outputs", sig.outputs},
                         {"text", to_string(f)},
                         {"ast", to_json(f)}},
                        to_string(f));
        }
        const std::vector<Var> ins = o_.inputs.empty() ? program_vars(p) : split(o_.inputs, ',');
        const AlphaOut a = encode_alpha_out(p, o_.out_index, ins, o_.result);
        return emit({{"kind", "AlphaOut"},
                     {"inputs", a.inputs},
                     {"result", a.result},
                     {"text", to_string(a.formula)},
                     {"ast", to_json(a.formula)}},
                    to_string(a.formula));
    }

    int classify_cmd() {
        const Formula f = formula_arg(read_text(o_.text));
        const HierarchyLevel l = classify(f);
        return emit(to_json(l), l.to_string());
    }

    int prenex_cmd() {
        const Formula f = formula_arg(read_text(o_.text));
        const Formula p = prenexify(f);
        const HierarchyLevel l = classify(p);
        return emit({{"kind", "Prenex"}, {"level", to_json(l)}, {"text", to_string(p)}, {"ast", to_json(p)}},
                    to_string(p) + "\n" + l.to_string());
    }

    int eval_cmd() {
        const Formula f = formula_arg(read_text(o_.text));
        const TriState t = eval_formula(f, assignment_arg(o_.assign), budget_of(o_));
        json j = to_json(t);
        j["q_bound"] = std::to_string(o_.qbound);
        return emit(j, show(t), exit_for(t));
    }

    int vc_cmd() {
        const HoareTriple t = triple();
        const Formula f = vc(t);
        return emit({{"kind", "VC"}, {"text", to_string(f)}, {"ast", to_json(f)}}, to_string(f));
    }

    int check_triple_cmd() {
        const HoareTriple t = triple();
        const Verdict v = check_triple(t, Nat{o_.grid}, o_.fuel, budget_of(o_));
        std::ostringstream text;
        text << to_string(v.kind) << " (grid " << v.grid << ", fuel " << v.fuel << ", q_bound " << v.budget.q_bound
             << ")\n";
        if (v.kind == VerdictKind::Counterexample) {
            text << "  input:  " << v.input.to_string() << '\n' << "  output: " << v.output.to_string() << '\n';
            if (!v.params.entries().empty()) text << "  params: " << show(v.params) << '\n';
        }
        text << "  points " << v.stats.points << ", pre true " << v.stats.pre_true << ", terminated "
             << v.stats.terminated << ", fuel exhausted " << v.stats.fuel_exhausted << ", post true "
             << v.stats.post_true;
        for (const std::string& c : v.caveats) text << "\n  caveat: " << c;
        const int code = v.kind == VerdictKind::VerifiedUpTo ? kOk : v.kind == VerdictKind::Counterexample ? kFalse : kUnknown;
        return emit(to_json(v), text.str(), code);
    }

    int xrec_eval_cmd() {
        const Schema h = schema();
        const std::vector<Nat> a = nats_arg(o_.args);
        const XEvalResult r = xrec_eval(h, a, o_.fuel);
        json j = {{"kind", "XEval"}, {"diverged", r.diverged}, {"fuel_spent", r.fuel_spent}, {"fuel", o_.fuel}};
        if (!r.diverged) j["value"] = r.value.to_string();
        const std::string text = r.diverged ? "diverged (fuel " + std::to_string(o_.fuel) + " exhausted)"
                                            : r.value.to_string();
        return emit(j, text, r.diverged ? kUnknown : kOk);
    }

    int xrec_gamma_cmd() {
        const Schema h = schema();
        const Gamma g = gamma(h);
        json j = {{"kind", "Gamma"}, {"inputs", g.inputs}, {"result", g.result}, {"text", to_string(g.formula)},
                  {"ast", to_json(g.formula)}};
        std::string text = to_string(g.formula);
        if (o_.args.empty()) return emit(j, text);
        // With arguments, check gamma at (args, value) using the evaluation trace as witnesses.
        const std::vector<Nat> a = nats_arg(o_.args);
        const XEvalResult r = xrec_eval(h, a, o_.fuel);
        if (r.diverged) {
            j["instance"] = {{"kind", "Diverged"}, {"fuel", o_.fuel}};
            return emit(j, text + "\ninstance: h diverges within fuel " + std::to_string(o_.fuel), kUnknown);
        }
        const Nat b = o_.value.empty() ? r.value : nat_arg(o_.value, "--value");
        const auto inst = instantiate_gamma(h, a, b, o_.fuel);
        const TriState t = inst ? eval_formula(*inst, {}, budget_of(o_)) : TriState::unknown("diverged");
        j["instance"] = {{"kind", "Instance"}, {"value", b.to_string()}, {"verdict", to_json(t)}};
        return emit(j, text + "\ninstance at " + b.to_string() + ": " + show(t), exit_for(t));
    }

    int xrec_compile_cmd() {
        const Schema h = schema();
        const CompiledProgram c = compile_to_while(h, o_.inputs.empty() ? std::vector<Var>{} : split(o_.inputs, ','),
                                                   o_.result);
        return compiled(c);
    }

    int sigma1_cmd() {
        const Formula f = formula_arg(read_text(o_.text));
        Sigma1Options opt;
        if (!o_.inputs.empty()) opt.inputs = split(o_.inputs, ',');
        return compiled(sigma1_to_program(f, o_.result, opt));
    }

    int pi1_cmd() {
        const Formula psi = formula_arg(read_text(o_.text));
        return compiled(pi1_counterexample_program(psi, o_.var));
    }

    int check_proof_cmd() {
        const std::string src = read_file(o_.text);
        const ProofNode p = parsed(src, "proof", [](const std::string& t) { return parse_proof(t); });
        const CheckReport r = check_proof(p, Nat{o_.grid}, budget_of(o_));
        std::ostringstream text;
        text << to_string(r.overall) << " (grid " << r.grid << ", q_bound " << r.budget.q_bound << ")";
        for (const NodeReport& n : r.nodes) {
            text << "\n  " << n.location << ' ' << to_string(n.rule) << ": " << to_string(n.status);
            if (!n.reason.empty()) text << ": " << n.reason;
            for (const Formula& f : n.unknown_conditions) text << "\n    undecided: " << to_string(f);
        }
        for (const std::string& c : r.caveats) text << "\n  caveat: " << c;
        const int code = r.overall == NodeStatus::Accepted ? kOk : r.overall == NodeStatus::Rejected ? kFalse : kUnknown;
        return emit(to_json(r), text.str(), code);
    }

private:
    int emit(const json& j, const std::string& text, int code = kOk) {
        if (o_.json) out_ << j.dump(2) << '\n';
        else out_ << text << '\n';
        return code;
    }

    HoareTriple triple() const {
        HoareTriple t{formula_arg(o_.pre, "precondition"), program_arg(read_text(o_.text)),
                      formula_arg(o_.post, "postcondition"), TripleMode::Plain, {}};
        if (!o_.params.empty()) {
            t.mode = TripleMode::WithParams;
            t.params = split(o_.params, ',');
        }
        return t;
    }

    Schema schema() const {
        const std::string src = read_file(o_.schema);
        return parsed(src, "schema", [](const std::string& t) { return parse_schema(t); });
    }

    // Prints a compiled program and, with --run, executes it on --input.
    int compiled(const CompiledProgram& c) {
        json j = {{"kind", "CompiledProgram"}, {"inputs", c.inputs}, {"output", c.output},
                  {"text", to_string(c.program)}, {"ast", to_json(c.program)}};
        std::string text = to_string(c.program);
        if (!o_.run) return emit(j, text);
        const VarAssignment a = assignment_arg(o_.input);
        const RunOutcome r = run(c.program, ProgState::for_program(c.program, a), o_.fuel);
        j["run"] = {{"kind", "RunOutcome"}, {"terminated", r.terminated}, {"steps", r.steps}, {"fuel", o_.fuel}};
        if (r.terminated) {
            j["run"]["output"] = r.state.get(c.output).to_string();
            text += "\n" + c.output + " = " + r.state.get(c.output).to_string() + " after " + std::to_string(r.steps) +
                    " steps";
        } else {
            text += "\nfuel exhausted after " + std::to_string(r.steps) + " steps";
        }
        return emit(j, text, r.terminated ? kOk : kUnknown);
    }

    const Options& o_;
    std::ostream& out_;
};

void print_parse_error(const LocatedParseError& e, bool as_json, std::ostream& out, std::ostream& err) {
    const SourceSpan sp = e.error.span();
    if (as_json) {
        const json j = {{"kind", "Error"},
                        {"error", "parse"},
                        {"input", e.what},
                        {"message", e.error.message()},
                        {"span", {{"start", sp.start}, {"end", sp.end}}}};
        out << j.dump(2) << '\n';
        return;
    }
    err << "error: " << e.what << ": " << e.error.message() << '\n';
    // Show the offending line with a caret run under the span.
    const std::size_t start = std::min(sp.start, e.source.size());
    const std::size_t line_begin = e.source.rfind('\n', start == 0 ? 0 : start - 1);
    const std::size_t lb = (line_begin == std::string::npos || start == 0) ? 0 : line_begin + 1;
    std::size_t le = e.source.find('\n', start);
    if (le == std::string::npos) le = e.source.size();
    err << "  " << e.source.substr(lb, le - lb) << '\n';
    const std::size_t width = std::max<std::size_t>(1, std::min(sp.end, le) > start ? std::min(sp.end, le) - start : 1);
    err << "  " << std::string(start - lb, ' ') << std::string(width, '^') << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hoarith: while-programs, arithmetic assertions and recursive schemas", "hoarith"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Options o;
    app.add_flag("--json", o.json, "Structured output");

    const std::string text_help = "Input text; @FILE reads a file, - reads stdin";
    auto text_arg = [&](CLI::App* c, const std::string& what) {
        c->add_option("text", o.text, what + ". " + text_help)->required();
    };
    auto fuel_opt = [&](CLI::App* c) { c->add_option("--fuel", o.fuel, "Step budget")->capture_default_str(); };
    auto qbound_opt = [&](CLI::App* c) {
        c->add_option("--qbound", o.qbound, "Candidates probed per unbounded quantifier")->capture_default_str();
    };
    auto grid_opt = [&](CLI::App* c) {
        c->add_option("--grid", o.grid, "Sweep values 0..G for every free variable")->capture_default_str();
    };

    auto* pf = app.add_subcommand("parse-formula", "Parse and print a formula");
    text_arg(pf, "Formula");
    auto* pp = app.add_subcommand("parse-program", "Parse and print a while-program");
    text_arg(pp, "Program");

    auto* rn = app.add_subcommand("run", "Execute a program");
    text_arg(rn, "Program");
    rn->add_option("--input", o.input, "Initial values, e.g. x=3,y=0 (others start at 0)");
    fuel_opt(rn);

    auto* ea = app.add_subcommand("encode-alpha", "Input-output formula of a program");
    text_arg(ea, "Program");
    ea->add_option("--out-index", o.out_index, "Designate the i-th output (1-based)")->check(CLI::PositiveNumber);
    ea->add_option("--inputs", o.inputs, "Input variables for --out-index, e.g. x,y (default: all)");
    ea->add_option("--result", o.result, "Result variable name for --out-index")->capture_default_str();

    auto* cl = app.add_subcommand("classify", "Arithmetical-hierarchy level");
    text_arg(cl, "Formula");
    auto* px = app.add_subcommand("prenex", "Equivalent strict formula at the classified level");
    text_arg(px, "Formula");

    auto* ev = app.add_subcommand("eval", "Three-valued evaluation in the standard model");
    text_arg(ev, "Formula");
    ev->add_option("--assign", o.assign, "Values of free variables, e.g. x=3,y=0");
    qbound_opt(ev);

    auto* vcc = app.add_subcommand("vc", "Verification condition of a triple");
    text_arg(vcc, "Program");
    vcc->add_option("--pre", o.pre, "Precondition")->capture_default_str();
    vcc->add_option("--post", o.post, "Postcondition")->capture_default_str();
    vcc->add_option("--params", o.params, "Logical parameters, e.g. u,v");

    auto* ct = app.add_subcommand("check-triple", "Bounded check of a Hoare triple");
    text_arg(ct, "Program");
    ct->add_option("--pre", o.pre, "Precondition")->capture_default_str();
    ct->add_option("--post", o.post, "Postcondition")->capture_default_str();
    ct->add_option("--params", o.params, "Logical parameters, e.g. u,v");
    grid_opt(ct);
    fuel_opt(ct);
    qbound_opt(ct);

    auto* xr = app.add_subcommand("xrec", "Recursive schemas");
    xr->require_subcommand(1, 1);
    auto schema_opt = [&](CLI::App* c) { c->add_option("--schema", o.schema, "Schema file (- for stdin)")->required(); };
    auto* xe = xr->add_subcommand("eval", "Evaluate a schema");
    schema_opt(xe);
    xe->add_option("--args", o.args, "Arguments, e.g. 3,4");
    fuel_opt(xe);
    auto* xg = xr->add_subcommand("gamma", "Defining formula; with --args also check an instance");
    schema_opt(xg);
    xg->add_option("--args", o.args, "Arguments, e.g. 3,4");
    xg->add_option("--value", o.value, "Claimed value (default: the computed one)");
    fuel_opt(xg);
    qbound_opt(xg);
    auto* xc = xr->add_subcommand("compile", "Compile to a while-program");
    schema_opt(xc);
    xc->add_option("--inputs", o.inputs, "Input variable names (default x1..xn)");
    xc->add_option("--result", o.result, "Output variable")->capture_default_str();

    auto run_opts = [&](CLI::App* c) {
        c->add_flag("--run", o.run, "Also execute the program");
        c->add_option("--input", o.input, "Initial values for --run, e.g. x=3");
        fuel_opt(c);
    };
    auto* s1 = app.add_subcommand("sigma1-compile", "Compile a functional Sigma_1 formula");
    text_arg(s1, "Formula");
    s1->add_option("--result", o.result, "Result variable")->capture_default_str();
    s1->add_option("--inputs", o.inputs, "Input variables (default: the other free variables)");
    run_opts(s1);

    auto* p1 = app.add_subcommand("pi1-program", "Least-counterexample searcher for forall y. psi");
    text_arg(p1, "Formula psi");
    p1->add_option("--var", o.var, "The searched variable")->capture_default_str();
    run_opts(p1);

    auto* cp = app.add_subcommand("check-proof", "Check a proof file");
    cp->add_option("file", o.text, "Proof file (- for stdin)")->required();
    grid_opt(cp);
    qbound_opt(cp);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kUsage;
    }

    Commands cmd(o, out);
    try {
        if (*pf) return cmd.parse_formula_cmd();
        if (*pp) return cmd.parse_program_cmd();
        if (*rn) return cmd.run_cmd();
        if (*ea) return cmd.encode_alpha_cmd();
        if (*cl) return cmd.classify_cmd();
        if (*px) return cmd.prenex_cmd();
        if (*ev) return cmd.eval_cmd();
        if (*vcc) return cmd.vc_cmd();
        if (*ct) return cmd.check_triple_cmd();
        if (*xe) return cmd.xrec_eval_cmd();
        if (*xg) return cmd.xrec_gamma_cmd();
        if (*xc) return cmd.xrec_compile_cmd();
        if (*s1) return cmd.sigma1_cmd();
        if (*p1) return cmd.pi1_cmd();
        if (*cp) return cmd.check_proof_cmd();
    } catch (const LocatedParseError& e) {
        print_parse_error(e, o.json, out, err);
        return kUsage;
    } catch (const FunctionalityError& e) {
        if (o.json) out << json{{"kind", "Error"}, {"error", "not-functional"}, {"message", e.what()}}.dump(2) << '\n';
        else err << "not functional: " << e.what() << '\n';
        return kFalse;
    } catch (const std::exception& e) {
        // Usage mistakes surface as invalid_argument / out_of_range from the library.
        if (o.json) out << json{{"kind", "Error"}, {"error", "usage"}, {"message", e.what()}}.dump(2) << '\n';
        else err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace hoarith::cli
