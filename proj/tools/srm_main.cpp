// srm: command-line surface over the register machine toolkit.
//
// Exit codes: 0 success, 1 semantic failure (program invalid, run did not
// halt, mismatches, refuted realizer, countermodel found, formula not
// forced), 2 usage or parse errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "srm/asm.hpp"
#include "srm/beth.hpp"
#include "srm/delta0.hpp"
#include "srm/errors.hpp"
#include "srm/hfgen.hpp"
#include "srm/hfset.hpp"
#include "srm/lang.hpp"
#include "srm/realize.hpp"
#include "srm/stdlib.hpp"
#include "srm/vm.hpp"

namespace {

using namespace srm;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Defaults for --max-steps/--max-limits/--max-pow, overridable by the
// environment variable SRM_DEFAULT_LIMITS=<steps>,<jumps>,<pow>.
RunLimits limits_from_env() {
    RunLimits l{};
    const char* env = std::getenv("SRM_DEFAULT_LIMITS");
    if (!env) return l;
    uint64_t v[3];
    char extra;
    if (std::sscanf(env, "%lu,%lu,%lu%c", &v[0], &v[1], &v[2], &extra) != 3)
        throw Error("SRM_DEFAULT_LIMITS: expected <steps>,<jumps>,<pow>");
    l.max_steps = v[0];
    l.max_limit_jumps = v[1];
    l.max_powerset_input = v[2];
    return l;
}

void add_limit_flags(CLI::App* cmd, RunLimits& limits) {
    cmd->add_option("--max-steps", limits.max_steps, "finite step budget")
        ->capture_default_str();
    cmd->add_option("--max-limits", limits.max_limit_jumps, "omega-jump budget")
        ->capture_default_str();
    cmd->add_option("--max-pow", limits.max_powerset_input, "largest POW input size")
        ->capture_default_str();
}

// `<hf> => <hf>` per line; whole-line '#' comments (trailing comments would
// be ambiguous, '#n' is numeral syntax); inputs not listed are undefined.
OracleTable parse_oracle_file(const std::string& path) {
    OracleTable table;
    std::istringstream in(read_file(path));
    std::string raw;
    size_t no = 0;
    while (std::getline(in, raw)) {
        ++no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t arrow = line.find("=>");
        if (arrow == std::string::npos)
            throw ParseError(no, "oracle line needs '<hf> => <hf>'");
        table.set(parse_hf(trim(line.substr(0, arrow))), parse_hf(trim(line.substr(arrow + 2))));
    }
    return table;
}

std::vector<HfSet> parse_inputs(const std::vector<std::string>& texts) {
    std::vector<HfSet> inputs;
    for (const std::string& t : texts) inputs.push_back(parse_hf(trim(t)));
    return inputs;
}

// Returns the expanded program; diagnostics go to stderr.  Error-level
// diagnostics make the program unusable.
Program load_program(const std::string& path, bool& bad) {
    Program p = expand_macros(assemble(read_file(path)));
    std::vector<Diagnostic> ds = validate(p);
    for (const Diagnostic& d : ds) {
        std::cerr << (d.severity == Diagnostic::Severity::Error ? "error" : "warning");
        if (d.line) std::cerr << " at line " << d.line;
        std::cerr << ": " << d.message << "\n";
    }
    bad = has_errors(ds);
    return p;
}

int cmd_asm(const std::string& file) {
    bool bad = false;
    Program p = load_program(file, bad);
    if (bad) return 1;
    std::cout << print_hf(encode_program(p)) << "\n";
    return 0;
}

int cmd_dis(const std::string& file) {
    std::cout << disassemble(decode_program(parse_hf(trim(read_file(file)))));
    return 0;
}

int cmd_run(const std::string& file, const std::vector<std::string>& in_texts,
            const std::string& oracle_file, const std::string& trace_file,
            const RunLimits& limits) {
    bool bad = false;
    Program p = load_program(file, bad);
    if (bad) return 1;
    OracleTable table;
    if (!oracle_file.empty()) table = parse_oracle_file(oracle_file);

    RunResult res = run(p, parse_inputs(in_texts), table, limits);
    std::cout << "outcome: " << outcome_name(res.outcome.kind) << "\n";
    std::cout << "steps: " << res.outcome.steps << "\n";
    std::cout << "omega-jumps: " << res.outcome.limit_jumps << "\n";
    if (res.outcome.kind == OutcomeKind::OracleDiverged)
        std::cout << "at-line: " << res.outcome.at_line << "\n";
    if (res.outcome.kind == OutcomeKind::Halted)
        std::cout << "R0: " << print_hf(res.outcome.value, HfStyle::Pretty) << "\n";
    if (!trace_file.empty()) write_file(trace_file, print_trace(res.trace));
    return res.outcome.kind == OutcomeKind::Halted ? 0 : 1;
}

int cmd_check_trace(const std::string& prog_file, const std::string& trace_file,
                    const std::string& oracle_file, const RunLimits& limits) {
    bool bad = false;
    Program p = load_program(prog_file, bad);
    if (bad) return 1;
    OracleTable table;
    if (!oracle_file.empty()) table = parse_oracle_file(oracle_file);
    Trace t = parse_trace(read_file(trace_file));
    bool ok = check_trace(p, t, table, limits);
    std::cout << (ok ? "trace: ok" : "trace: rejected") << "\n";
    return ok ? 0 : 1;
}

int cmd_stdlib_run(const std::string& name, const std::vector<std::string>& in_texts,
                   const RunLimits& limits) {
    try {
        HfSet out = stdlib::run_entry(name, parse_inputs(in_texts), limits);
        std::cout << print_hf(out, HfStyle::Pretty) << "\n";
        return 0;
    } catch (const VmFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_stdlib_fuzz(const std::string& name, size_t samples, uint32_t max_rank, uint64_t seed) {
    std::vector<std::string> names =
        name.empty() ? stdlib::list() : std::vector<std::string>{name};
    size_t mismatches = 0;
    for (const std::string& n : names) {
        stdlib::DiffReport r = stdlib::differential_test(n, samples, max_rank, seed);
        std::cout << stdlib::render_report(r) << "\n";
        mismatches += r.mismatches;
    }
    return mismatches == 0 ? 0 : 1;
}

Env parse_bindings(const std::vector<std::string>& binds) {
    Env env;
    for (const std::string& b : binds) {
        size_t eq = b.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("bad binding '" + b + "': expected <var>=<hf>");
        env[trim(b.substr(0, eq))] = parse_hf(trim(b.substr(eq + 1)));
    }
    return env;
}

int cmd_delta0_eval(const std::string& formula, const std::vector<std::string>& binds) {
    bool v = eval_delta0(parse_setformula(formula), parse_bindings(binds));
    std::cout << (v ? "true" : "false") << "\n";
    return 0;
}

int cmd_delta0_compile(const std::string& formula, const std::string& args_list) {
    SetFormula f = parse_setformula(formula);
    MacroProgram mp;
    if (args_list.empty()) {
        mp = compile_delta0(f);
    } else {
        std::vector<std::string> args;
        std::istringstream in(args_list);
        std::string tok;
        while (std::getline(in, tok, ',')) args.push_back(trim(tok));
        mp = compile_delta0(f, args);
    }
    std::cout << disassemble(mp);
    return 0;
}

int cmd_delta0_fuzz(size_t count, uint32_t depth, uint32_t rank, uint64_t seed,
                    const RunLimits& limits) {
    HfGen g(seed);
    const std::vector<std::string> vars{"x", "y"};
    size_t mismatches = 0;
    for (size_t i = 0; i < count; ++i) {
        SetFormula f = gen_delta0(g, vars, depth, rank);
        Env env{{"x", g.gen(rank)}, {"y", g.gen(rank)}};
        bool truth = eval_delta0(f, env);
        Program p = expand_macros(compile_delta0(f, vars));
        HfSet out = run_as_function(p, {env.at("x"), env.at("y")}, {}, limits);
        if (out != numeral(truth ? 1 : 0)) {
            ++mismatches;
            if (mismatches <= 5)
                std::cout << "mismatch: " << print_setformula(f)
                          << "  x=" << print_hf(env.at("x")) << "  y=" << print_hf(env.at("y"))
                          << "\n";
        }
    }
    std::cout << "formulas: " << count << "\nmismatches: " << mismatches << "\n";
    return mismatches == 0 ? 0 : 1;
}

int cmd_realize_check(const std::string& name, bool all, bool corrupted) {
    std::vector<std::string> names = all ? axiom_names() : std::vector<std::string>{name};
    CheckContext ctx = default_context();
    int rc = 0;
    for (const std::string& n : names) {
        Realizer r = corrupted ? get_corrupted_realizer(n) : get_axiom_realizer(n);
        Verdict v = check(r, axiom_formula(n), ctx);
        if (!v.refuted) {
            std::cout << n << ": not refuted\n";
            continue;
        }
        rc = 1;
        std::cout << n << ": refuted\n";
        for (const std::string& step : v.path) std::cout << "  at: " << step << "\n";
        std::cout << "  reason: " << v.reason << "\n";
    }
    return rc;
}

int cmd_beth_validate(const std::string& file) {
    RegularBethModel m = parse_beth_model(read_file(file));
    std::vector<ModelDiagnostic> ds = validate_model(m);
    if (ds.empty()) {
        std::cout << "valid\n";
        return 0;
    }
    for (const ModelDiagnostic& d : ds)
        std::cout << d.check << " at " << m.states[d.state].name << ": " << d.message << "\n";
    return 1;
}

int cmd_beth_force(const std::string& file, const std::string& formula) {
    RegularBethModel m = parse_beth_model(read_file(file));
    std::vector<ModelDiagnostic> ds = validate_model(m);
    if (!ds.empty()) {
        for (const ModelDiagnostic& d : ds)
            std::cerr << d.check << " at " << m.states[d.state].name << ": " << d.message
                      << "\n";
        return 1;
    }
    PropFormula a = parse_prop(formula);
    ForcingTable t = force(m, a);
    bool at_root = t.forces(m.root, a);
    std::cout << "root: " << (at_root ? "forced" : "not forced") << "\n";
    for (size_t s = 0; s < m.states.size(); ++s)
        std::cout << "state " << m.states[s].name << ": "
                  << (t.forces(s, a) ? "forced" : "not forced") << "\n";
    return at_root ? 0 : 1;
}

int cmd_beth_search(const std::string& formula, size_t max_states, size_t max_branching) {
    auto found = countermodel_search(parse_prop(formula), max_states, max_branching);
    if (!found) {
        std::cout << "no countermodel found\n";
        return 0;
    }
    std::cout << print_beth_model(*found);
    return 1;
}

int cmd_visser(size_t n) {
    auto [antecedent, consequent] = visser_rule(n);
    AtomNamer namer = visser_atom_namer(n);
    std::cout << "antecedent: " << print_prop(antecedent, namer) << "\n";
    std::cout << "consequent: " << print_prop(consequent, namer) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    int rc = 0;
    try {
        CLI::App app{"set register machine toolkit"};
        app.require_subcommand(1);
        RunLimits limits = limits_from_env();

        std::string file, trace_file, oracle_file, formula, name, args_list;
        std::vector<std::string> in_texts, binds;
        size_t samples = 200, count = 500, max_states = 4, max_branching = 3, n = 1;
        uint32_t max_rank = 4, depth = 3;
        uint64_t seed = 1;
        bool all = false, corrupted = false;

        CLI::App* c_asm = app.add_subcommand("asm", "assemble and print the program's set code");
        c_asm->add_option("file", file, "assembly text ('-' for stdin)")->required();
        c_asm->callback([&] { rc = cmd_asm(file); });

        CLI::App* c_dis = app.add_subcommand("dis", "decode a set code and print assembly");
        c_dis->add_option("file", file, "HF literal of a program code")->required();
        c_dis->callback([&] { rc = cmd_dis(file); });

        CLI::App* c_run = app.add_subcommand("run", "run a program");
        c_run->add_option("file", file, "assembly text")->required();
        c_run->add_option("--in", in_texts, "input registers R_0.. as HF literals");
        c_run->add_option("--oracle", oracle_file, "oracle table file of '<hf> => <hf>' lines");
        c_run->add_option("--trace", trace_file, "write the run's trace to this file");
        add_limit_flags(c_run, limits);
        c_run->callback([&] { rc = cmd_run(file, in_texts, oracle_file, trace_file, limits); });

        CLI::App* c_ct = app.add_subcommand("check-trace", "verify a trace against a program");
        c_ct->add_option("program", file, "assembly text")->required();
        c_ct->add_option("trace", trace_file, "trace file")->required();
        c_ct->add_option("--oracle", oracle_file, "oracle table file");
        add_limit_flags(c_ct, limits);
        c_ct->callback([&] { rc = cmd_check_trace(file, trace_file, oracle_file, limits); });

        CLI::App* c_stdlib = app.add_subcommand("stdlib", "program library access");
        c_stdlib->require_subcommand(1);
        CLI::App* c_list = c_stdlib->add_subcommand("list", "list library entries");
        c_list->callback([&] {
            for (const std::string& entry : stdlib::list()) std::cout << entry << "\n";
        });
        CLI::App* c_srun = c_stdlib->add_subcommand("run", "run a library entry");
        c_srun->add_option("name", name, "entry name")->required();
        c_srun->add_option("--in", in_texts, "arguments as HF literals");
        add_limit_flags(c_srun, limits);
        c_srun->callback([&] { rc = cmd_stdlib_run(name, in_texts, limits); });
        CLI::App* c_fuzz = c_stdlib->add_subcommand("fuzz", "differential-test entries");
        c_fuzz->add_option("name", name, "entry name (default: all)");
        c_fuzz->add_option("--samples", samples, "samples per entry")->capture_default_str();
        c_fuzz->add_option("--max-rank", max_rank, "input rank bound")->capture_default_str();
        c_fuzz->add_option("--seed", seed, "random seed")->capture_default_str();
        c_fuzz->callback([&] { rc = cmd_stdlib_fuzz(name, samples, max_rank, seed); });

        CLI::App* c_d0 = app.add_subcommand("delta0", "bounded-formula tooling");
        c_d0->require_subcommand(1);
        CLI::App* c_eval = c_d0->add_subcommand("eval", "evaluate a bounded formula");
        c_eval->add_option("formula", formula, "set formula text")->required();
        c_eval->add_option("--bind", binds, "free-variable binding <var>=<hf>");
        c_eval->callback([&] { rc = cmd_delta0_eval(formula, binds); });
        CLI::App* c_comp = c_d0->add_subcommand("compile", "compile a bounded formula");
        c_comp->add_option("formula", formula, "set formula text")->required();
        c_comp->add_option("--args", args_list,
                           "comma-separated argument variables (default: free variables)");
        c_comp->callback([&] { rc = cmd_delta0_compile(formula, args_list); });
        CLI::App* c_dfuzz = c_d0->add_subcommand("fuzz", "compare compiler against evaluator");
        c_dfuzz->add_option("--count", count, "formulas to try")->capture_default_str();
        c_dfuzz->add_option("--depth", depth, "formula depth bound")->capture_default_str();
        c_dfuzz->add_option("--rank", max_rank, "constant/argument rank bound")
            ->capture_default_str();
        c_dfuzz->add_option("--seed", seed, "random seed")->capture_default_str();
        add_limit_flags(c_dfuzz, limits);
        c_dfuzz->callback([&] { rc = cmd_delta0_fuzz(count, depth, max_rank, seed, limits); });

        CLI::App* c_re = app.add_subcommand("realize", "realizer checking");
        c_re->require_subcommand(1);
        CLI::App* c_rcheck = c_re->add_subcommand("check", "check an axiom realizer");
        c_rcheck->add_option("name", name, "axiom name");
        c_rcheck->add_flag("--all", all, "check every axiom");
        c_rcheck->add_flag("--corrupted", corrupted, "use the deliberately broken variant");
        c_rcheck->callback([&] {
            if (!all && name.empty()) throw CLI::ValidationError("realize check needs a name or --all");
            rc = cmd_realize_check(name, all, corrupted);
        });

        CLI::App* c_beth = app.add_subcommand("beth", "regular tree model tooling");
        c_beth->require_subcommand(1);
        CLI::App* c_bval = c_beth->add_subcommand("validate", "check model soundness");
        c_bval->add_option("file", file, "model file")->required();
        c_bval->callback([&] { rc = cmd_beth_validate(file); });
        CLI::App* c_bforce = c_beth->add_subcommand("force", "compute forcing of a formula");
        c_bforce->add_option("file", file, "model file")->required();
        c_bforce->add_option("formula", formula, "propositional formula")->required();
        c_bforce->callback([&] { rc = cmd_beth_force(file, formula); });
        CLI::App* c_bsearch = c_beth->add_subcommand("search", "search for a countermodel");
        c_bsearch->add_option("formula", formula, "propositional formula")->required();
        c_bsearch->add_option("--max-states", max_states, "state budget")->capture_default_str();
        c_bsearch->add_option("--max-branching", max_branching, "branching budget")
            ->capture_default_str();
        c_bsearch->callback([&] { rc = cmd_beth_search(formula, max_states, max_branching); });

        CLI::App* c_vis = app.add_subcommand("visser", "print the n-th restricted rule");
        c_vis->add_option("n", n, "rule index")->required();
        c_vis->callback([&] { rc = cmd_visser(n); });

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
    } catch (const srm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
