// Acceptance gate: ten desk-scale checks, one pass/fail line each.
// Exit code is the number of failed checks.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
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

using namespace srm;

namespace {

using Check = std::function<std::optional<std::string>()>;  // failure detail

std::string fmt_count(size_t n, const char* what) {
    return std::to_string(n) + " " + what;
}

// 1. The equality program tracks native extensional equality.
std::optional<std::string> check_equality() {
    HfGen g(1001);
    size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        HfSet a = g.gen(4);
        HfSet b = i % 4 == 0 ? a : g.gen(4);
        HfSet out = stdlib::run_entry("eq", {a, b});
        if (out != numeral(a == b ? 1 : 0)) ++mismatches;
    }
    if (mismatches) return fmt_count(mismatches, "mismatches in 1000 pairs");
    return std::nullopt;
}

// 2. Every catalogue entry agrees with its native oracle.
std::optional<std::string> check_catalogue() {
    // Rank bounds follow each entry's input shape; every entry gets at
    // least 200 samples.
    const std::map<std::string, uint32_t> rank = {
        {"bigunion", 3},  {"pow", 2},     {"liminf_seq", 2}, {"is_ordseq", 2},
        {"apply_fn", 2},  {"seq_proj", 2}, {"is_func", 2},    {"is_pow", 2},
        {"dom", 2},
    };
    const std::vector<std::string> names = {
        "union2", "intersect2", "singleton", "pair",        "opair",
        "proj1",  "proj2",      "is_opair",  "is_func",     "bigunion",
        "bigintersect", "dom",  "apply_fn",  "is_ordinal",  "is_ordseq",
        "least_sat",    "seq_proj", "pow",   "is_pow",      "liminf_seq",
    };
    uint64_t seed = 2002;
    for (const std::string& name : names) {
        auto it = rank.find(name);
        stdlib::DiffReport r =
            stdlib::differential_test(name, 200, it == rank.end() ? 3 : it->second, seed++);
        if (r.samples < 200 || r.mismatches > 0) return stdlib::render_report(r);
    }
    return std::nullopt;
}

// 3. The stage program computes V_0..V_4 and |V_4| = 16.
std::optional<std::string> check_vstage() {
    for (uint32_t n = 0; n <= 4; ++n)
        if (stdlib::run_entry("vstage", {numeral(n)}) != v_stage(n))
            return "vstage disagrees at n=" + std::to_string(n);
    if (v_stage(4).size() != 16)
        return "|V_4| = " + std::to_string(v_stage(4).size());
    return std::nullopt;
}

// 4. Compiled bounded formulas agree with the evaluator.
std::optional<std::string> check_delta0() {
    HfGen g(4004);
    const std::vector<std::string> vars{"x", "y"};
    size_t mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        SetFormula f = gen_delta0(g, vars, 3, 3);
        Env env{{"x", g.gen(3)}, {"y", g.gen(3)}};
        bool truth = eval_delta0(f, env);
        Program p = expand_macros(compile_delta0(f, vars));
        if (run_as_function(p, {env.at("x"), env.at("y")}, {}, RunLimits{}) !=
            numeral(truth ? 1 : 0))
            ++mismatches;
    }
    if (mismatches) return fmt_count(mismatches, "mismatches in 500 formulas");
    return std::nullopt;
}

// 5. Order laws of the Ackermann order and its enumeration.
std::optional<std::string> check_order() {
    HfGen g(5005);
    for (int i = 0; i < 10'000; ++i) {
        HfSet a = g.gen(4), b = g.gen(4), c = g.gen(4);
        int ways = (ack_less(a, b) ? 1 : 0) + (ack_less(b, a) ? 1 : 0) + (a == b ? 1 : 0);
        if (ways != 1) return "trichotomy fails at triple " + std::to_string(i);
        if (ack_less(a, b) && ack_less(b, c) && !ack_less(a, c))
            return "transitivity fails at triple " + std::to_string(i);
    }
    for (int i = 0; i < 10'000; ++i) {
        HfSet a = g.gen(4), b = g.gen(4);
        if (a.rank() < b.rank() && !ack_less(a, b))
            return "rank monotonicity fails at pair " + std::to_string(i);
    }
    for (uint64_t n = 0; n < 1000; ++n)
        if (f_tau_inv(f_tau(n)) != n) return "f_tau round trip fails at " + std::to_string(n);
    return std::nullopt;
}

// 6. Post-jump configurations equal the liminf of the detected cycle.
std::optional<std::string> check_omega() {
    struct Case {
        const char* src;
        std::vector<HfSet> inputs;
    };
    const std::vector<Case> cases = {
        {"1: ZERO 1\n2: ADD 0 1\n3: REMOVE 0 1\n4: GOTO 2\n", {HfSet()}},
        {"1: ZERO 1\n2: ADD 0 1\n3: REMOVE 0 1\n4: GOTO 2\n", {numeral(2)}},
        {"1: JEZ 0 1\n", {}},
        {"1: ADD 0 1\n2: ADD 0 2\n3: REMOVE 0 2\n4: GOTO 2\n", {HfSet()}},
        {"1: JEZ 9 2\n2: JEZ 9 1\n", {}},
    };
    for (size_t ci = 0; ci < cases.size(); ++ci) {
        Program p = expand_macros(assemble(cases[ci].src));
        RunLimits limits{100'000, 1, 16};
        RunResult res = run(p, cases[ci].inputs, {}, limits);
        std::string where = " in case " + std::to_string(ci);
        if (res.outcome.kind != OutcomeKind::StepBudgetExhausted ||
            res.trace.markers.size() != 1)
            return "no single omega jump" + where;
        const OmegaMarker& m = res.trace.markers[0];
        const auto& entries = res.trace.entries;
        if (entries.size() <= m.after_entry + 1) return "missing post-jump entry" + where;
        const Configuration& post = entries[m.after_entry + 1];

        std::vector<Configuration> cycle(entries.begin() + (m.after_entry + 1 - m.period),
                                         entries.begin() + (m.after_entry + 1));
        size_t min_line = cycle[0].line;
        for (const Configuration& c : cycle) min_line = std::min(min_line, c.line);
        if (post.line != min_line) return "post-jump line is not the cycle minimum" + where;

        for (size_t r = 0; r < post.registers.size(); ++r) {
            std::vector<HfSet> vals;
            for (const Configuration& c : cycle) vals.push_back(c.registers[r]);
            if (post.registers[r] != liminf_cycle(vals))
                return "cycle liminf mismatch at R" + std::to_string(r) + where;
            HfSet acc;
            bool first = true;
            for (size_t rot = 0; rot < vals.size(); ++rot) {
                std::vector<HfSet> window;
                for (size_t t = 0; t < 2 * vals.size(); ++t)
                    window.push_back(vals[(rot + t) % vals.size()]);
                HfSet lf = liminf_formula(window);
                acc = first ? lf : intersect2(acc, lf);
                first = false;
            }
            if (post.registers[r] != acc)
                return "formula liminf mismatch at R" + std::to_string(r) + where;
        }
    }
    return std::nullopt;
}

// A loop that only an omega jump can break: R_1 alternates between {0}
// and {{0}}, the jump empties it, and the program then returns 1.
const char* kOmegaHaltSrc =
    "1: ZERO 2\n2: ZERO 3\n3: ADD 2 3\n4: ZERO 1\n5: ADD 2 1\n"
    "6: JEZ 1 14\n7: JMEM 2 1 11\n8: ZERO 1\n9: ADD 2 1\n10: GOTO 6\n"
    "11: ZERO 1\n12: ADD 3 1\n13: GOTO 6\n14: COPY 3 0\n";

// 7. The trace checker accepts real traces and rejects mutated ones.
std::optional<std::string> check_traces() {
    struct Job {
        Program p;
        std::vector<HfSet> inputs;
    };
    std::vector<Job> jobs;
    Program eq = expand_macros(stdlib::get("eq").program);
    jobs.push_back({eq, {numeral(2), numeral(2)}});
    jobs.push_back({eq, {numeral(1), HfSet::of({numeral(1)})}});
    jobs.push_back({expand_macros(assemble("1: ZERO 1\n2: ADD 1 0\n")), {v_stage(2)}});
    jobs.push_back({expand_macros(assemble(kOmegaHaltSrc)), {}});
    jobs.push_back({expand_macros(stdlib::get("singleton").program), {numeral(3)}});

    std::vector<std::pair<Program, Trace>> traces;
    for (const Job& j : jobs) {
        RunResult res = run(j.p, j.inputs, {}, RunLimits{});
        if (res.outcome.kind != OutcomeKind::Halted) return "a suite program did not halt";
        if (!check_trace(j.p, res.trace, {})) return "a genuine trace was rejected";
        traces.emplace_back(j.p, res.trace);
    }

    std::mt19937_64 rng(7007);
    auto below = [&](size_t n) {
        return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    };
    for (int i = 0; i < 100; ++i) {
        auto [p, t] = traces[i % traces.size()];
        int kind = i % 5;
        if (kind == 4 && t.markers.empty()) kind = 1;
        switch (kind) {
            case 0: {  // deterministic step forces each line choice
                size_t k = 1 + below(t.entries.size() - 1);
                t.entries[k].line += 1;
                break;
            }
            case 1: {  // grow one register: x never contains itself
                size_t k = 1 + below(t.entries.size() - 1);
                size_t r = below(t.entries[k].registers.size());
                HfSet& v = t.entries[k].registers[r];
                v = add_element(v, v);
                break;
            }
            case 2:  // the new last entry has a successor
                t.entries.pop_back();
                break;
            case 3:  // the halting entry cannot step to the duplicate
                t.entries.push_back(t.entries.back());
                break;
            default:  // the shifted cycle no longer closes
                t.markers[0].period += 1;
                break;
        }
        if (check_trace(p, t, {}))
            return "mutation " + std::to_string(i) + " was accepted";
    }
    return std::nullopt;
}

// 8. Oracle queries outside the table diverge at the querying line, and
// extending the table never changes a halted value.
std::optional<std::string> check_oracle() {
    Program direct;  // R_0 := f(R_0)
    direct.lines = {ins_oracle(0, 0)};
    direct.flavor = Flavor::SrmOracle;
    Program wrapped = expand_macros(assemble("1: ZERO 2\n2: ADD 0 2\n3: ORACLE 2 0\n"));

    HfGen g(8008);
    for (int i = 0; i < 50; ++i) {
        bool use_direct = i % 2 == 0;
        const Program& p = use_direct ? direct : wrapped;
        HfSet x = g.gen(3);
        HfSet query = use_direct ? x : HfSet::of({x});
        HfSet answer = g.gen(3);

        RunResult dry = run(p, {x}, {}, RunLimits{});
        if (dry.outcome.kind != OutcomeKind::OracleDiverged)
            return "undefined query did not diverge at case " + std::to_string(i);
        if (dry.outcome.at_line != (use_direct ? 1u : 3u))
            return "divergence reported at line " + std::to_string(dry.outcome.at_line);

        OracleTable table;
        table.set(query, answer);
        RunResult base = run(p, {x}, table, RunLimits{});
        if (base.outcome.kind != OutcomeKind::Halted || base.outcome.value != answer)
            return "defined query did not halt with the table value";

        for (int e = 0; e < 5; ++e) {
            HfSet extra = g.gen(3);
            if (extra == query) continue;
            table.set(extra, g.gen(3));
        }
        RunResult ext = run(p, {x}, table, RunLimits{});
        if (ext.outcome.kind != OutcomeKind::Halted || ext.outcome.value != base.outcome.value)
            return "extending the table changed a halted value at case " + std::to_string(i);
    }
    return std::nullopt;
}

// 9. Tree-model forcing: the excluded-middle refutation, Hilbert axioms
// everywhere on random valid models, and edge monotonicity throughout.
std::optional<std::string> check_beth() {
    RegularBethModel em = em_countermodel();
    if (!validate_model(em).empty()) return "the two-state model does not validate";
    PropFormula exm = PropFormula::disj(PropFormula::atom(0), PropFormula::neg(PropFormula::atom(0)));
    if (check_valid_on(em, exm)) return "the two-state model fails to refute p0 \\/ ~p0";
    if (!force(em, exm).forces(1, PropFormula::atom(0))) return "s1 should force p0";

    std::vector<PropFormula> axioms = hilbert_ipc_axioms();
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        RegularBethModel m = random_valid_model(seed, 6, 3, 3);
        if (!validate_model(m).empty())
            return "seed " + std::to_string(seed) + " produced an invalid model";
        if (m.states.size() > 6) return "model too large at seed " + std::to_string(seed);
        for (const PropFormula& ax : axioms) {
            ForcingTable t = force(m, ax);
            for (size_t s = 0; s < m.states.size(); ++s)
                if (!t.forces(s, ax))
                    return "axiom " + print_prop(ax) + " not forced at seed " +
                           std::to_string(seed);
            for (const PropFormula& sub : t.subformulas())
                for (size_t s = 0; s < m.states.size(); ++s)
                    for (size_t u : m.states[s].successors)
                        if (t.forces(s, sub) && !t.forces(u, sub))
                            return "monotonicity fails at seed " + std::to_string(seed);
        }
    }
    return std::nullopt;
}

// 10. Axiom realizers survive checking on the standard sample; corrupted
// variants are refuted with replayable witnesses.
std::optional<std::string> check_realizers() {
    CheckContext ctx = default_context();
    if (ctx.domain_sample.size() != 22)
        return "standard sample has " + std::to_string(ctx.domain_sample.size()) + " sets";
    for (const std::string& name : axiom_names()) {
        Verdict v = check(get_axiom_realizer(name), axiom_formula(name), ctx);
        if (v.refuted) return name + " refuted: " + v.reason;
        Verdict c1 = check(get_corrupted_realizer(name), axiom_formula(name), ctx);
        Verdict c2 = check(get_corrupted_realizer(name), axiom_formula(name), ctx);
        if (!c1.refuted) return "corrupted " + name + " was not refuted";
        if (c1.reason.empty() || !(c1 == c2))
            return "corrupted " + name + " lacks a replayable witness";
    }
    return std::nullopt;
}

}  // namespace

int main() {
    struct Criterion {
        std::string label;
        Check fn;
        double budget_s;  // 0 = untimed
    };
    const std::vector<Criterion> criteria = {
        {"equality program vs native equality, 1000 pairs of rank <= 4", check_equality, 10},
        {"catalogue entries vs native oracles, 200 samples each", check_catalogue, 0},
        {"stage program computes V_0..V_4 and |V_4| = 16", check_vstage, 5},
        {"compiled bounded formulas vs evaluator, 500 formulas", check_delta0, 60},
        {"order laws: trichotomy, transitivity, rank bound, enumeration", check_order, 0},
        {"omega jumps land on the cycle liminf, 5 cycling programs", check_omega, 0},
        {"trace checker: accepts 5 real traces, rejects 100 mutations", check_traces, 0},
        {"oracle: divergence at the querying line, halted values stable", check_oracle, 0},
        {"tree models: EM refuted, IPC axioms forced, monotone tables", check_beth, 30},
        {"axiom realizers pass, corrupted realizers refuted replayably", check_realizers, 0},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        std::optional<std::string> detail;
        try {
            detail = criteria[i].fn();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (!detail && criteria[i].budget_s > 0 && secs > criteria[i].budget_s)
            detail = "over time budget of " + std::to_string(criteria[i].budget_s) + "s";

        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(1);
        line << (detail ? "[FAIL]" : "[PASS]") << " " << (i + 1) << ". " << criteria[i].label
             << " (" << secs << "s)";
        if (detail) line << ": " << *detail;
        std::cout << line.str() << "\n";
        if (detail) ++failures;
    }
    std::cout << (criteria.size() - failures) << " of " << criteria.size() << " criteria pass\n";
    return failures;
}
