#include "srm/stdlib.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <utility>

namespace srm::stdlib {

namespace {

// Program sources embedded at build time, sorted by name.
constexpr std::pair<const char*, const char*> kSources[] = {
#include "stdlib_programs.inc"
};

const char* source_text(const std::string& name) {
    for (const auto& [n, text] : kSources)
        if (name == n) return text;
    throw UnknownName(name);
}

using Args = std::vector<HfSet>;
using Oracle = std::function<HfSet(const Args&)>;
using Sampler = std::function<Args(HfGen&, uint32_t)>;

HfSet boolean(bool b) { return numeral(b ? 1 : 0); }

// An ordered pair, degenerate with probability 1/4.
HfSet sample_pair(HfGen& g, uint32_t r) {
    HfSet x = g.gen(r);
    HfSet y = g.coin(0.25) ? x : g.gen(r);
    return ordered_pair(x, y);
}

// A random subset of x, to make intersections nontrivial.
HfSet sample_subset(HfGen& g, const HfSet& x) {
    std::vector<HfSet> keep;
    for (const HfSet& e : x.elems())
        if (g.coin()) keep.push_back(e);
    return make_set(std::move(keep));
}

HfSet sample_nonempty_function(HfGen& g, uint32_t r) {
    HfSet f = g.gen_function(r);
    if (f.is_empty()) f = HfSet::of({ordered_pair(g.gen(r), g.gen(r))});
    return f;
}

// Candidate function inputs: genuine functions, sets of pairs with a
// duplicated key, and arbitrary sets.
HfSet sample_functionish(HfGen& g, uint32_t r) {
    const uint64_t kind = g.below(4);
    if (kind < 2) return g.gen_function(r);
    if (kind == 2) {
        HfSet f = sample_nonempty_function(g, r);
        const HfSet& e0 = f.elems()[0];
        HfSet key = proj1(e0);
        HfSet other = HfSet::of({proj2(e0)});  // {v} != v, so the pair is new
        return add_element(ordered_pair(key, other), f);
    }
    return g.gen(r);
}

HfSet sample_family(HfGen& g, uint32_t r) {
    std::vector<HfSet> members;
    const uint64_t k = g.below(4);
    for (uint64_t i = 0; i < k; ++i)
        members.push_back(g.coin(0.15) ? HfSet() : g.gen_nonempty(r));
    return make_set(std::move(members));
}

HfSet native_choice(const HfSet& family) {
    std::vector<HfSet> pairs;
    for (const HfSet& y : family.elems()) {
        auto least = take_least(y);
        pairs.push_back(ordered_pair(y, least ? *least : HfSet()));
    }
    return make_set(std::move(pairs));
}

HfSet native_least_pair(const HfSet& y) {
    for (const HfSet& e : y.elems())  // elems are ascending in take order
        if (is_ordered_pair(e)) return e;
    return HfSet();
}

std::vector<Entry> build_entries() {
    std::vector<Entry> out;
    auto add = [&out](const char* name, size_t arity, Oracle oracle, Sampler sample) {
        Entry e;
        e.name = name;
        e.program = assemble(source_text(name));
        e.arity = arity;
        e.flavor = e.program.flavor;
        e.oracle = std::move(oracle);
        e.sample = std::move(sample);
        out.push_back(std::move(e));
    };

    add(
        "eq", 2, [](const Args& a) { return boolean(a[0] == a[1]); },
        [](HfGen& g, uint32_t r) {
            HfSet x = g.gen(r);
            return Args{x, g.coin(0.4) ? x : g.gen(r)};
        });
    add(
        "union2", 2, [](const Args& a) { return union2(a[0], a[1]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r), g.gen(r)}; });
    add(
        "intersect2", 2, [](const Args& a) { return intersect2(a[0], a[1]); },
        [](HfGen& g, uint32_t r) {
            HfSet x = g.gen(r);
            return Args{x, union2(g.gen(r), sample_subset(g, x))};
        });
    add(
        "singleton", 1, [](const Args& a) { return HfSet::of({a[0]}); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r)}; });
    add(
        "pair", 2, [](const Args& a) { return make_set({a[0], a[1]}); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r), g.gen(r)}; });
    add(
        "opair", 2, [](const Args& a) { return ordered_pair(a[0], a[1]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r), g.gen(r)}; });
    add(
        "proj1", 1, [](const Args& a) { return proj1(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{sample_pair(g, r)}; });
    add(
        "proj2", 1, [](const Args& a) { return proj2(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{sample_pair(g, r)}; });
    add(
        "is_opair", 1, [](const Args& a) { return boolean(is_ordered_pair(a[0])); },
        [](HfGen& g, uint32_t r) {
            return Args{g.coin() ? sample_pair(g, r) : g.gen(r)};
        });
    add(
        "is_func", 1, [](const Args& a) { return boolean(is_function(a[0])); },
        [](HfGen& g, uint32_t r) { return Args{sample_functionish(g, r)}; });
    add(
        "bigunion", 1, [](const Args& a) { return big_union(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r)}; });
    add(
        "bigintersect", 1, [](const Args& a) { return big_intersect(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen_nonempty(r)}; });
    add(
        "dom", 1, [](const Args& a) { return domain(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen_function(r)}; });
    add(
        "apply_fn", 2, [](const Args& a) { return apply(a[0], a[1]); },
        [](HfGen& g, uint32_t r) {
            HfSet f = sample_nonempty_function(g, r);
            HfSet d = domain(f);
            return Args{f, d.elems()[g.below(d.size())]};
        });
    add(
        "is_ordinal", 1, [](const Args& a) { return boolean(is_ordinal(a[0])); },
        [](HfGen& g, uint32_t r) {
            return Args{g.coin() ? numeral(g.below(7)) : g.gen(r)};
        });
    add(
        "is_ordseq", 1, [](const Args& a) { return boolean(is_ord_sequence(a[0])); },
        [](HfGen& g, uint32_t r) {
            const uint64_t kind = g.below(3);
            if (kind == 0) return Args{g.gen_sequence(r, g.below(4))};
            if (kind == 1) return Args{g.gen_function(r)};
            return Args{g.gen(r)};
        });
    add(
        "least_sat", 1, [](const Args& a) { return native_least_pair(a[0]); },
        [](HfGen& g, uint32_t r) {
            HfSet y = g.gen(r);
            if (g.coin(0.6)) y = add_element(sample_pair(g, r < 2 ? r : 2), y);
            return Args{y};
        });
    add(
        "seq_proj", 2, [](const Args& a) { return apply(a[0], a[1]); },
        [](HfGen& g, uint32_t r) {
            const uint64_t len = 1 + g.below(4);
            return Args{g.gen_sequence(r, len), numeral(g.below(len))};
        });
    add(
        "pow", 1, [](const Args& a) { return powerset(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r < 2 ? r : 2)}; });
    add(
        "is_pow", 2, [](const Args& a) { return boolean(a[0] == powerset(a[1])); },
        [](HfGen& g, uint32_t r) {
            HfSet y = g.gen(r < 2 ? r : 2, 4);
            return Args{g.coin() ? powerset(y) : g.gen(r), y};
        });
    add(
        "liminf_seq", 1,
        [](const Args& a) { return liminf_formula(sequence_elements(a[0])); },
        [](HfGen& g, uint32_t r) { return Args{g.gen_sequence(r, 1 + g.below(5))}; });
    add(
        "vstage", 1, [](const Args& a) { return v_stage(static_cast<uint32_t>(to_natural(a[0]))); },
        [](HfGen& g, uint32_t) { return Args{numeral(g.below(5))}; });
    add(
        "tau_less", 2,
        [](const Args& a) { return boolean(ack_compare(a[0], a[1]) == Ordering::LT); },
        [](HfGen& g, uint32_t r) {
            HfSet x = g.gen(r);
            return Args{x, g.coin(0.3) ? x : g.gen(r)};
        });
    add(
        "f_tau", 1, [](const Args& a) { return f_tau(to_natural(a[0])); },
        [](HfGen& g, uint32_t) { return Args{numeral(g.below(16))}; });
    add(
        "f_tau_inv", 1, [](const Args& a) { return numeral(f_tau_inv(a[0])); },
        [](HfGen& g, uint32_t r) { return Args{g.gen(r < 2 ? r : 2)}; });
    add(
        "choice_fn", 1, [](const Args& a) { return native_choice(a[0]); },
        [](HfGen& g, uint32_t r) { return Args{sample_family(g, r)}; });

    std::sort(out.begin(), out.end(),
              [](const Entry& a, const Entry& b) { return a.name < b.name; });
    return out;
}

const std::vector<Entry>& table() {
    static const std::vector<Entry> t = build_entries();
    return t;
}

// Operand usage per opcode, for register renaming when inlining.
bool uses_i(Op op) { return op != Op::Goto; }

bool uses_j(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Copy:
        case Op::Take:
        case Op::Remove:
        case Op::IfMemberGoto:
        case Op::Pow:
        case Op::Oracle:
        case Op::IfEqualGoto:
            return true;
        default:
            return false;
    }
}

bool is_jump(Op op) {
    return op == Op::IfEmptyGoto || op == Op::IfMemberGoto || op == Op::Goto ||
           op == Op::IfEqualGoto;
}

}  // namespace

const Entry& get(const std::string& name) {
    for (const Entry& e : table())
        if (e.name == name) return e;
    throw UnknownName(name);
}

std::vector<std::string> list() {
    std::vector<std::string> names;
    for (const Entry& e : table()) names.push_back(e.name);
    return names;
}

HfSet run_entry(const std::string& name, const std::vector<HfSet>& args,
                const RunLimits& limits) {
    const Entry& e = get(name);
    if (args.size() != e.arity)
        throw MalformedValue(e.name + " takes " + std::to_string(e.arity) + " arguments, got " +
                             std::to_string(args.size()));
    return run_as_function(expand_macros(e.program), args, OracleTable{}, limits);
}

DiffReport differential_test(const std::string& name, size_t samples, uint32_t max_rank,
                             uint64_t seed) {
    const Entry& e = get(name);
    const Program p = expand_macros(e.program);
    HfGen g(seed);
    DiffReport report;
    report.name = e.name;
    report.samples = samples;
    const auto t0 = std::chrono::steady_clock::now();
    for (size_t s = 0; s < samples; ++s) {
        const Args args = e.sample(g, max_rank);
        const HfSet want = e.oracle(args);
        std::string failure;
        HfSet got;
        try {
            got = run_as_function(p, args, OracleTable{}, RunLimits{});
        } catch (const Error& ex) {
            failure = ex.what();
        }
        if (!failure.empty() || got != want) {
            ++report.mismatches;
            if (report.details.size() < 5) {
                std::ostringstream os;
                os << e.name << "(";
                for (size_t i = 0; i < args.size(); ++i)
                    os << (i ? ", " : "") << print_hf(args[i], HfStyle::Pretty);
                os << ") = ";
                if (failure.empty())
                    os << print_hf(got, HfStyle::Pretty);
                else
                    os << "<" << failure << ">";
                os << ", expected " << print_hf(want, HfStyle::Pretty);
                report.details.push_back(os.str());
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

std::string render_report(const DiffReport& r) {
    std::ostringstream os;
    os << r.name << ": " << r.samples << " samples, " << r.mismatches << " mismatches ("
       << static_cast<long>(r.millis) << " ms)";
    for (const std::string& d : r.details) os << "\n  " << d;
    return os.str();
}

MacroProgram make_least_sat(const MacroProgram& pred) {
    constexpr uint32_t kWork = 1;
    constexpr uint32_t kCand = 2;
    constexpr uint32_t kShift = 3;  // pred register r lives at r + kShift
    const auto top = max_register(pred.lines);
    const uint32_t pred_regs = top ? *top + 1 : 1;

    ProgramBuilder b;
    const auto loop = b.new_label();
    const auto none = b.new_label();
    const auto after = b.new_label();
    const auto end = b.new_label();
    std::vector<ProgramBuilder::Label> at;
    at.reserve(pred.lines.size());
    for (size_t t = 0; t < pred.lines.size(); ++t) at.push_back(b.new_label());

    b.emit(ins_copy(0, kWork));
    b.bind(loop);
    b.emit_jez(kWork, none);
    b.emit(ins_take(kWork, kCand));
    b.emit(ins_remove(kCand, kWork));
    // The predicate assumes cleared scratch registers on entry.
    for (uint32_t r = 0; r < pred_regs; ++r) b.emit(ins_zero(kShift + r));
    b.emit(ins_copy(kCand, kShift));
    for (size_t t = 0; t < pred.lines.size(); ++t) {
        b.bind(at[t]);
        Instruction ins = pred.lines[t];
        if (uses_i(ins.op)) ins.i += kShift;
        if (uses_j(ins.op)) ins.j += kShift;
        if (is_jump(ins.op)) {
            // Any out-of-range target halts the predicate, which here means
            // it is done and control returns to the driver.
            const bool in_range = ins.k >= 1 && ins.k <= pred.lines.size();
            const auto target = in_range ? at[ins.k - 1] : after;
            switch (ins.op) {
                case Op::IfEmptyGoto:
                    b.emit_jez(ins.i, target);
                    break;
                case Op::IfMemberGoto:
                    b.emit_jmem(ins.i, ins.j, target);
                    break;
                case Op::Goto:
                    b.emit_goto(target);
                    break;
                default:
                    b.emit_jeq(ins.i, ins.j, target);
                    break;
            }
        } else {
            b.emit(ins);
        }
    }
    b.bind(after);
    b.emit_jez(kShift, loop);  // rejected: try the next candidate
    b.emit(ins_copy(kCand, 0));
    b.emit_goto(end);
    b.bind(none);
    b.emit(ins_zero(0));
    b.bind(end);
    return b.finish();
}

MacroProgram build_liminf_seq() {
    // Register plan.  The input sequence stays in S; for every pair <b, x_b>
    // the inner pass intersects the values at indices above b into T (the
    // value x_b itself when b is the last index), and T is merged into ACC.
    enum : uint32_t {
        S = 0,
        ACC = 1,
        W1 = 2,
        M = 3,
        T1 = 4,
        BETA = 5,
        REST = 6,
        XB = 7,
        FIRST = 8,
        T = 9,
        W2 = 10,
        M2 = 11,
        T1B = 12,
        GAMMA = 13,
        RESTB = 14,
        XG = 15,
        PAIR2 = 16,
        PAIR3 = 17,
        IW = 18,
        IE = 19,
        NEWT = 20,
        UW = 21,
        UE = 22,
    };

    ProgramBuilder b;
    const auto outer = b.new_label();
    const auto done = b.new_label();
    const auto skip_xb = b.new_label();
    const auto inner = b.new_label();
    const auto inner_done = b.new_label();
    const auto relevant = b.new_label();
    const auto have_xg = b.new_label();
    const auto first_case = b.new_label();
    const auto isect = b.new_label();
    const auto isect_keep = b.new_label();
    const auto isect_done = b.new_label();
    const auto clamp = b.new_label();
    const auto merge = b.new_label();
    const auto umerge = b.new_label();

    b.emit(ins_zero(ACC));
    b.emit(ins_copy(S, W1));
    b.bind(outer);
    b.emit_jez(W1, done);
    b.emit(ins_take(W1, M));
    b.emit(ins_remove(M, W1));
    // b := proj1(M); x_b := proj2(M)
    b.emit(ins_take(M, T1));
    b.emit(ins_take(T1, BETA));
    b.emit(ins_copy(BETA, XB));
    b.emit(ins_copy(M, REST));
    b.emit(ins_remove(T1, REST));
    b.emit_jez(REST, skip_xb);
    b.emit(ins_take(REST, PAIR2));
    b.emit(ins_remove(BETA, PAIR2));
    b.emit(ins_take(PAIR2, XB));
    b.bind(skip_xb);
    b.emit(ins_zero(FIRST));
    b.emit(ins_zero(T));
    b.emit(ins_copy(S, W2));
    b.bind(inner);
    b.emit_jez(W2, inner_done);
    b.emit(ins_take(W2, M2));
    b.emit(ins_remove(M2, W2));
    // g := proj1(M2); only indices with b in g (that is, b < g) matter
    b.emit(ins_take(M2, T1B));
    b.emit(ins_take(T1B, GAMMA));
    b.emit_jmem(BETA, GAMMA, relevant);
    b.emit_goto(inner);
    b.bind(relevant);
    b.emit(ins_copy(GAMMA, XG));
    b.emit(ins_copy(M2, RESTB));
    b.emit(ins_remove(T1B, RESTB));
    b.emit_jez(RESTB, have_xg);
    b.emit(ins_take(RESTB, PAIR3));
    b.emit(ins_remove(GAMMA, PAIR3));
    b.emit(ins_take(PAIR3, XG));
    b.bind(have_xg);
    b.emit_jez(FIRST, first_case);
    // T := T n XG
    b.emit(ins_zero(NEWT));
    b.emit(ins_copy(T, IW));
    b.bind(isect);
    b.emit_jez(IW, isect_done);
    b.emit(ins_take(IW, IE));
    b.emit(ins_remove(IE, IW));
    b.emit_jmem(IE, XG, isect_keep);
    b.emit_goto(isect);
    b.bind(isect_keep);
    b.emit(ins_add(IE, NEWT));
    b.emit_goto(isect);
    b.bind(isect_done);
    b.emit(ins_copy(NEWT, T));
    b.emit_goto(inner);
    b.bind(first_case);
    b.emit(ins_copy(XG, T));
    b.emit(ins_add(FIRST, FIRST));  // FIRST := {0}: a later value intersects
    b.emit_goto(inner);
    b.bind(inner_done);
    b.emit_jez(FIRST, clamp);
    b.emit_goto(merge);
    b.bind(clamp);
    b.emit(ins_copy(XB, T));  // no later index: the tail is x_b itself
    b.bind(merge);
    // ACC := ACC u T
    b.emit(ins_copy(T, UW));
    b.bind(umerge);
    b.emit_jez(UW, outer);
    b.emit(ins_take(UW, UE));
    b.emit(ins_remove(UE, UW));
    b.emit(ins_add(UE, ACC));
    b.emit_goto(umerge);
    b.bind(done);
    b.emit(ins_copy(ACC, S));
    return b.finish();
}

}  // namespace srm::stdlib
