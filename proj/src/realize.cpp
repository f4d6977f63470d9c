#include "srm/realize.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "srm/delta0.hpp"

namespace srm {

namespace {

// ---------------------------------------------------------------------
// Emission helpers.  Every realizer program follows the register layout
//   R_0          parameter blob (chains the codes of the deeper levels)
//   R_1 .. R_n   collected arguments
//   R_{n+1}      current input
//   R_{n+2} ...  scratch
// A forwarding level hands <enc(next), blob'> down as
// <proj1(slot), seq(proj2(slot), args...)>, which decodes to the next
// level with its own blob in front of the argument block.

class Scratch {
  public:
    explicit Scratch(uint32_t base) : next_(base) {}
    uint32_t fresh() { return next_++; }

  private:
    uint32_t next_;
};

void emit_proj1(ProgramBuilder& b, uint32_t src, uint32_t out, Scratch& s) {
    uint32_t t = s.fresh();
    b.emit(ins_zero(t));
    b.emit(ins_take(src, t));
    b.emit(ins_zero(out));
    b.emit(ins_take(t, out));
}

void emit_proj2(ProgramBuilder& b, uint32_t src, uint32_t out, Scratch& s) {
    uint32_t first = s.fresh();
    uint32_t rest = s.fresh();
    uint32_t wide = s.fresh();
    auto done = b.new_label();
    b.emit(ins_zero(first));
    b.emit(ins_take(src, first));
    // first = {a}; default the result to a for the degenerate pair <a,a>.
    b.emit(ins_zero(out));
    b.emit(ins_take(first, out));
    b.emit(ins_copy(src, rest));
    b.emit(ins_remove(first, rest));
    b.emit_jez(rest, done);
    b.emit(ins_zero(wide));
    b.emit(ins_take(rest, wide));
    b.emit(ins_remove(out, wide));
    b.emit(ins_take(wide, out));
    b.bind(done);
}

void emit_mkpair(ProgramBuilder& b, uint32_t a, uint32_t c, uint32_t out, Scratch& s) {
    uint32_t sing = s.fresh();
    uint32_t both = s.fresh();
    b.emit(ins_zero(sing));
    b.emit(ins_add(a, sing));
    b.emit(ins_zero(both));
    b.emit(ins_add(a, both));
    b.emit(ins_add(c, both));
    b.emit(ins_zero(out));
    b.emit(ins_add(sing, out));
    b.emit(ins_add(both, out));
}

// out := {<#0, vals[0]>, <#1, vals[1]>, ...}
void emit_seq(ProgramBuilder& b, const std::vector<uint32_t>& vals, uint32_t out, Scratch& s) {
    uint32_t key = s.fresh();
    uint32_t entry = s.fresh();
    b.emit(ins_zero(out));
    b.emit(ins_zero(key));
    for (uint32_t v : vals) {
        emit_mkpair(b, key, v, entry, s);
        b.emit(ins_add(entry, out));
        b.emit(ins_add(key, key));
    }
}

using Emitter = std::function<void(ProgramBuilder&, const std::vector<uint32_t>& args,
                                   uint32_t input, uint32_t out, Scratch&)>;

struct Branch {
    enum class Kind { Forward, Constant, Emit };
    Kind kind = Kind::Forward;
    // Navigation from R_0 to this branch's blob slot: 0 = proj1, 1 = proj2.
    std::vector<int> path;
    bool collect_input = false;
    Emitter emit;
};

Branch fwd(std::vector<int> path = {}, bool collect = false) {
    Branch b;
    b.kind = Branch::Kind::Forward;
    b.path = std::move(path);
    b.collect_input = collect;
    return b;
}

Branch constant(std::vector<int> path = {}) {
    Branch b;
    b.kind = Branch::Kind::Constant;
    b.path = std::move(path);
    return b;
}

Branch emitter(Emitter e) {
    Branch b;
    b.kind = Branch::Kind::Emit;
    b.emit = std::move(e);
    return b;
}

struct StepSpec {
    std::optional<Branch> on_zero;
    Branch otherwise;
};

void emit_branch(ProgramBuilder& b, const Branch& br, const std::vector<uint32_t>& args,
                 uint32_t input, Scratch& s) {
    if (br.kind == Branch::Kind::Emit) {
        uint32_t out = s.fresh();
        br.emit(b, args, input, out, s);
        b.emit(ins_copy(out, 0));
        return;
    }
    uint32_t slot = 0;
    for (int step : br.path) {
        uint32_t nxt = s.fresh();
        if (step == 0)
            emit_proj1(b, slot, nxt, s);
        else
            emit_proj2(b, slot, nxt, s);
        slot = nxt;
    }
    if (br.kind == Branch::Kind::Constant) {
        b.emit(ins_copy(slot, 0));
        return;
    }
    uint32_t code = s.fresh();
    uint32_t inner = s.fresh();
    emit_proj1(b, slot, code, s);
    emit_proj2(b, slot, inner, s);
    std::vector<uint32_t> vals{inner};
    vals.insert(vals.end(), args.begin(), args.end());
    if (br.collect_input) vals.push_back(input);
    uint32_t seq = s.fresh();
    uint32_t out = s.fresh();
    emit_seq(b, vals, seq, s);
    emit_mkpair(b, code, seq, out, s);
    b.emit(ins_copy(out, 0));
}

Program step_program(size_t n_args, const StepSpec& spec) {
    ProgramBuilder b;
    uint32_t input = static_cast<uint32_t>(n_args) + 1;
    std::vector<uint32_t> args;
    for (uint32_t i = 1; i <= n_args; ++i) args.push_back(i);
    Scratch s(input + 1);
    bool reads_input = spec.on_zero.has_value() || spec.otherwise.collect_input;
    if (!reads_input) b.emit(ins_zero(input));
    if (spec.on_zero) {
        auto zero = b.new_label();
        auto end = b.new_label();
        b.emit_jez(input, zero);
        emit_branch(b, spec.otherwise, args, input, s);
        b.emit_goto(end);
        b.bind(zero);
        emit_branch(b, *spec.on_zero, args, input, s);
        b.bind(end);
    } else {
        emit_branch(b, spec.otherwise, args, input, s);
    }
    return expand_macros(b.finish());
}

Program curry_program(size_t n_args) {
    StepSpec spec;
    spec.otherwise = fwd({}, true);
    return step_program(n_args, spec);
}

// Ignores its input and leaves the blob in R_0; tolerates n_args+2 inputs.
Program const_program(size_t n_args) {
    Program p;
    p.lines.push_back(ins_zero(static_cast<uint32_t>(n_args) + 1));
    p.flavor = Flavor::Srm;
    return p;
}

Program id_program() {
    Program p;
    p.lines.push_back(ins_copy(0, 0));
    p.flavor = Flavor::Srm;
    return p;
}

// blob = <left, right>; input #0 picks left, anything else right.
Program pick_program() {
    StepSpec spec;
    spec.on_zero = constant({0});
    spec.otherwise = constant({1});
    return step_program(0, spec);
}

// Chains a linear tower: levels[i]'s blob is <enc(levels[i+1]), ...>
// ending in `innermost`.
Realizer chain(const std::vector<Program>& levels, HfSet innermost) {
    HfSet blob = std::move(innermost);
    for (size_t i = levels.size(); i-- > 1;) blob = ordered_pair(encode_program(levels[i]), blob);
    return Realizer{levels.front(), {blob}};
}

// ---------------------------------------------------------------------
// Witness emitters.

void wit_empty(ProgramBuilder& b, const std::vector<uint32_t>&, uint32_t, uint32_t out, Scratch& s) {
    (void)s;
    b.emit(ins_zero(out));
}

void wit_empty_corrupt(ProgramBuilder& b, const std::vector<uint32_t>&, uint32_t, uint32_t out,
                       Scratch& s) {
    uint32_t e = s.fresh();
    b.emit(ins_zero(e));
    b.emit(ins_zero(out));
    b.emit(ins_add(e, out));
}

void wit_pair(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
              Scratch&) {
    b.emit(ins_zero(out));
    b.emit(ins_add(args[0], out));
    b.emit(ins_add(args[1], out));
}

void wit_pair_corrupt(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                      Scratch&) {
    b.emit(ins_zero(out));
    b.emit(ins_add(args[0], out));
}

void wit_bigunion(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                  Scratch& s) {
    uint32_t work = s.fresh();
    uint32_t member = s.fresh();
    uint32_t elem = s.fresh();
    auto outer = b.new_label();
    auto inner = b.new_label();
    auto next = b.new_label();
    auto done = b.new_label();
    b.emit(ins_copy(args[0], work));
    b.emit(ins_zero(out));
    b.bind(outer);
    b.emit_jez(work, done);
    b.emit(ins_zero(member));
    b.emit(ins_take(work, member));
    b.emit(ins_remove(member, work));
    b.bind(inner);
    b.emit_jez(member, next);
    b.emit(ins_zero(elem));
    b.emit(ins_take(member, elem));
    b.emit(ins_remove(elem, member));
    b.emit(ins_add(elem, out));
    b.emit_goto(inner);
    b.bind(next);
    b.emit_goto(outer);
    b.bind(done);
}

void wit_union_corrupt(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                       Scratch&) {
    b.emit(ins_copy(args[0], out));
}

void wit_pow(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
             Scratch&) {
    b.emit(ins_zero(out));
    b.emit(ins_pow(args[0], out));
}

void wit_pow_corrupt(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                     Scratch&) {
    b.emit(ins_copy(args[0], out));
}

bool op_uses_i(Op op) { return op != Op::Goto; }

bool op_uses_j(Op op) {
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

bool op_is_jump(Op op) {
    switch (op) {
        case Op::IfEmptyGoto:
        case Op::IfMemberGoto:
        case Op::Goto:
        case Op::IfEqualGoto:
            return true;
        default:
            return false;
    }
}

// Inlines a unary predicate program: registers shifted above the caller's,
// zeroed on entry, input copied into the predicate's R_0, in-range jumps
// remapped to per-line labels, out-of-range jumps (the predicate halting)
// to the exit.  The shifted R_0 holds the predicate's verdict afterwards.
uint32_t emit_inline_pred(ProgramBuilder& b, const MacroProgram& pred, uint32_t in_reg,
                          Scratch& s) {
    uint32_t used = 1;
    if (auto m = max_register(pred.lines)) used = *m + 1;
    uint32_t shift = s.fresh();
    for (uint32_t i = 1; i < used; ++i) s.fresh();
    for (uint32_t i = 0; i < used; ++i) b.emit(ins_zero(shift + i));
    b.emit(ins_copy(in_reg, shift));
    std::vector<ProgramBuilder::Label> at;
    at.reserve(pred.lines.size());
    for (size_t i = 0; i < pred.lines.size(); ++i) at.push_back(b.new_label());
    auto exit = b.new_label();
    for (size_t i = 0; i < pred.lines.size(); ++i) {
        b.bind(at[i]);
        Instruction ins = pred.lines[i];
        if (op_uses_i(ins.op)) ins.i += shift;
        if (op_uses_j(ins.op)) ins.j += shift;
        if (op_is_jump(ins.op)) {
            auto target = (ins.k >= 1 && ins.k <= pred.lines.size()) ? at[ins.k - 1] : exit;
            switch (ins.op) {
                case Op::IfEmptyGoto:
                    b.emit_jez(ins.i, target);
                    break;
                case Op::IfMemberGoto:
                    b.emit_jmem(ins.i, ins.j, target);
                    break;
                case Op::IfEqualGoto:
                    b.emit_jeq(ins.i, ins.j, target);
                    break;
                case Op::Goto:
                    b.emit_goto(target);
                    break;
                default:
                    break;
            }
        } else {
            b.emit(ins);
        }
    }
    b.bind(exit);
    return shift;
}

// out := the members of args[0] the predicate accepts (or rejects, when
// inverted).
Emitter wit_filter(MacroProgram pred, bool invert) {
    return [pred = std::move(pred), invert](ProgramBuilder& b, const std::vector<uint32_t>& args,
                                            uint32_t, uint32_t out, Scratch& s) {
        uint32_t work = s.fresh();
        uint32_t cand = s.fresh();
        auto loop = b.new_label();
        auto skip = b.new_label();
        auto keep = b.new_label();
        auto done = b.new_label();
        b.emit(ins_copy(args[0], work));
        b.emit(ins_zero(out));
        b.bind(loop);
        b.emit_jez(work, done);
        b.emit(ins_zero(cand));
        b.emit(ins_take(work, cand));
        b.emit(ins_remove(cand, work));
        uint32_t verdict = emit_inline_pred(b, pred, cand, s);
        b.emit_jez(verdict, invert ? keep : skip);
        if (!invert) {
            b.bind(keep);
            b.emit(ins_add(cand, out));
            b.emit_goto(loop);
            b.bind(skip);
            b.emit_goto(loop);
        } else {
            b.emit_goto(skip);
            b.bind(keep);
            b.emit(ins_add(cand, out));
            b.emit_goto(loop);
            b.bind(skip);
            b.emit_goto(loop);
        }
        b.bind(done);
    };
}

// out := {<y, least y> : y in args[0]} (or <y, y> when corrupted).
Emitter wit_choice(bool corrupt) {
    return [corrupt](ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                     Scratch& s) {
        uint32_t work = s.fresh();
        uint32_t member = s.fresh();
        uint32_t least = s.fresh();
        uint32_t entry = s.fresh();
        auto loop = b.new_label();
        auto done = b.new_label();
        b.emit(ins_copy(args[0], work));
        b.emit(ins_zero(out));
        b.bind(loop);
        b.emit_jez(work, done);
        b.emit(ins_zero(member));
        b.emit(ins_take(work, member));
        b.emit(ins_remove(member, work));
        b.emit(ins_zero(least));
        b.emit(ins_take(member, least));
        emit_mkpair(b, member, corrupt ? member : least, entry, s);
        b.emit(ins_add(entry, out));
        b.emit_goto(loop);
        b.bind(done);
    };
}

// out := <y, least y> for y = args[1].
void wit_opair_take(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                    Scratch& s) {
    uint32_t least = s.fresh();
    b.emit(ins_zero(least));
    b.emit(ins_take(args[1], least));
    emit_mkpair(b, args[1], least, out, s);
}

// out := least member of args[1].
void wit_take(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
              Scratch&) {
    b.emit(ins_zero(out));
    b.emit(ins_take(args.back(), out));
}

// out := {y} for y = args[1].
void wit_sing(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
              Scratch&) {
    b.emit(ins_zero(out));
    b.emit(ins_add(args[1], out));
}

// out := {y, least y} for y = args[1].
void wit_pair_take(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                   Scratch& s) {
    uint32_t least = s.fresh();
    b.emit(ins_zero(least));
    b.emit(ins_take(args[1], least));
    b.emit(ins_zero(out));
    b.emit(ins_add(args[1], out));
    b.emit(ins_add(least, out));
}

// out := #0 when w = y else #1, for y = args[1], w = args[2].
void wit_select(ProgramBuilder& b, const std::vector<uint32_t>& args, uint32_t, uint32_t out,
                Scratch&) {
    auto done = b.new_label();
    b.emit(ins_zero(out));
    b.emit_jeq(args[2], args[1], done);
    b.emit(ins_add(out, out));
    b.bind(done);
}

// ---------------------------------------------------------------------
// Shared realizer values.

HfSet enc_id() {
    static const HfSet v = encode_realizer(Realizer{id_program(), {}});
    return v;
}

Realizer const_realizer(const HfSet& value, size_t tolerate_args = 1) {
    return Realizer{const_program(tolerate_args), {value}};
}

// Realizes a conjunction of two trivially realized parts.
HfSet enc_pick(const HfSet& left, const HfSet& right) {
    return encode_realizer(Realizer{pick_program(), {ordered_pair(left, right)}});
}

// Realizes "for all y in x there is z in y": per y, the witness is the
// take-least member of y.
Realizer take_witness_realizer() {
    StepSpec inner;
    inner.on_zero = emitter(wit_take);
    inner.otherwise = constant({});
    return chain({curry_program(0), step_program(1, inner)}, enc_id());
}

// ---------------------------------------------------------------------
// Axiom formulas.

SetFormula f_empty_set() {
    using F = SetFormula;
    auto x = Term::var("x");
    auto y = Term::var("y");
    return F::exists("x", F::forall("y", F::imp(F::in(y, x), F::bot())));
}

SetFormula f_pairing() {
    using F = SetFormula;
    auto a = Term::var("a");
    auto b = Term::var("b");
    auto c = Term::var("c");
    return F::forall(
        "a", F::forall("b", F::exists("c", F::conj(F::in(a, c), F::in(b, c)))));
}

SetFormula f_union() {
    using F = SetFormula;
    auto a = Term::var("a");
    auto u = Term::var("u");
    auto x = Term::var("x");
    auto y = Term::var("y");
    return F::forall(
        "a", F::exists("u", F::forall("x", F::forall("y", F::imp(F::conj(F::in(x, y), F::in(y, a)),
                                                                 F::in(x, u))))));
}

SetFormula f_powerset() {
    using F = SetFormula;
    auto a = Term::var("a");
    auto p = Term::var("p");
    auto x = Term::var("x");
    auto w = Term::var("w");
    return F::forall(
        "a", F::exists("p", F::forall("x", F::imp(F::bforall("w", x, F::in(w, a)), F::in(x, p)))));
}

SetFormula f_separation() {
    using F = SetFormula;
    auto x = Term::var("x");
    auto y = Term::var("y");
    auto z = Term::var("z");
    auto empty = Term::constant(HfSet{});
    return F::forall(
        "x",
        F::exists("y", F::conj(F::bforall("z", y, F::conj(F::in(z, x), F::in(empty, z))),
                               F::bforall("z", x, F::imp(F::in(empty, z), F::in(z, y))))));
}

SetFormula f_ac() {
    using F = SetFormula;
    auto x = Term::var("x");
    auto y = Term::var("y");
    auto z = Term::var("z");
    auto f = Term::var("f");
    auto p = Term::var("p");
    auto q = Term::var("q");
    auto w = Term::var("w");
    SetFormula sing_y = F::conj(F::in(y, q), F::bforall("w", q, F::eq(w, y)));
    SetFormula pair_yz = F::conj(
        F::in(y, q), F::conj(F::in(z, q), F::bforall("w", q, F::disj(F::eq(w, y), F::eq(w, z)))));
    SetFormula linked =
        F::conj(F::bexists("q", p, sing_y), F::bexists("q", p, pair_yz));
    SetFormula body = F::bforall(
        "y", x, F::bexists("p", f, F::bexists("z", y, linked)));
    SetFormula nonempty = F::bforall("y", x, F::bexists("z", y, F::eq(z, z)));
    return F::forall("x", F::imp(nonempty, F::exists("f", body)));
}

// ---------------------------------------------------------------------
// Axiom realizers.

Realizer r_empty_set(bool corrupt) {
    StepSpec l0;
    l0.on_zero = emitter(corrupt ? wit_empty_corrupt : wit_empty);
    l0.otherwise = fwd();
    return chain({step_program(0, l0), curry_program(0), const_program(2)}, enc_id());
}

Realizer r_pairing(bool corrupt) {
    StepSpec l2;
    l2.on_zero = emitter(corrupt ? wit_pair_corrupt : wit_pair);
    l2.otherwise = constant({});
    HfSet both = enc_pick(enc_id(), enc_id());
    return chain({curry_program(0), curry_program(1), step_program(2, l2)}, both);
}

Realizer r_union(bool corrupt) {
    StepSpec l1;
    l1.on_zero = emitter(corrupt ? wit_union_corrupt : wit_bigunion);
    l1.otherwise = fwd();
    return chain({curry_program(0), step_program(1, l1), curry_program(1), curry_program(2),
                  const_program(4)},
                 enc_id());
}

Realizer r_powerset(bool corrupt) {
    StepSpec l1;
    l1.on_zero = emitter(corrupt ? wit_pow_corrupt : wit_pow);
    l1.otherwise = fwd();
    return chain({curry_program(0), step_program(1, l1), curry_program(1), const_program(3)},
                 enc_id());
}

Realizer r_separation(bool corrupt) {
    MacroProgram pred =
        compile_delta0(SetFormula::in(Term::constant(HfSet{}), Term::var("z")), {"z"});
    StepSpec l1;
    l1.on_zero = emitter(wit_filter(pred, corrupt));
    l1.otherwise = constant({});
    HfSet member_side = encode_realizer(const_realizer(enc_pick(enc_id(), enc_id())));
    HfSet back_side = encode_realizer(const_realizer(encode_realizer(const_realizer(enc_id()))));
    HfSet both = encode_realizer(
        Realizer{pick_program(), {ordered_pair(member_side, back_side)}});
    return chain({curry_program(0), step_program(1, l1)}, both);
}

Realizer r_ac(bool corrupt) {
    // forall x: curry; imp: drop the antecedent realizer; exists f: the
    // choice set; bforall y in x: curry; bexists p in f: <y, least y>;
    // bexists z in y: least y; then the two membership witnesses {y} and
    // {y, least y}, the second continuing into the per-member disjunction
    // whose selector compares w against y.
    StepSpec drop;
    drop.otherwise = fwd({}, false);
    Program a1 = step_program(1, drop);

    StepSpec l2;
    l2.on_zero = emitter(wit_choice(corrupt));
    l2.otherwise = fwd();
    Program a2 = step_program(1, l2);

    Program a3 = curry_program(1);

    StepSpec l4;
    l4.on_zero = emitter(wit_opair_take);
    l4.otherwise = fwd();
    Program a4 = step_program(2, l4);

    StepSpec l5;
    l5.on_zero = emitter(wit_take);
    l5.otherwise = fwd();
    Program a5 = step_program(2, l5);

    StepSpec l6;
    l6.on_zero = fwd({0});
    l6.otherwise = fwd({1});
    Program a6 = step_program(2, l6);

    StepSpec l7a;
    l7a.on_zero = emitter(wit_sing);
    l7a.otherwise = constant({});
    Program a7a = step_program(2, l7a);

    StepSpec l7b;
    l7b.on_zero = emitter(wit_pair_take);
    l7b.otherwise = fwd({});
    Program a7b = step_program(2, l7b);

    StepSpec andspec;
    andspec.on_zero = constant({0});
    andspec.otherwise = fwd({1});
    Program and1 = step_program(2, andspec);
    Program and2 = step_program(2, andspec);

    Program a8 = curry_program(2);

    StepSpec l9;
    l9.on_zero = emitter(wit_select);
    l9.otherwise = constant({});
    Program a9 = step_program(3, l9);

    HfSet v_forall_id = encode_realizer(const_realizer(enc_id()));
    HfSet v_sing = enc_pick(enc_id(), v_forall_id);

    HfSet blob_a8 = ordered_pair(encode_program(a9), enc_id());
    HfSet blob_and2 = ordered_pair(enc_id(), ordered_pair(encode_program(a8), blob_a8));
    HfSet blob_and1 = ordered_pair(enc_id(), ordered_pair(encode_program(and2), blob_and2));
    HfSet blob_7b = ordered_pair(encode_program(and1), blob_and1);
    HfSet blob_6 =
        ordered_pair(ordered_pair(encode_program(a7a), v_sing), ordered_pair(encode_program(a7b), blob_7b));
    HfSet blob = ordered_pair(encode_program(a6), blob_6);
    blob = ordered_pair(encode_program(a5), blob);
    blob = ordered_pair(encode_program(a4), blob);
    blob = ordered_pair(encode_program(a3), blob);
    blob = ordered_pair(encode_program(a2), blob);
    blob = ordered_pair(encode_program(a1), blob);
    return Realizer{curry_program(0), {blob}};
}

struct AxiomRow {
    SetFormula (*formula)();
    Realizer (*make)(bool corrupt);
};

const std::map<std::string, AxiomRow>& axiom_table() {
    static const std::map<std::string, AxiomRow> t = {
        {"ac", {f_ac, r_ac}},
        {"delta0_separation", {f_separation, r_separation}},
        {"empty_set", {f_empty_set, r_empty_set}},
        {"pairing", {f_pairing, r_pairing}},
        {"powerset", {f_powerset, r_powerset}},
        {"union", {f_union, r_union}},
    };
    return t;
}

const AxiomRow& axiom_row(const std::string& name) {
    auto it = axiom_table().find(name);
    if (it == axiom_table().end()) throw UnknownName(name);
    return it->second;
}

// ---------------------------------------------------------------------
// The checker.

HfSet term_const(const Term& t) {
    if (t.is_var()) throw UnboundVariable(t.name());
    return t.value();
}

struct Checker {
    const CheckContext& ctx;
    std::vector<std::string> path;

    Verdict refute(std::string reason) {
        Verdict v;
        v.refuted = true;
        v.path = path;
        v.reason = std::move(reason);
        return v;
    }

    std::optional<HfSet> try_apply(const Realizer& r, const HfSet& x, std::string& err) {
        try {
            return apply_realizer(r, x, ctx.limits);
        } catch (const Error& e) {
            err = e.what();
            return std::nullopt;
        }
    }

    std::optional<Realizer> try_fetch(const Realizer& r, const HfSet& x, std::string& err) {
        auto v = try_apply(r, x, err);
        if (!v) return std::nullopt;
        try {
            return decode_realizer(*v);
        } catch (const Error& e) {
            err = std::string("output does not decode to a realizer: ") + e.what();
            return std::nullopt;
        }
    }

    Verdict run(const Realizer& r, const SetFormula& f, size_t depth) {
        if (depth > ctx.depth_budget) return Verdict{};
        std::string err;
        switch (f.kind()) {
            case SetFormula::Kind::Eq: {
                if (term_const(f.t1()) == term_const(f.t2())) return Verdict{};
                return refute("equality fails: " + print_setformula(f));
            }
            case SetFormula::Kind::In: {
                if (term_const(f.t2()).contains(term_const(f.t1()))) return Verdict{};
                return refute("membership fails: " + print_setformula(f));
            }
            case SetFormula::Kind::Bot:
                return refute("absurdity is never realized");
            case SetFormula::Kind::And: {
                for (int side = 0; side < 2; ++side) {
                    path.push_back(side == 0 ? "and left" : "and right");
                    auto part = try_fetch(r, numeral(static_cast<uint64_t>(side)), err);
                    if (!part) return refute(err);
                    Verdict v = run(*part, side == 0 ? f.lhs() : f.rhs(), depth + 1);
                    if (v.refuted) return v;
                    path.pop_back();
                }
                return Verdict{};
            }
            case SetFormula::Kind::Or: {
                auto sel = try_apply(r, numeral(0), err);
                if (!sel) {
                    path.push_back("or selector");
                    return refute(err);
                }
                int side;
                if (*sel == numeral(0))
                    side = 0;
                else if (*sel == numeral(1))
                    side = 1;
                else {
                    path.push_back("or selector");
                    return refute("selector is not #0 or #1: " + print_hf(*sel));
                }
                path.push_back(side == 0 ? "or left" : "or right");
                auto part = try_fetch(r, numeral(1), err);
                if (!part) return refute(err);
                return run(*part, side == 0 ? f.lhs() : f.rhs(), depth + 1);
            }
            case SetFormula::Kind::Imp: {
                for (size_t i = 0; i < ctx.implication_pool.size(); ++i) {
                    const Realizer& s = ctx.implication_pool[i];
                    Checker probe{ctx, {}};
                    if (probe.run(s, f.lhs(), depth + 1).refuted) continue;
                    path.push_back("imp with pool[" + std::to_string(i) + "]");
                    auto rs = try_fetch(r, encode_realizer(s), err);
                    if (!rs) return refute(err);
                    Verdict v = run(*rs, f.rhs(), depth + 1);
                    if (v.refuted) return v;
                    path.pop_back();
                }
                return Verdict{};
            }
            case SetFormula::Kind::Exists:
            case SetFormula::Kind::BExists: {
                bool bounded = f.kind() == SetFormula::Kind::BExists;
                auto w = try_apply(r, numeral(0), err);
                if (!w) {
                    path.push_back("exists witness");
                    return refute(err);
                }
                path.push_back("exists " + f.var() + " := " + print_hf(*w));
                if (bounded) {
                    HfSet bound = term_const(f.bound());
                    if (!bound.contains(*w))
                        return refute("witness is not a member of " + print_hf(bound));
                }
                auto part = try_fetch(r, numeral(1), err);
                if (!part) return refute(err);
                return run(*part, subst(f.body(), f.var(), Term::constant(*w)), depth + 1);
            }
            case SetFormula::Kind::Forall:
            case SetFormula::Kind::BForall: {
                bool bounded = f.kind() == SetFormula::Kind::BForall;
                std::vector<HfSet> range;
                if (bounded) {
                    HfSet bound = term_const(f.bound());
                    range.assign(bound.elems().begin(), bound.elems().end());
                } else {
                    range = ctx.domain_sample;
                }
                for (const HfSet& a : range) {
                    path.push_back("forall " + f.var() + " := " + print_hf(a));
                    auto part = try_fetch(r, a, err);
                    if (!part) return refute(err);
                    Verdict v = run(*part, subst(f.body(), f.var(), Term::constant(a)), depth + 1);
                    if (v.refuted) return v;
                    path.pop_back();
                }
                return Verdict{};
            }
        }
        throw MalformedValue("unknown formula kind");
    }
};

}  // namespace

HfSet encode_realizer(const Realizer& r) {
    return ordered_pair(encode_program(r.program), make_sequence(r.parameters));
}

Realizer decode_realizer(const HfSet& v) {
    if (!is_ordered_pair(v)) throw MalformedValue("realizer value is not an ordered pair");
    Realizer r;
    r.program = decode_program(proj1(v));
    r.parameters = sequence_elements(proj2(v));
    return r;
}

HfSet apply_realizer(const Realizer& r, const HfSet& x, const RunLimits& limits) {
    std::vector<HfSet> args = r.parameters;
    args.push_back(x);
    return run_as_function(r.program, args, OracleTable{}, limits);
}

CheckContext default_context() {
    CheckContext ctx;
    HfSet v4 = v_stage(4);
    ctx.domain_sample.assign(v4.elems().begin(), v4.elems().end());
    HfSet v3 = v_stage(3);
    ctx.domain_sample.push_back(numeral(4));
    ctx.domain_sample.push_back(HfSet::of({numeral(3)}));
    ctx.domain_sample.push_back(HfSet::of({v3}));
    ctx.domain_sample.push_back(ordered_pair(numeral(2), numeral(0)));
    ctx.domain_sample.push_back(ordered_pair(numeral(1), numeral(2)));
    ctx.domain_sample.push_back(
        HfSet::of({ordered_pair(numeral(0), numeral(0)), ordered_pair(numeral(1), numeral(1))}));
    ctx.implication_pool.push_back(Realizer{id_program(), {}});
    ctx.implication_pool.push_back(const_realizer(enc_id()));
    ctx.implication_pool.push_back(take_witness_realizer());
    return ctx;
}

Verdict check(const Realizer& r, const SetFormula& f, const CheckContext& ctx) {
    if (ctx.domain_sample.empty()) throw MalformedValue("domain sample must be nonempty");
    Checker chk{ctx, {}};
    return chk.run(r, f, 0);
}

std::vector<std::string> axiom_names() {
    std::vector<std::string> names;
    for (const auto& [name, row] : axiom_table()) names.push_back(name);
    return names;
}

SetFormula axiom_formula(const std::string& name) { return axiom_row(name).formula(); }

Realizer get_axiom_realizer(const std::string& name) { return axiom_row(name).make(false); }

Realizer get_corrupted_realizer(const std::string& name) { return axiom_row(name).make(true); }

}  // namespace srm
