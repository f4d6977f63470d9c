#include "srm/delta0.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace srm {

namespace {

HfSet term_value(const Term& t, const Env& env) {
    if (!t.is_var()) return t.value();
    auto it = env.find(t.name());
    if (it == env.end()) throw UnboundVariable(t.name());
    return it->second;
}

}  // namespace

bool eval_delta0(const SetFormula& f, const Env& env) {
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
            return term_value(f.t1(), env) == term_value(f.t2(), env);
        case SetFormula::Kind::In:
            return term_value(f.t2(), env).contains(term_value(f.t1(), env));
        case SetFormula::Kind::Bot:
            return false;
        case SetFormula::Kind::And:
            return eval_delta0(f.lhs(), env) && eval_delta0(f.rhs(), env);
        case SetFormula::Kind::Or:
            return eval_delta0(f.lhs(), env) || eval_delta0(f.rhs(), env);
        case SetFormula::Kind::Imp:
            return !eval_delta0(f.lhs(), env) || eval_delta0(f.rhs(), env);
        case SetFormula::Kind::BExists: {
            const HfSet bound = term_value(f.bound(), env);
            for (const HfSet& x : bound.elems()) {
                Env inner = env;
                inner[f.var()] = x;
                if (eval_delta0(f.body(), inner)) return true;
            }
            return false;
        }
        case SetFormula::Kind::BForall: {
            const HfSet bound = term_value(f.bound(), env);
            for (const HfSet& x : bound.elems()) {
                Env inner = env;
                inner[f.var()] = x;
                if (!eval_delta0(f.body(), inner)) return false;
            }
            return true;
        }
        case SetFormula::Kind::Exists:
        case SetFormula::Kind::Forall:
            throw NotDelta0("unbounded quantifier over " + f.var());
    }
    throw MalformedValue("unreachable formula kind");
}

namespace {

bool search_sigma1(const std::vector<std::string>& prefix, size_t at, const SetFormula& matrix,
                   Env& env, uint64_t bound) {
    if (at == prefix.size()) return eval_delta0(matrix, env);
    for (uint64_t n = 0; n < bound; ++n) {
        env[prefix[at]] = f_tau(n);
        if (search_sigma1(prefix, at + 1, matrix, env, bound)) return true;
    }
    env.erase(prefix[at]);
    return false;
}

}  // namespace

Sigma1Result eval_sigma1(const SetFormula& f, const Env& env, uint64_t search_bound) {
    std::vector<std::string> prefix;
    const SetFormula* matrix = &f;
    while (matrix->kind() == SetFormula::Kind::Exists) {
        prefix.push_back(matrix->var());
        matrix = &matrix->body();
    }
    if (!is_delta0(*matrix)) throw NotDelta0("matrix is not Delta_0");

    Sigma1Result r;
    Env work = env;
    if (!search_sigma1(prefix, 0, *matrix, work, search_bound)) return r;
    r.found = true;
    for (const std::string& v : prefix) r.witness[v] = work.at(v);
    return r;
}

namespace {

// Emits straight-line code for one formula; registers are handed out by a
// bump allocator whose mark is restored after every subterm, so loop
// bodies reuse the same scratch space on every iteration.
class Delta0Compiler {
  public:
    explicit Delta0Compiler(uint32_t first_scratch) : next_(first_scratch) {}

    MacroProgram compile(const SetFormula& f, const std::map<std::string, uint32_t>& vreg) {
        const uint32_t out = alloc();
        emit_formula(f, vreg, out);
        b_.emit(ins_copy(out, 0));
        return b_.finish();
    }

  private:
    uint32_t alloc() { return next_++; }

    void set_true(uint32_t r) {
        b_.emit(ins_zero(r));
        b_.emit(ins_add(r, r));  // {0} = 1
    }

    // Materialises a constant bottom-up.
    void emit_const(const HfSet& v, uint32_t out) {
        b_.emit(ins_zero(out));
        if (v.is_empty()) return;
        const uint32_t mark = next_;
        const uint32_t tmp = alloc();
        for (const HfSet& e : v.elems()) {
            emit_const(e, tmp);
            b_.emit(ins_add(tmp, out));
        }
        next_ = mark;
    }

    // Returns the register holding the term's value; constants are
    // materialised into fresh scratch space.
    uint32_t emit_term(const Term& t, const std::map<std::string, uint32_t>& vreg) {
        if (t.is_var()) {
            auto it = vreg.find(t.name());
            if (it == vreg.end()) throw UnboundVariable(t.name());
            return it->second;
        }
        const uint32_t r = alloc();
        emit_const(t.value(), r);
        return r;
    }

    void emit_formula(const SetFormula& f, const std::map<std::string, uint32_t>& vreg,
                      uint32_t out) {
        const uint32_t mark = next_;
        switch (f.kind()) {
            case SetFormula::Kind::Eq:
            case SetFormula::Kind::In: {
                const uint32_t r1 = emit_term(f.t1(), vreg);
                const uint32_t r2 = emit_term(f.t2(), vreg);
                const auto yes = b_.new_label();
                const auto end = b_.new_label();
                b_.emit(ins_zero(out));
                if (f.kind() == SetFormula::Kind::Eq)
                    b_.emit_jeq(r1, r2, yes);
                else
                    b_.emit_jmem(r1, r2, yes);
                b_.emit_goto(end);
                b_.bind(yes);
                set_true(out);
                b_.bind(end);
                break;
            }
            case SetFormula::Kind::Bot:
                b_.emit(ins_zero(out));
                break;
            case SetFormula::Kind::And: {
                const auto end = b_.new_label();
                emit_formula(f.lhs(), vreg, out);
                b_.emit_jez(out, end);  // already false
                emit_formula(f.rhs(), vreg, out);
                b_.bind(end);
                break;
            }
            case SetFormula::Kind::Or: {
                const auto other = b_.new_label();
                const auto end = b_.new_label();
                emit_formula(f.lhs(), vreg, out);
                b_.emit_jez(out, other);
                b_.emit_goto(end);
                b_.bind(other);
                emit_formula(f.rhs(), vreg, out);
                b_.bind(end);
                break;
            }
            case SetFormula::Kind::Imp: {
                const auto vacuous = b_.new_label();
                const auto end = b_.new_label();
                emit_formula(f.lhs(), vreg, out);
                b_.emit_jez(out, vacuous);
                emit_formula(f.rhs(), vreg, out);
                b_.emit_goto(end);
                b_.bind(vacuous);
                set_true(out);
                b_.bind(end);
                break;
            }
            case SetFormula::Kind::BExists:
            case SetFormula::Kind::BForall: {
                const bool universal = f.kind() == SetFormula::Kind::BForall;
                // The bound set is copied before the loop destroys it, so
                // enclosing re-evaluation sees it intact.
                const uint32_t src = emit_term(f.bound(), vreg);
                const uint32_t work = alloc();
                const uint32_t elem = alloc();
                const uint32_t sub = alloc();
                b_.emit(ins_copy(src, work));
                if (universal)
                    set_true(out);
                else
                    b_.emit(ins_zero(out));
                const auto head = b_.new_label();
                const auto decided = b_.new_label();
                const auto end = b_.new_label();
                b_.bind(head);
                b_.emit_jez(work, end);
                b_.emit(ins_take(work, elem));
                b_.emit(ins_remove(elem, work));
                auto inner = vreg;
                inner[f.var()] = elem;
                emit_formula(f.body(), inner, sub);
                if (universal) {
                    b_.emit_jez(sub, decided);  // counterexample
                    b_.emit_goto(head);
                    b_.bind(decided);
                    b_.emit(ins_zero(out));
                } else {
                    b_.emit_jez(sub, head);  // keep searching
                    set_true(out);
                }
                b_.bind(end);
                break;
            }
            case SetFormula::Kind::Exists:
            case SetFormula::Kind::Forall:
                throw NotDelta0("unbounded quantifier over " + f.var());
        }
        next_ = mark;
    }

    ProgramBuilder b_;
    uint32_t next_;
};

}  // namespace

MacroProgram compile_delta0(const SetFormula& f, const std::vector<std::string>& args) {
    if (!is_delta0(f)) throw NotDelta0("formula has an unbounded quantifier");

    // Arguments arrive in R_0..R_{k-1}; they are moved above the result
    // register before any code can clobber them.
    const uint32_t k = static_cast<uint32_t>(args.size());
    const uint32_t base = k == 0 ? 1 : k;
    std::map<std::string, uint32_t> vreg;
    ProgramBuilder prologue;
    for (uint32_t i = 0; i < k; ++i) {
        if (vreg.count(args[i])) throw MalformedValue("duplicate argument name: " + args[i]);
        vreg[args[i]] = base + i;
        prologue.emit(ins_copy(i, base + i));
    }

    Delta0Compiler c(base + k);
    MacroProgram body = c.compile(f, vreg);

    MacroProgram p = prologue.finish();
    const uint32_t shift = static_cast<uint32_t>(p.lines.size());
    for (Instruction ins : body.lines) {
        // Body jump targets are 1-based within the body; out-of-range
        // targets keep halting after the shift.
        if ((ins.op == Op::IfEmptyGoto || ins.op == Op::IfMemberGoto || ins.op == Op::Goto ||
             ins.op == Op::IfEqualGoto) &&
            ins.k >= 1)
            ins.k += shift;
        p.lines.push_back(ins);
    }
    p.flavor = minimal_flavor(p.lines);
    return p;
}

MacroProgram compile_delta0(const SetFormula& f) {
    const std::set<std::string> fv = free_vars(f);
    return compile_delta0(f, std::vector<std::string>(fv.begin(), fv.end()));
}

SetFormula gen_delta0(HfGen& g, const std::vector<std::string>& vars, uint32_t depth,
                      uint32_t const_rank) {
    auto term = [&](const std::vector<std::string>& scope) {
        if (!scope.empty() && g.coin(0.7))
            return Term::var(scope[g.below(scope.size())]);
        return Term::constant(g.gen(const_rank));
    };

    std::function<SetFormula(uint32_t, std::vector<std::string>&)> go =
        [&](uint32_t d, std::vector<std::string>& scope) -> SetFormula {
        const uint64_t pick = d == 0 ? g.below(5) : 5 + g.below(10);
        switch (pick) {
            case 0:
            case 1:
                return SetFormula::eq(term(scope), term(scope));
            case 2:
            case 3:
                return SetFormula::in(term(scope), term(scope));
            case 4:
                return g.coin(0.2) ? SetFormula::bot()
                                   : SetFormula::in(term(scope), term(scope));
            case 5:
            case 6:
                return SetFormula::conj(go(d - 1, scope), go(d - 1, scope));
            case 7:
            case 8:
                return SetFormula::disj(go(d - 1, scope), go(d - 1, scope));
            case 9:
            case 10:
                return SetFormula::imp(go(d - 1, scope), go(d - 1, scope));
            default: {
                const std::string v = "b" + std::to_string(scope.size());
                const Term bound = term(scope);
                scope.push_back(v);
                SetFormula body = go(d - 1, scope);
                scope.pop_back();
                return pick % 2 ? SetFormula::bexists(v, bound, std::move(body))
                                : SetFormula::bforall(v, bound, std::move(body));
            }
        }
    };

    std::vector<std::string> scope = vars;
    return go(depth, scope);
}

}  // namespace srm
