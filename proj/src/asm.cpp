#include "srm/asm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <string_view>

namespace srm {

namespace {

struct OpInfo {
    const char* mnemonic;
    int regs;         // register operands (0..2)
    bool has_target;  // trailing line operand
};

constexpr std::array<OpInfo, 11> kOps{{
    {"ZERO", 1, false},
    {"ADD", 2, false},
    {"COPY", 2, false},
    {"TAKE", 2, false},
    {"REMOVE", 2, false},
    {"JEZ", 1, true},
    {"JMEM", 2, true},
    {"POW", 2, false},
    {"ORACLE", 2, false},
    {"GOTO", 0, true},
    {"JEQ", 2, true},
}};

const OpInfo& info(Op op) { return kOps[static_cast<size_t>(op)]; }

Instruction make_ins(Op op, uint32_t i, uint32_t j, uint32_t k) {
    Instruction ins;
    ins.op = op;
    ins.i = i;
    ins.j = j;
    ins.k = k;
    return ins;
}

}  // namespace

Instruction ins_zero(uint32_t i) { return make_ins(Op::Zero, i, 0, 0); }
Instruction ins_add(uint32_t i, uint32_t j) { return make_ins(Op::Add, i, j, 0); }
Instruction ins_copy(uint32_t i, uint32_t j) { return make_ins(Op::Copy, i, j, 0); }
Instruction ins_take(uint32_t i, uint32_t j) { return make_ins(Op::Take, i, j, 0); }
Instruction ins_remove(uint32_t i, uint32_t j) { return make_ins(Op::Remove, i, j, 0); }
Instruction ins_jez(uint32_t i, uint32_t k) { return make_ins(Op::IfEmptyGoto, i, 0, k); }
Instruction ins_jmem(uint32_t i, uint32_t j, uint32_t k) {
    return make_ins(Op::IfMemberGoto, i, j, k);
}
Instruction ins_pow(uint32_t i, uint32_t j) { return make_ins(Op::Pow, i, j, 0); }
Instruction ins_oracle(uint32_t i, uint32_t j) { return make_ins(Op::Oracle, i, j, 0); }
Instruction ins_goto(uint32_t k) { return make_ins(Op::Goto, 0, 0, k); }
Instruction ins_jeq(uint32_t i, uint32_t j, uint32_t k) {
    return make_ins(Op::IfEqualGoto, i, j, k);
}

std::string flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Srm: return "SRM";
        case Flavor::SrmPlus: return "SRM+";
        case Flavor::SrmOracle: return "SRM-oracle";
    }
    return "?";
}

std::optional<uint32_t> max_register(const std::vector<Instruction>& lines) {
    std::optional<uint32_t> m;
    auto see = [&m](uint32_t r) {
        if (!m || r > *m) m = r;
    };
    for (const Instruction& ins : lines) {
        const OpInfo& oi = info(ins.op);
        if (oi.regs >= 1) see(ins.i);
        if (oi.regs >= 2) see(ins.j);
    }
    return m;
}

size_t register_count(const Program& p) {
    auto m = max_register(p.lines);
    return m ? static_cast<size_t>(*m) + 1 : 1;
}

Flavor minimal_flavor(const std::vector<Instruction>& lines) {
    Flavor f = Flavor::Srm;
    for (const Instruction& ins : lines) {
        if (ins.op == Op::Oracle) return Flavor::SrmOracle;
        if (ins.op == Op::Pow) f = Flavor::SrmPlus;
    }
    return f;
}

namespace {

// Largest accepted line operand; far above any practical program length
// but small enough to rule out overflow when expansion shifts targets.
constexpr uint32_t kMaxTarget = 10'000'000;

struct LineScanner {
    std::string_view s;
    size_t pos = 0;
    size_t line_no;  // 1-based source line, for error positions

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(line_no, "line " + std::to_string(line_no) + ": " + what);
    }
    uint64_t number(const char* what, uint64_t bound) {
        skip_ws();
        size_t start = pos;
        uint64_t v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<uint64_t>(s[pos] - '0');
            if (v > bound) fail(std::string(what) + " out of range");
            ++pos;
        }
        if (pos == start) fail(std::string("expected ") + what);
        return v;
    }
    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])))) ++pos;
        return std::string(s.substr(start, pos - start));
    }
};

}  // namespace

MacroProgram assemble(const std::string& text) {
    MacroProgram p;
    size_t line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        LineScanner sc{raw, 0, line_no};
        if (sc.done()) continue;

        // `N:` label, which must agree with the instruction's position.
        size_t mark = sc.pos;
        if (std::isdigit(static_cast<unsigned char>(sc.s[sc.pos]))) {
            uint64_t label = sc.number("label", kMaxTarget);
            sc.skip_ws();
            if (sc.pos < sc.s.size() && sc.s[sc.pos] == ':') {
                ++sc.pos;
                if (label != p.lines.size() + 1)
                    throw BadLineNumber("label " + std::to_string(label) + " on line " +
                                        std::to_string(p.lines.size() + 1));
            } else {
                sc.pos = mark;
                sc.fail("expected mnemonic");
            }
        }

        std::string mnem = sc.word();
        if (mnem.empty()) sc.fail("expected mnemonic");
        int op_idx = -1;
        for (size_t t = 0; t < kOps.size(); ++t)
            if (mnem == kOps[t].mnemonic) op_idx = static_cast<int>(t);
        if (op_idx < 0) sc.fail("unknown mnemonic '" + mnem + "'");
        const OpInfo& oi = kOps[static_cast<size_t>(op_idx)];

        Instruction ins;
        ins.op = static_cast<Op>(op_idx);
        if (oi.regs >= 1) ins.i = static_cast<uint32_t>(sc.number("register", kMaxRegister - 1));
        if (oi.regs >= 2) ins.j = static_cast<uint32_t>(sc.number("register", kMaxRegister - 1));
        if (oi.has_target) ins.k = static_cast<uint32_t>(sc.number("line target", kMaxTarget));
        if (!sc.done()) sc.fail("trailing input");
        p.lines.push_back(ins);
    }
    p.flavor = minimal_flavor(p.lines);
    return p;
}

namespace {

std::string render(const std::vector<Instruction>& lines) {
    std::string out;
    for (size_t t = 0; t < lines.size(); ++t) {
        const Instruction& ins = lines[t];
        const OpInfo& oi = info(ins.op);
        out += std::to_string(t + 1);
        out += ": ";
        out += oi.mnemonic;
        if (oi.regs >= 1) out += " " + std::to_string(ins.i);
        if (oi.regs >= 2) out += " " + std::to_string(ins.j);
        if (oi.has_target) out += " " + std::to_string(ins.k);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string disassemble(const MacroProgram& p) { return render(p.lines); }
std::string disassemble(const Program& p) { return render(p.lines); }

Program expand_macros(const MacroProgram& p) {
    // Scratch registers sit strictly above everything the source mentions.
    uint32_t base = 0;
    if (auto m = max_register(p.lines)) base = *m + 1;
    const uint32_t flag = base;      // never written: always empty
    const uint32_t ra = base + 1;    // working copy of R_i
    const uint32_t rb = base + 2;    // working copy of R_j
    const uint32_t rt = base + 3;    // current element under comparison

    auto size_of = [](const Instruction& ins) -> size_t {
        switch (ins.op) {
            case Op::Goto: return 1;
            case Op::IfEqualGoto: return 12;
            default: return 1;
        }
    };

    const size_t n = p.lines.size();
    std::vector<size_t> start(n + 1);
    size_t acc = 1;
    for (size_t t = 0; t < n; ++t) {
        start[t] = acc;
        acc += size_of(p.lines[t]);
    }
    start[n] = acc;  // one past the last expanded line
    const size_t new_len = acc - 1;

    // Out-of-range targets keep halting: 0 stays 0, overruns land just
    // past the end.
    auto retarget = [&](uint32_t k) -> uint32_t {
        if (k == 0) return 0;
        if (k > n) return static_cast<uint32_t>(new_len + 1);
        return static_cast<uint32_t>(start[k - 1]);
    };

    Program out;
    out.flavor = p.flavor;
    out.lines.reserve(new_len);
    for (size_t t = 0; t < n; ++t) {
        const Instruction& ins = p.lines[t];
        switch (ins.op) {
            case Op::Goto:
                out.lines.push_back(ins_jez(flag, retarget(ins.k)));
                break;
            case Op::IfEqualGoto: {
                // Destructive element-by-element comparison of copies:
                // take the least element of a, remove it from both sides,
                // and fail fast on a mismatch.
                const uint32_t b = static_cast<uint32_t>(start[t]);
                const uint32_t yes = retarget(ins.k);
                const uint32_t next = static_cast<uint32_t>(start[t] + 12);
                out.lines.push_back(ins_copy(ins.i, ra));      // b+0
                out.lines.push_back(ins_copy(ins.j, rb));      // b+1
                out.lines.push_back(ins_jez(ra, b + 4));       // b+2
                out.lines.push_back(ins_jez(flag, b + 6));     // b+3
                out.lines.push_back(ins_jez(rb, yes));         // b+4: both empty
                out.lines.push_back(ins_jez(flag, next));      // b+5: only a empty
                out.lines.push_back(ins_take(ra, rt));         // b+6
                out.lines.push_back(ins_remove(rt, ra));       // b+7
                out.lines.push_back(ins_jmem(rt, rb, b + 10)); // b+8
                out.lines.push_back(ins_jez(flag, next));      // b+9: t missing from b
                out.lines.push_back(ins_remove(rt, rb));       // b+10
                out.lines.push_back(ins_jez(flag, b + 2));     // b+11: loop
                break;
            }
            default: {
                Instruction copy = ins;
                if (info(ins.op).has_target) copy.k = retarget(ins.k);
                out.lines.push_back(copy);
                break;
            }
        }
    }
    return out;
}

std::vector<Diagnostic> validate(const Program& p) {
    std::vector<Diagnostic> ds;
    auto error = [&ds](size_t line, std::string msg) {
        ds.push_back({Diagnostic::Severity::Error, line, std::move(msg)});
    };
    auto warning = [&ds](size_t line, std::string msg) {
        ds.push_back({Diagnostic::Severity::Warning, line, std::move(msg)});
    };

    if (p.lines.empty()) {
        error(0, "program has no instructions");
        return ds;
    }
    for (size_t t = 0; t < p.lines.size(); ++t) {
        const size_t line = t + 1;
        const Instruction& ins = p.lines[t];
        if (ins.op == Op::Goto || ins.op == Op::IfEqualGoto) {
            error(line, "macro instruction in a core program");
            continue;
        }
        const OpInfo& oi = info(ins.op);
        if (ins.op == Op::Pow && p.flavor == Flavor::Srm)
            error(line, "POW requires the SRM+ flavor");
        if (ins.op == Op::Oracle && p.flavor != Flavor::SrmOracle)
            error(line, "ORACLE requires the SRM-oracle flavor");
        if (oi.regs >= 1 && ins.i >= kMaxRegister) error(line, "register out of range");
        if (oi.regs >= 2 && ins.j >= kMaxRegister) error(line, "register out of range");
        if (oi.has_target && (ins.k == 0 || ins.k > p.lines.size() + 1))
            warning(line, "jump target " + std::to_string(ins.k) + " always halts");
    }
    return ds;
}

bool has_errors(const std::vector<Diagnostic>& ds) {
    return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) {
        return d.severity == Diagnostic::Severity::Error;
    });
}

HfSet encode_program(const Program& p) {
    std::vector<HfSet> entries;
    entries.reserve(p.lines.size());
    for (size_t t = 0; t < p.lines.size(); ++t) {
        const Instruction& ins = p.lines[t];
        HfSet body = ordered_pair(
            numeral(static_cast<uint64_t>(ins.op)),
            ordered_pair(numeral(ins.i), ordered_pair(numeral(ins.j), numeral(ins.k))));
        entries.push_back(ordered_pair(numeral(t + 1), std::move(body)));
    }
    return make_set(entries);
}

Program decode_program(const HfSet& code) {
    if (!is_function(code)) throw MalformedCode("program code is not a function");
    if (code.is_empty()) throw MalformedCode("program code is empty");

    std::vector<std::optional<Instruction>> slots(code.size());
    for (const HfSet& entry : code.elems()) {
        uint64_t line = to_natural(proj1(entry));
        if (line < 1 || line > code.size())
            throw MalformedCode("line numbers do not form an initial segment");
        const HfSet& body = proj2(entry);
        uint64_t op = to_natural(proj1(body));
        if (op > static_cast<uint64_t>(Op::Oracle))
            throw MalformedCode("opcode out of range");
        const HfSet& rest = proj2(body);
        uint64_t i = to_natural(proj1(rest));
        uint64_t j = to_natural(proj1(proj2(rest)));
        uint64_t k = to_natural(proj2(proj2(rest)));

        const OpInfo& oi = kOps[op];
        if ((oi.regs < 1 && i != 0) || (oi.regs < 2 && j != 0) || (!oi.has_target && k != 0))
            throw MalformedCode("unused operand is not zero");
        if (i >= kMaxRegister || j >= kMaxRegister) throw MalformedCode("register out of range");
        if (k > kMaxTarget) throw MalformedCode("line target out of range");

        slots[line - 1] = make_ins(static_cast<Op>(op), static_cast<uint32_t>(i),
                                   static_cast<uint32_t>(j), static_cast<uint32_t>(k));
    }

    Program p;
    p.lines.reserve(slots.size());
    for (auto& s : slots) {
        if (!s) throw MalformedCode("line numbers do not form an initial segment");
        p.lines.push_back(*s);
    }
    p.flavor = minimal_flavor(p.lines);
    return p;
}

// Decoding detail: is_function guarantees distinct first components, so a
// duplicated line number leaves some slot unfilled and is caught above.

ProgramBuilder::Label ProgramBuilder::new_label() {
    bound_.push_back(std::nullopt);
    return Label{bound_.size() - 1};
}

void ProgramBuilder::bind(Label l) {
    if (bound_.at(l.id).has_value()) throw MalformedValue("label bound twice");
    bound_[l.id] = lines_.size() + 1;
}

void ProgramBuilder::emit_jez(uint32_t reg, Label l) {
    fixups_.emplace_back(lines_.size(), l.id);
    emit(ins_jez(reg, 0));
}

void ProgramBuilder::emit_jmem(uint32_t i, uint32_t j, Label l) {
    fixups_.emplace_back(lines_.size(), l.id);
    emit(ins_jmem(i, j, 0));
}

void ProgramBuilder::emit_goto(Label l) {
    fixups_.emplace_back(lines_.size(), l.id);
    emit(ins_goto(0));
}

void ProgramBuilder::emit_jeq(uint32_t i, uint32_t j, Label l) {
    fixups_.emplace_back(lines_.size(), l.id);
    emit(ins_jeq(i, j, 0));
}

MacroProgram ProgramBuilder::finish() {
    for (auto [line_idx, label_id] : fixups_) {
        if (!bound_.at(label_id).has_value()) throw MalformedValue("unbound label");
        lines_[line_idx].k = static_cast<uint32_t>(*bound_[label_id]);
    }
    MacroProgram p;
    p.lines = std::move(lines_);
    p.flavor = minimal_flavor(p.lines);
    lines_.clear();
    bound_.clear();
    fixups_.clear();
    return p;
}

}  // namespace srm
