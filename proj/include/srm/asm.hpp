#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srm/errors.hpp"
#include "srm/hfset.hpp"

namespace srm {

// Register indices are bounded so that encoded programs stay small and
// configuration vectors stay allocatable.
inline constexpr uint32_t kMaxRegister = 1u << 16;

enum class Op : uint8_t {
    Zero,          // R_i := 0
    Add,           // R_j := R_j + {R_i}
    Copy,          // R_j := R_i
    Take,          // R_j := least element of R_i (no-op when R_i = 0)
    Remove,        // R_j := R_j - {R_i}
    IfEmptyGoto,   // if R_i = 0 goto k
    IfMemberGoto,  // if R_i in R_j goto k
    Pow,           // R_j := powerset of R_i
    Oracle,        // R_j := f(R_i) for the external oracle f
    // Macro instructions, eliminated by expand_macros:
    Goto,         // goto k
    IfEqualGoto,  // if R_i = R_j goto k
};

// Line targets k are 1-based; a jump outside [1, length] halts the machine.
struct Instruction {
    Op op = Op::Zero;
    uint32_t i = 0;
    uint32_t j = 0;
    uint32_t k = 0;

    bool operator==(const Instruction&) const = default;
};

// Construction helpers that zero the unused operand fields, which keeps
// structural equality and program codes canonical.
Instruction ins_zero(uint32_t i);
Instruction ins_add(uint32_t i, uint32_t j);
Instruction ins_copy(uint32_t i, uint32_t j);
Instruction ins_take(uint32_t i, uint32_t j);
Instruction ins_remove(uint32_t i, uint32_t j);
Instruction ins_jez(uint32_t i, uint32_t k);
Instruction ins_jmem(uint32_t i, uint32_t j, uint32_t k);
Instruction ins_pow(uint32_t i, uint32_t j);
Instruction ins_oracle(uint32_t i, uint32_t j);
Instruction ins_goto(uint32_t k);
Instruction ins_jeq(uint32_t i, uint32_t j, uint32_t k);

enum class Flavor : uint8_t {
    Srm,        // pure: no POW, no ORACLE
    SrmPlus,    // POW allowed
    SrmOracle,  // POW and ORACLE allowed
};

std::string flavor_name(Flavor f);

// A macro-free program.  `lines` is 1-based in all interfaces: lines[t-1]
// is the instruction at line t.
struct Program {
    std::vector<Instruction> lines;
    Flavor flavor = Flavor::Srm;

    bool operator==(const Program&) const = default;
};

// A program as written, possibly using GOTO / JEQ.
struct MacroProgram {
    std::vector<Instruction> lines;
    Flavor flavor = Flavor::Srm;

    bool operator==(const MacroProgram&) const = default;
};

// Largest register index mentioned by any line, or nullopt for a program
// that mentions none (only possible with macros).
std::optional<uint32_t> max_register(const std::vector<Instruction>& lines);

// Number of registers a run of p touches: 1 + max_register.
size_t register_count(const Program& p);

// Smallest flavor admitting every opcode in `lines`.
Flavor minimal_flavor(const std::vector<Instruction>& lines);

// Text format, one instruction per line:
//
//   1: TAKE 0 2      # optional comment
//
// The leading `n:` label is optional but must match the 1-based position
// when present (BadLineNumber otherwise).  Mnemonics: ZERO ADD COPY TAKE
// REMOVE JEZ JMEM POW ORACLE GOTO JEQ.  Blank lines and `#` comments are
// skipped.  The flavor is the minimal one for the opcodes used.
// Throws ParseError on anything else.
MacroProgram assemble(const std::string& text);

// Renders with a label on every line; assemble(disassemble(p)) == p.
std::string disassemble(const MacroProgram& p);
std::string disassemble(const Program& p);

// Rewrites GOTO and JEQ into core instructions.  Scratch registers are
// allocated strictly above every register the source mentions, jump
// targets are retargeted onto the expanded line numbering (out-of-range
// targets stay out of range, so halting behaviour is preserved), and
// R_0 is never written except where the source writes it.
Program expand_macros(const MacroProgram& p);

struct Diagnostic {
    enum class Severity : uint8_t { Warning, Error };
    Severity severity = Severity::Error;
    size_t line = 0;  // 1-based; 0 for program-level diagnostics
    std::string message;
};

// Static checks: empty program, flavor violations and register bounds are
// errors; jump targets outside [1, length + 1] are warnings (such jumps
// halt, which is legal but usually unintended).
std::vector<Diagnostic> validate(const Program& p);

bool has_errors(const std::vector<Diagnostic>& ds);

// A program is coded as the set function {<t, body_t> : 1 <= t <= length}
// where body_t = <op, <i, <j, k>>> with numeral opcode (ZERO=0, ADD=1,
// COPY=2, TAKE=3, REMOVE=4, JEZ=5, JMEM=6, POW=7, ORACLE=8) and numeral
// operands; operands an opcode does not use are coded 0.
HfSet encode_program(const Program& p);

// Strict inverse: requires a nonempty function on exactly {1, ..., m},
// in-range opcodes and operands, and zeros in unused operand slots.
// The flavor is re-inferred as minimal.  Throws MalformedCode.
Program decode_program(const HfSet& code);

// Emits instructions one at a time with forward-referencing labels; used
// by the formula compiler and the library combinators.
class ProgramBuilder {
  public:
    struct Label {
        size_t id;
    };

    // 1-based line number the next emitted instruction will occupy.
    size_t here() const { return lines_.size() + 1; }

    void emit(Instruction ins) { lines_.push_back(ins); }

    Label new_label();
    // Points `l` at the next emitted line.  Each label binds once.
    void bind(Label l);

    // Jumps whose target is patched by finish().
    void emit_jez(uint32_t reg, Label l);
    void emit_jmem(uint32_t i, uint32_t j, Label l);
    void emit_goto(Label l);
    void emit_jeq(uint32_t i, uint32_t j, Label l);

    // Resolves labels; throws MalformedValue on an unbound label.
    // Flavor is inferred as minimal.
    MacroProgram finish();

  private:
    std::vector<Instruction> lines_;
    std::vector<std::optional<size_t>> bound_;                // label id -> line
    std::vector<std::pair<size_t, size_t>> fixups_;           // line idx, label id
};

}  // namespace srm
