#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unordered_set>

#include "srm/asm.hpp"
#include "srm/errors.hpp"
#include "srm/hfset.hpp"

using namespace srm;

namespace {

// Random macro programs with small registers and targets that may
// deliberately overshoot by up to two lines.
MacroProgram gen_macro(std::mt19937_64& rng, size_t max_len = 12) {
    auto below = [&rng](uint64_t n) {
        return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng);
    };
    MacroProgram p;
    size_t len = 1 + below(max_len);
    for (size_t t = 0; t < len; ++t) {
        Op op = static_cast<Op>(below(11));
        uint32_t i = static_cast<uint32_t>(below(8));
        uint32_t j = static_cast<uint32_t>(below(8));
        uint32_t k = static_cast<uint32_t>(1 + below(len + 2));
        switch (op) {
            case Op::Zero: p.lines.push_back(ins_zero(i)); break;
            case Op::Add: p.lines.push_back(ins_add(i, j)); break;
            case Op::Copy: p.lines.push_back(ins_copy(i, j)); break;
            case Op::Take: p.lines.push_back(ins_take(i, j)); break;
            case Op::Remove: p.lines.push_back(ins_remove(i, j)); break;
            case Op::IfEmptyGoto: p.lines.push_back(ins_jez(i, k)); break;
            case Op::IfMemberGoto: p.lines.push_back(ins_jmem(i, j, k)); break;
            case Op::Pow: p.lines.push_back(ins_pow(i, j)); break;
            case Op::Oracle: p.lines.push_back(ins_oracle(i, j)); break;
            case Op::Goto: p.lines.push_back(ins_goto(k)); break;
            case Op::IfEqualGoto: p.lines.push_back(ins_jeq(i, j, k)); break;
        }
    }
    p.flavor = minimal_flavor(p.lines);
    return p;
}

}  // namespace

TEST_CASE("assembly parses every instruction form") {
    MacroProgram p = assemble("1: TAKE 0 2");
    REQUIRE(p.lines.size() == 1);
    CHECK(p.lines[0] == ins_take(0, 2));
    CHECK(p.flavor == Flavor::Srm);

    p = assemble(
        "# a program exercising the whole instruction set\n"
        "1: ZERO 3\n"
        "2: ADD 0 1\n"
        "3: COPY 2 4   # destination comes second\n"
        "4: TAKE 1 2\n"
        "5: REMOVE 2 1\n"
        "6: JEZ 0 9\n"
        "7: JMEM 1 2 1\n"
        "8: POW 1 5\n"
        "9: ORACLE 5 6\n"
        "\n"
        "10: GOTO 2\n"
        "11: JEQ 0 1 4\n");
    REQUIRE(p.lines.size() == 11);
    CHECK(p.lines[0] == ins_zero(3));
    CHECK(p.lines[1] == ins_add(0, 1));
    CHECK(p.lines[2] == ins_copy(2, 4));
    CHECK(p.lines[3] == ins_take(1, 2));
    CHECK(p.lines[4] == ins_remove(2, 1));
    CHECK(p.lines[5] == ins_jez(0, 9));
    CHECK(p.lines[6] == ins_jmem(1, 2, 1));
    CHECK(p.lines[7] == ins_pow(1, 5));
    CHECK(p.lines[8] == ins_oracle(5, 6));
    CHECK(p.lines[9] == ins_goto(2));
    CHECK(p.lines[10] == ins_jeq(0, 1, 4));
    CHECK(p.flavor == Flavor::SrmOracle);

    // Labels are optional, and flavors are inferred minimally.
    p = assemble("ZERO 0\nPOW 0 1\n");
    CHECK(p.lines.size() == 2);
    CHECK(p.flavor == Flavor::SrmPlus);
    CHECK(assemble("ADD 0 0").flavor == Flavor::Srm);
}

TEST_CASE("assembly rejects malformed programs") {
    CHECK_THROWS_AS(assemble("1: FROB 0"), ParseError);
    CHECK_THROWS_AS(assemble("1: ADD 0"), ParseError);
    CHECK_THROWS_AS(assemble("1: ZERO 0 0"), ParseError);
    CHECK_THROWS_AS(assemble("1: ZERO"), ParseError);
    CHECK_THROWS_AS(assemble("1: GOTO 2 extra"), ParseError);
    CHECK_THROWS_AS(assemble("1: ZERO 65536"), ParseError);
    CHECK_THROWS_AS(assemble("1:"), ParseError);
    CHECK_THROWS_AS(assemble("7"), ParseError);

    // A label must match the instruction's actual position.
    CHECK_THROWS_AS(assemble("2: ZERO 0"), BadLineNumber);
    CHECK_THROWS_AS(assemble("1: ZERO 0\n3: ZERO 1"), BadLineNumber);
}

TEST_CASE("disassembly round-trips through the assembler") {
    MacroProgram p = assemble("ZERO 0\nGOTO 1");
    CHECK(disassemble(p) == "1: ZERO 0\n2: GOTO 1\n");

    std::mt19937_64 rng(2024);
    for (int it = 0; it < 300; ++it) {
        MacroProgram q = gen_macro(rng);
        CHECK(assemble(disassemble(q)) == q);
    }
}

TEST_CASE("macro expansion rewrites GOTO onto a fresh register") {
    MacroProgram p;
    p.lines.push_back(ins_goto(1));
    Program q = expand_macros(p);
    REQUIRE(q.lines.size() == 1);
    CHECK(q.lines[0] == ins_jez(0, 1));  // no registers mentioned, so 0 is fresh

    p.lines.clear();
    p.lines.push_back(ins_zero(5));
    p.lines.push_back(ins_goto(1));
    q = expand_macros(p);
    REQUIRE(q.lines.size() == 2);
    CHECK(q.lines[0] == ins_zero(5));
    CHECK(q.lines[1] == ins_jez(6, 1));
}

TEST_CASE("macro expansion inlines the equality subroutine") {
    MacroProgram p = assemble(
        "1: JEZ 0 3\n"
        "2: JEQ 0 1 1\n"
        "3: ZERO 0\n");
    Program q = expand_macros(p);
    // Line sizes 1, 12, 1; scratch registers 2 (flag), 3, 4, 5.
    REQUIRE(q.lines.size() == 14);
    CHECK(q.lines[0] == ins_jez(0, 14));
    CHECK(q.lines[1] == ins_copy(0, 3));
    CHECK(q.lines[2] == ins_copy(1, 4));
    CHECK(q.lines[3] == ins_jez(3, 6));
    CHECK(q.lines[4] == ins_jez(2, 8));
    CHECK(q.lines[5] == ins_jez(4, 1));
    CHECK(q.lines[6] == ins_jez(2, 14));
    CHECK(q.lines[7] == ins_take(3, 5));
    CHECK(q.lines[8] == ins_remove(5, 3));
    CHECK(q.lines[9] == ins_jmem(5, 4, 12));
    CHECK(q.lines[10] == ins_jez(2, 14));
    CHECK(q.lines[11] == ins_remove(5, 4));
    CHECK(q.lines[12] == ins_jez(2, 4));
    CHECK(q.lines[13] == ins_zero(0));
    CHECK(validate(q).empty());
}

TEST_CASE("macro expansion keeps out-of-range jumps out of range") {
    MacroProgram p = assemble("1: GOTO 0");
    Program q = expand_macros(p);
    REQUIRE(q.lines.size() == 1);
    CHECK(q.lines[0] == ins_jez(0, 0));

    p = assemble("1: JEQ 0 1 5\n2: ZERO 0\n");
    q = expand_macros(p);
    REQUIRE(q.lines.size() == 13);
    // The equality block's success target maps past the new end.
    CHECK(q.lines[4] == ins_jez(4, 14));
    CHECK(q.lines[12] == ins_zero(0));
}

TEST_CASE("validation flags flavor violations and unreachable jumps") {
    Program p;
    CHECK(has_errors(validate(p)));  // empty program

    p.lines = {ins_pow(0, 1)};
    p.flavor = Flavor::Srm;
    CHECK(has_errors(validate(p)));
    p.flavor = Flavor::SrmPlus;
    CHECK(validate(p).empty());

    p.lines = {ins_oracle(0, 1)};
    p.flavor = Flavor::SrmPlus;
    CHECK(has_errors(validate(p)));
    p.flavor = Flavor::SrmOracle;
    CHECK(validate(p).empty());

    // Jump to length + 1 is the normal way to halt; beyond it only warns.
    p.lines = {ins_jez(0, 2)};
    p.flavor = Flavor::Srm;
    CHECK(validate(p).empty());
    p.lines = {ins_jez(0, 3)};
    auto ds = validate(p);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].severity == Diagnostic::Severity::Warning);
    CHECK(!has_errors(ds));
    p.lines = {ins_jez(0, 0)};
    CHECK(validate(p).size() == 1);

    // Macro instructions may not reach the machine.
    p.lines = {ins_goto(1)};
    CHECK(has_errors(validate(p)));

    // Register bounds hold even for hand-built instructions.
    Instruction bad = ins_zero(0);
    bad.i = 70000;
    p.lines = {bad};
    CHECK(has_errors(validate(p)));
}

TEST_CASE("program codes round-trip") {
    Program p;
    p.lines = {ins_zero(0)};
    HfSet code = encode_program(p);
    CHECK(is_function(code));
    CHECK(code.size() == 1);
    CHECK(decode_program(code) == p);

    std::mt19937_64 rng(77);
    for (int it = 0; it < 200; ++it) {
        MacroProgram mp = gen_macro(rng);
        Program q = expand_macros(mp);
        CHECK(decode_program(encode_program(q)) == q);
    }
}

TEST_CASE("program codes are injective") {
    std::mt19937_64 rng(404);
    std::unordered_set<std::string> seen_text;
    std::unordered_set<HfSet, HfHash> codes;
    size_t produced = 0;
    while (produced < 1000) {
        Program q = expand_macros(gen_macro(rng, 6));
        if (!seen_text.insert(disassemble(q)).second) continue;
        ++produced;
        codes.insert(encode_program(q));
    }
    CHECK(codes.size() == 1000);
}

TEST_CASE("malformed program codes are rejected") {
    CHECK_THROWS_AS(decode_program(HfSet()), MalformedCode);
    CHECK_THROWS_AS(decode_program(numeral(3)), MalformedCode);

    auto body = [](uint64_t op, uint64_t i, uint64_t j, uint64_t k) {
        return ordered_pair(numeral(op), ordered_pair(numeral(i),
                            ordered_pair(numeral(j), numeral(k))));
    };
    // Line numbers must be exactly 1..m.
    CHECK_THROWS_AS(decode_program(make_set({ordered_pair(numeral(2), body(0, 0, 0, 0))})),
                    MalformedCode);
    CHECK_THROWS_AS(decode_program(make_set({ordered_pair(numeral(0), body(0, 0, 0, 0))})),
                    MalformedCode);
    // Opcode out of range.
    CHECK_THROWS_AS(decode_program(make_set({ordered_pair(numeral(1), body(9, 0, 0, 0))})),
                    MalformedCode);
    // Unused operand slots must be zero.
    CHECK_THROWS_AS(decode_program(make_set({ordered_pair(numeral(1), body(0, 0, 5, 0))})),
                    MalformedCode);
    CHECK_THROWS_AS(decode_program(make_set({ordered_pair(numeral(1), body(0, 0, 0, 5))})),
                    MalformedCode);
    // Valid single line for contrast.
    CHECK(decode_program(make_set({ordered_pair(numeral(1), body(5, 0, 0, 7))})).lines[0] ==
          ins_jez(0, 7));
}

TEST_CASE("the builder resolves labels, including forward references") {
    ProgramBuilder b;
    auto skip = b.new_label();
    auto loop = b.new_label();
    b.bind(loop);
    b.emit_goto(skip);
    b.emit(ins_zero(0));
    b.bind(skip);
    b.emit(ins_add(0, 0));
    b.emit_jez(0, loop);
    MacroProgram p = b.finish();
    REQUIRE(p.lines.size() == 4);
    CHECK(p.lines[0] == ins_goto(3));
    CHECK(p.lines[3] == ins_jez(0, 1));

    ProgramBuilder c;
    auto dangling = c.new_label();
    c.emit_goto(dangling);
    CHECK_THROWS_AS(c.finish(), MalformedValue);

    ProgramBuilder d;
    auto l = d.new_label();
    d.bind(l);
    CHECK_THROWS_AS(d.bind(l), MalformedValue);
}
