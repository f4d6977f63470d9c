#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "srm/asm.hpp"
#include "srm/hfgen.hpp"
#include "srm/hfset.hpp"
#include "srm/stdlib.hpp"
#include "srm/vm.hpp"

using namespace srm;

namespace {

const HfSet kEmpty;
const HfSet kOne = HfSet::of({kEmpty});  // {0} = 1

HfSet run1(const std::string& name, const HfSet& a) {
    return stdlib::run_entry(name, {a});
}

HfSet run2(const std::string& name, const HfSet& a, const HfSet& b) {
    return stdlib::run_entry(name, {a, b});
}

}  // namespace

TEST_CASE("the catalogue lists every entry with its shape") {
    const std::vector<std::string> names = stdlib::list();
    CHECK(names.size() == 26);
    for (size_t i = 1; i < names.size(); ++i) CHECK(names[i - 1] < names[i]);

    CHECK(stdlib::get("eq").arity == 2);
    CHECK(stdlib::get("eq").program.lines.size() == 14);
    CHECK(stdlib::get("eq").flavor == Flavor::Srm);
    CHECK(stdlib::get("union2").program.lines.size() == 5);
    CHECK(stdlib::get("intersect2").program.lines.size() == 8);
    CHECK(stdlib::get("vstage").program.lines.size() == 5);
    CHECK(stdlib::get("pow").flavor == Flavor::SrmPlus);
    CHECK(stdlib::get("vstage").flavor == Flavor::SrmPlus);
    CHECK(stdlib::get("f_tau").flavor == Flavor::SrmPlus);
    CHECK(stdlib::get("liminf_seq").flavor == Flavor::Srm);
    CHECK_THROWS_AS(stdlib::get("no_such_entry"), UnknownName);
}

TEST_CASE("every entry validates cleanly under its flavor") {
    for (const std::string& name : stdlib::list()) {
        INFO(name);
        const stdlib::Entry& e = stdlib::get(name);
        CHECK(minimal_flavor(e.program.lines) == e.flavor);
        const Program p = expand_macros(e.program);
        CHECK(p.flavor == e.flavor);
        CHECK(!has_errors(validate(p)));
    }
}

TEST_CASE("pinned runs match the native operations") {
    CHECK(run1("vstage", numeral(3)) == v_stage(3));
    CHECK(run2("tau_less", kEmpty, kOne) == numeral(1));
    CHECK(run2("tau_less", kOne, kEmpty) == numeral(0));
    CHECK(run1("f_tau", numeral(2)) == HfSet::of({kOne}));  // {{0}}
    CHECK(run1("f_tau", numeral(0)) == kEmpty);
    CHECK(run1("f_tau_inv", HfSet::of({kOne})) == numeral(2));
    CHECK(run2("eq", numeral(2), numeral(2)) == numeral(1));
    CHECK(run2("eq", kEmpty, kOne) == numeral(0));
    CHECK(run2("union2", kOne, HfSet::of({kOne})) == HfSet::of({kEmpty, kOne}));
    CHECK(run2("opair", kEmpty, kOne) == ordered_pair(kEmpty, kOne));
    CHECK(run1("proj1", ordered_pair(kOne, kEmpty)) == kOne);
    CHECK(run1("proj2", ordered_pair(kOne, kEmpty)) == kEmpty);
    CHECK(run1("is_ordinal", numeral(4)) == numeral(1));
    CHECK(run1("is_ordinal", HfSet::of({kOne})) == numeral(0));
}

TEST_CASE("every entry agrees with its native oracle") {
    // samples / max_rank per entry; shapes the samplers cannot raise.
    const std::map<std::string, std::pair<size_t, uint32_t>> plan = {
        {"eq", {1000, 4}},      {"bigunion", {200, 3}},  {"pow", {200, 2}},
        {"liminf_seq", {150, 2}}, {"is_ordseq", {200, 2}}, {"apply_fn", {200, 2}},
        {"seq_proj", {200, 2}},   {"choice_fn", {200, 2}}, {"is_func", {200, 2}},
        {"vstage", {40, 1}},      {"f_tau", {64, 1}},      {"f_tau_inv", {200, 2}},
        {"is_pow", {200, 2}},     {"dom", {200, 2}},
    };
    uint64_t seed = 20260818;
    for (const std::string& name : stdlib::list()) {
        auto it = plan.find(name);
        const size_t samples = it == plan.end() ? 200 : it->second.first;
        const uint32_t max_rank = it == plan.end() ? 3 : it->second.second;
        const stdlib::DiffReport r = stdlib::differential_test(name, samples, max_rank, seed++);
        INFO(stdlib::render_report(r));
        CHECK(r.samples == samples);
        CHECK(r.mismatches == 0);
    }
}

TEST_CASE("equality is reflexive as a program") {
    HfGen g(7);
    for (int i = 0; i < 50; ++i) {
        const HfSet x = g.gen(4);
        CHECK(run2("eq", x, x) == numeral(1));
    }
}

TEST_CASE("the frozen search and liminf programs match their builders") {
    CHECK(stdlib::get("least_sat").program ==
          stdlib::make_least_sat(stdlib::get("is_opair").program));
    CHECK(stdlib::get("liminf_seq").program == stdlib::build_liminf_seq());
}

TEST_CASE("the search combinator accepts other predicates") {
    // Predicate: R_0 is nonempty.
    const MacroProgram nonempty = assemble("1: JEZ 0 4\n2: ZERO 0\n3: ADD 0 0\n");
    const Program p = expand_macros(stdlib::make_least_sat(nonempty));
    CHECK(!has_errors(validate(p)));

    auto oracle = [](const HfSet& y) {
        for (const HfSet& e : y.elems())
            if (!e.is_empty()) return e;
        return HfSet();
    };
    CHECK(run_as_function(p, {HfSet::of({kEmpty, kOne})}, OracleTable{}, RunLimits{}) == kOne);
    CHECK(run_as_function(p, {kEmpty}, OracleTable{}, RunLimits{}) == kEmpty);

    HfGen g(11);
    for (int i = 0; i < 100; ++i) {
        const HfSet y = g.gen(3);
        CHECK(run_as_function(p, {y}, OracleTable{}, RunLimits{}) == oracle(y));
    }
}

TEST_CASE("running an entry checks its arity") {
    CHECK_THROWS_AS(stdlib::run_entry("eq", {kEmpty}), MalformedValue);
    CHECK_THROWS_AS(stdlib::run_entry("singleton", {kEmpty, kEmpty}), MalformedValue);
}

TEST_CASE("reports render name, counts and details") {
    const stdlib::DiffReport r = stdlib::differential_test("singleton", 10, 2, 1);
    const std::string text = stdlib::render_report(r);
    CHECK(text.find("singleton") != std::string::npos);
    CHECK(text.find("10 samples") != std::string::npos);
    CHECK(text.find("0 mismatches") != std::string::npos);
}
