#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srm/asm.hpp"
#include "srm/errors.hpp"
#include "srm/hfgen.hpp"
#include "srm/hfset.hpp"
#include "srm/vm.hpp"

namespace srm::stdlib {

// A named library program together with the native operation it mirrors.
// `sample` draws argument vectors of the right shape for differential
// testing (rank-bounded, geometric sizes, seeded).  Programs that consume
// their inputs destructively (e.g. eq) are unaffected observably: a run
// copies its arguments into registers.
struct Entry {
    std::string name;
    MacroProgram program;
    size_t arity = 1;
    Flavor flavor = Flavor::Srm;
    std::function<HfSet(const std::vector<HfSet>&)> oracle;
    std::function<std::vector<HfSet>(HfGen&, uint32_t)> sample;
};

// Throws UnknownName.
const Entry& get(const std::string& name);
std::vector<std::string> list();

// Expands, validates and runs the entry on args (result register R_0).
// Throws MalformedValue on an arity mismatch; run failures propagate.
HfSet run_entry(const std::string& name, const std::vector<HfSet>& args,
                const RunLimits& limits = RunLimits{});

struct DiffReport {
    std::string name;
    size_t samples = 0;
    size_t mismatches = 0;
    std::vector<std::string> details;  // first few mismatches, rendered
    double millis = 0.0;
};

// Runs the entry against its native oracle on seeded random inputs of
// rank <= max_rank.
DiffReport differential_test(const std::string& name, size_t samples, uint32_t max_rank,
                             uint64_t seed);

std::string render_report(const DiffReport& r);

// Builds the bounded-search program "the least element x of R_0 with
// P(x)" for a unary predicate program P (input and 0/1 result in R_0).
// P is inlined with its registers shifted above the driver's and zeroed
// before every call; the result is the empty set when nothing qualifies.
MacroProgram make_least_sat(const MacroProgram& pred);

// Builds the liminf program for sequences: for every index b of the
// input, intersect the values at indices above b (the value at b itself
// when it is the last index), and union the results.
MacroProgram build_liminf_seq();

}  // namespace srm::stdlib
