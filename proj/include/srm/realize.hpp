#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srm/asm.hpp"
#include "srm/errors.hpp"
#include "srm/hfset.hpp"
#include "srm/lang.hpp"
#include "srm/vm.hpp"

namespace srm {

// A program together with a parameter block.  Application runs the
// program on (parameters..., x) and reads R_0, so parameters act as a
// closure environment in fixed registers.
struct Realizer {
    Program program;
    std::vector<HfSet> parameters;
};

// Realizers travel as values <encode_program(p), sequence-of-parameters>;
// decode is strict (MalformedCode / MalformedValue).
HfSet encode_realizer(const Realizer& r);
Realizer decode_realizer(const HfSet& v);

// Runs one application; any non-halting outcome throws VmFailure.
HfSet apply_realizer(const Realizer& r, const HfSet& x, const RunLimits& limits = RunLimits{});

// Sampling context for the checker: universal clauses range over
// domain_sample, implication antecedents over implication_pool.
struct CheckContext {
    std::vector<HfSet> domain_sample;
    std::vector<Realizer> implication_pool;
    RunLimits limits;
    size_t depth_budget = 64;
};

// 22 transitively closed sets (every set of rank <= 3 plus six rank-4
// probes) and a pool of identity, constant and take-witness realizers.
CheckContext default_context();

// A falsifier verdict: `refuted` carries a replayable clause path down to
// the violated clause; otherwise the check is only a sampled pass.
struct Verdict {
    bool refuted = false;
    std::vector<std::string> path;
    std::string reason;

    bool operator==(const Verdict&) const = default;
};

// Structural recursion over the realisability clauses:
//   atomic:  truth of the membership / equality (the realizer is ignored);
//   bot:     refuted outright;
//   and:     r(0), r(1) decode to realizers of the conjuncts;
//   or:      r(0) must be #0 or #1 and selects, r(1) realizes the disjunct;
//   imp:     for every pool realizer s passing the antecedent, r(<s>)
//            must pass the consequent;
//   exists:  r(0) is the witness, r(1) realizes the instance;
//   forall:  r(a) realizes the instance for every sampled a;
//   bounded exists/forall: as above, with the witness required to be a
//            member of the bound and sampling restricted to it.
// Any vm failure or malformed value at an application refutes, with the
// failure recorded.  The formula must be closed.
Verdict check(const Realizer& r, const SetFormula& f, const CheckContext& ctx);

// Executable realizers for set-theoretic axioms, with the formulas they
// realize: empty_set, pairing, union, powerset, delta0_separation, ac.
// The corrupted variants break exactly one witness computation each and
// are refuted by check on the default context.  Throws UnknownName.
std::vector<std::string> axiom_names();
SetFormula axiom_formula(const std::string& name);
Realizer get_axiom_realizer(const std::string& name);
Realizer get_corrupted_realizer(const std::string& name);

}  // namespace srm
