#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srm/asm.hpp"
#include "srm/errors.hpp"
#include "srm/hfgen.hpp"
#include "srm/hfset.hpp"
#include "srm/lang.hpp"

namespace srm {

using Env = std::map<std::string, HfSet>;

// Tarski truth over HF for formulas whose quantifiers are all bounded.
// Throws UnboundVariable for a free variable missing from env and
// NotDelta0 on an unbounded quantifier.
bool eval_delta0(const SetFormula& f, const Env& env);

// Bounded witness search for a formula that is Delta_0 under a prefix of
// unbounded existentials.  Candidates for each prefix variable are
// enumerated in the global take order (f_tau(0), f_tau(1), ...), trying
// search_bound candidates per variable.  A result without `found` means
// the search was exhausted, not that the formula is false.
struct Sigma1Result {
    bool found = false;
    Env witness;  // bindings for the existential prefix when found
};
Sigma1Result eval_sigma1(const SetFormula& f, const Env& env, uint64_t search_bound);

// Compiles a Delta_0 formula into a program: argument variable args[i] is
// read from R_i and the truth value (#1 / #0) ends in R_0.  The compiled
// program always halts, performs no omega-jumps, and touches scratch
// registers only above the argument registers; final register values
// other than R_0 are unspecified.  Throws NotDelta0, and UnboundVariable
// for a free variable not listed in args.
MacroProgram compile_delta0(const SetFormula& f, const std::vector<std::string>& args);

// Convenience: arguments are the free variables in sorted order.
MacroProgram compile_delta0(const SetFormula& f);

// Seeded random Delta_0 formula with free variables among `vars`,
// connective/quantifier depth at most `depth` and constants of rank at
// most `const_rank`.
SetFormula gen_delta0(HfGen& g, const std::vector<std::string>& vars, uint32_t depth,
                      uint32_t const_rank);

}  // namespace srm
