#pragma once

// Fallible Beth models on infinite finitely-branching trees, presented by
// finite automata: the tree of finite successor-paths from the root, where
// each node's atom set and fallibility depend only on its state.  Forcing
// of propositional formulas is therefore computable by fixpoint iteration
// over the finite state graph.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "srm/errors.hpp"
#include "srm/lang.hpp"

namespace srm {

// A finite automaton presenting an infinite finitely-branching tree model.
// Sound models satisfy, for every state s with successor s':
//   - absorbing:      fallible(s) implies fallible(s');
//   - path closure:   if every infinite path from s meets a fallible state,
//                     then s is fallible;
//   - monotonicity:   atoms(s) is a subset of atoms(s');
//   - saturation:     a fallible state carries every atom in play;
//   - bar closure:    if every infinite path from s meets a state carrying
//                     atom p, then p is in atoms(s).
// validate_model checks all five; force assumes them.
struct RegularBethModel {
    struct State {
        std::string name;
        std::set<size_t> atoms;
        bool fallible = false;
        std::vector<size_t> successors;  // indices into states, nonempty

        bool operator==(const State& o) const = default;
    };
    std::vector<State> states;
    size_t root = 0;

    bool operator==(const RegularBethModel& o) const = default;
};

// One invariant violation; `state` is the witnessing state index.
struct ModelDiagnostic {
    std::string check;  // "shape", "absorbing", "path-closure", ...
    size_t state = 0;
    std::string message;
};

// Checks the five soundness invariants by graph closure and least-fixpoint
// computation.  Shape problems (dangling indices, empty successor lists)
// are reported first and suppress the semantic checks, which could not run
// safely.  An empty result means the model is valid.
std::vector<ModelDiagnostic> validate_model(const RegularBethModel& m);

// Forcing verdicts for every subformula of one root formula at every state.
class ForcingTable {
  public:
    const std::vector<PropFormula>& subformulas() const { return subs_; }
    size_t state_count() const { return states_; }

    // Throws MalformedValue when f is not among the tracked subformulas or
    // the state index is out of range.
    bool forces(size_t state, const PropFormula& f) const;

  private:
    friend ForcingTable force(const RegularBethModel&, const PropFormula&);
    size_t states_ = 0;
    std::vector<PropFormula> subs_;           // postorder, deduplicated
    std::vector<std::vector<bool>> forced_;   // forced_[sub][state]
};

// Kripke-Beth forcing over the states of a validated model:
//   bot    forced exactly at fallible states;
//   atoms  by membership, plus everywhere a fallible state sits;
//   and    pointwise;
//   or     least fixpoint X containing every state forcing a disjunct and
//          closed under "all successors in X" (a bar on the regular tree
//          is exactly such a fixpoint membership);
//   imp    at s iff at every state reachable from s (including s) forcing
//          the antecedent forces the consequent.
// The table is monotone along edges and trivial at fallible states.
ForcingTable force(const RegularBethModel& m, const PropFormula& a);

// Root verdict of force(m, a).
bool check_valid_on(const RegularBethModel& m, const PropFormula& a);

// One frontier node of a bar: at `state` the bar commits to a disjunct
// (0 = left, 1 = right).
struct BarEntry {
    size_t state = 0;
    int disjunct = 0;
    bool operator==(const BarEntry& o) const = default;
};

// For a state forcing a disjunction, extracts from the least-fixpoint
// computation a finite bar description: the set of states, reachable from
// `state` before any disjunct-decision, where a disjunct first becomes
// forced.  Entries are unique and sorted by state.  Throws NotForced when
// the state does not force the disjunction and MalformedValue when `goal`
// is not a disjunction.
std::vector<BarEntry> bar_witness(const RegularBethModel& m, size_t state,
                                  const PropFormula& goal);

// Searches validated models whose root refutes `a`: increasing state
// count, then successor-set shape, then atom/fallible assignments in
// lexicographic order, deduplicating by canonical graph form.  Atoms are
// restricted to those of `a` and every state is reachable from the root;
// neither loses countermodels.  Returns the first refuting model, or
// nothing at budget.  A miss is not a proof: the search is a refuter only.
std::optional<RegularBethModel> countermodel_search(const PropFormula& a, size_t max_states,
                                                    size_t max_branching);

// The standard two-state refutation of excluded middle: root s0 (no atoms)
// with successors [s1, s0], and s1 (atom p0) looping on itself.
RegularBethModel em_countermodel();

// A fixed Hilbert-style axiomatization of intuitionistic propositional
// logic, instantiated at atoms p0, p1, p2.  Every axiom is forced at every
// state of every valid model; modus ponens preserves root forcing.
std::vector<PropFormula> hilbert_ipc_axioms();

// Seeded random model over atoms p0..p(atom_count-1): a random graph is
// repaired into validity by monotone closure (growing fallibility and atom
// sets until the five invariants hold).  Never returns more than
// max_states states; successor lists have at most max_branching entries.
RegularBethModel random_valid_model(uint64_t seed, size_t max_states, size_t max_branching,
                                    size_t atom_count);

// Textual model format, one state per line plus a root line:
//   state <name> atoms=<p-list> fallible=<0|1> succ=<name-list>
//   root <name>
// Lists are comma-separated and may be empty (atoms only); `#` starts a
// comment.  parse throws ParseError (pos = 1-based line number) on bad
// syntax, duplicate or unknown names, empty successor lists, or a missing
// root.  print emits states in index order with the root line last.
RegularBethModel parse_beth_model(std::string_view text);
std::string print_beth_model(const RegularBethModel& m);

}  // namespace srm
