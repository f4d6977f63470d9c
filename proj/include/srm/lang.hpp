#pragma once

// Formula languages: propositional formulas, first-order formulas over
// predicates P0,P1,..., and set-theoretic formulas over membership and
// equality with HF constants.  All values are immutable trees.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srm/errors.hpp"
#include "srm/hfset.hpp"

namespace srm {

class PropFormula {
  public:
    enum class Kind { Atom, Bot, And, Or, Imp };

    static PropFormula atom(size_t index);
    static PropFormula bot();
    static PropFormula conj(PropFormula a, PropFormula b);
    static PropFormula disj(PropFormula a, PropFormula b);
    static PropFormula imp(PropFormula a, PropFormula b);
    // not-A is sugar for A -> bot
    static PropFormula neg(PropFormula a) { return imp(std::move(a), bot()); }

    Kind kind() const;
    size_t atom_index() const;
    const PropFormula& lhs() const;
    const PropFormula& rhs() const;

    bool operator==(const PropFormula& o) const;
    bool operator!=(const PropFormula& o) const { return !(*this == o); }

    struct Node;

  private:
    explicit PropFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static PropFormula make(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> n_;
};

std::set<size_t> prop_atoms(const PropFormula& f);

using AtomNamer = std::function<std::string(size_t)>;

std::string print_prop(const PropFormula& f, const AtomNamer& namer = {});
PropFormula parse_prop(std::string_view text);

// A term of the set language: a variable or an HF constant.
class Term {
  public:
    static Term var(std::string name);
    static Term constant(HfSet v);

    bool is_var() const { return is_var_; }
    const std::string& name() const;
    const HfSet& value() const;

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }

  private:
    Term() = default;
    bool is_var_ = false;
    std::string name_;
    HfSet value_;
};

class SetFormula {
  public:
    enum class Kind { Eq, In, Bot, And, Or, Imp, Exists, Forall, BExists, BForall };

    static SetFormula eq(Term a, Term b);
    static SetFormula in(Term a, Term b);
    static SetFormula bot();
    static SetFormula conj(SetFormula a, SetFormula b);
    static SetFormula disj(SetFormula a, SetFormula b);
    static SetFormula imp(SetFormula a, SetFormula b);
    static SetFormula neg(SetFormula a) { return imp(std::move(a), bot()); }
    static SetFormula exists(std::string var, SetFormula body);
    static SetFormula forall(std::string var, SetFormula body);
    // bounded quantifiers are primitive nodes, so the Delta_0 check is syntax
    static SetFormula bexists(std::string var, Term bound, SetFormula body);
    static SetFormula bforall(std::string var, Term bound, SetFormula body);

    Kind kind() const;
    const Term& t1() const;  // Eq/In
    const Term& t2() const;
    const SetFormula& lhs() const;  // And/Or/Imp
    const SetFormula& rhs() const;
    const std::string& var() const;  // quantifiers
    const Term& bound() const;       // bounded quantifiers
    const SetFormula& body() const;

    bool quantifier() const;
    bool bounded_quantifier() const;

    bool operator==(const SetFormula& o) const;
    bool operator!=(const SetFormula& o) const { return !(*this == o); }

    struct Node;

  private:
    explicit SetFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static SetFormula make(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> n_;
};

std::string print_setformula(const SetFormula& f);
SetFormula parse_setformula(std::string_view text);

std::set<std::string> free_vars(const SetFormula& f);
// Substitutes t for the free occurrences of name; alpha-renames binders that
// would capture a variable of t.
SetFormula subst(const SetFormula& f, const std::string& name, const Term& t);

bool is_delta0(const SetFormula& f);

HfSet godel_encode_formula(const SetFormula& f);
SetFormula godel_decode_formula(const HfSet& a);

class FoFormula {
  public:
    enum class Kind { Pred, Bot, And, Or, Imp, Exists, Forall };

    static FoFormula pred(size_t index, std::vector<std::string> args);
    static FoFormula bot();
    static FoFormula conj(FoFormula a, FoFormula b);
    static FoFormula disj(FoFormula a, FoFormula b);
    static FoFormula imp(FoFormula a, FoFormula b);
    static FoFormula exists(std::string var, FoFormula body);
    static FoFormula forall(std::string var, FoFormula body);

    Kind kind() const;
    size_t pred_index() const;
    const std::vector<std::string>& args() const;
    const FoFormula& lhs() const;
    const FoFormula& rhs() const;
    const std::string& var() const;
    const FoFormula& body() const;

    bool operator==(const FoFormula& o) const;
    bool operator!=(const FoFormula& o) const { return !(*this == o); }

    struct Node;

  private:
    explicit FoFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static FoFormula make(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> n_;
};

std::string print_fo(const FoFormula& f);
FoFormula parse_fo(std::string_view text);

// Atom index -> closed set formula.
using PropTranslation = std::map<size_t, SetFormula>;
// Throws MissingAtom when the formula mentions an unmapped atom.
SetFormula apply_prop_translation(const PropTranslation& t, const PropFormula& a);

// Predicate index -> (parameter variables, template whose free variables are
// among the parameters).
struct FoPredTemplate {
    std::vector<std::string> params;
    SetFormula body;
};
using FoTranslation = std::map<size_t, FoPredTemplate>;
SetFormula apply_fo_translation(const FoTranslation& t, const FoFormula& a);

// Restricted rules (V_n^a, V_n^c): the antecedent
// (/\_{i=1..n} (p_i -> q_i)) -> (p_{n+1} \/ p_{n+2}) and the consequent
// \/_{j=1..n+2} ((/\_{i=1..n} (p_i -> q_i)) -> p_j).
// Atom indices: p_i at i-1, q_i at (n+2)+(i-1).
std::pair<PropFormula, PropFormula> visser_rule(size_t n);
// Namer rendering that indexing as p1..p{n+2}, q1..qn.
AtomNamer visser_atom_namer(size_t n);

}  // namespace srm
