#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unordered_set>

#include "srm/hfgen.hpp"
#include "srm/lang.hpp"

using namespace srm;

namespace {

PropFormula gen_prop(std::mt19937_64& rng, int depth) {
    int pick = depth <= 0 ? int(rng() % 2) : int(rng() % 6);
    switch (pick) {
        case 0: return PropFormula::atom(rng() % 6);
        case 1: return PropFormula::bot();
        case 2: return PropFormula::conj(gen_prop(rng, depth - 1), gen_prop(rng, depth - 1));
        case 3: return PropFormula::disj(gen_prop(rng, depth - 1), gen_prop(rng, depth - 1));
        case 4: return PropFormula::imp(gen_prop(rng, depth - 1), gen_prop(rng, depth - 1));
        default: return PropFormula::neg(gen_prop(rng, depth - 1));
    }
}

const char* kVars[] = {"a", "b", "c", "x", "y"};

Term gen_term(std::mt19937_64& rng, HfGen& hf) {
    if (rng() % 3 == 0) return Term::constant(hf.gen(2, 3));
    return Term::var(kVars[rng() % 5]);
}

SetFormula gen_set(std::mt19937_64& rng, HfGen& hf, int depth) {
    int pick = depth <= 0 ? int(rng() % 3) : int(rng() % 10);
    switch (pick) {
        case 0: return SetFormula::eq(gen_term(rng, hf), gen_term(rng, hf));
        case 1: return SetFormula::in(gen_term(rng, hf), gen_term(rng, hf));
        case 2: return SetFormula::bot();
        case 3: return SetFormula::conj(gen_set(rng, hf, depth - 1), gen_set(rng, hf, depth - 1));
        case 4: return SetFormula::disj(gen_set(rng, hf, depth - 1), gen_set(rng, hf, depth - 1));
        case 5: return SetFormula::imp(gen_set(rng, hf, depth - 1), gen_set(rng, hf, depth - 1));
        case 6: return SetFormula::exists(kVars[rng() % 5], gen_set(rng, hf, depth - 1));
        case 7: return SetFormula::forall(kVars[rng() % 5], gen_set(rng, hf, depth - 1));
        case 8:
            return SetFormula::bexists(kVars[rng() % 5], gen_term(rng, hf),
                                       gen_set(rng, hf, depth - 1));
        default:
            return SetFormula::bforall(kVars[rng() % 5], gen_term(rng, hf),
                                       gen_set(rng, hf, depth - 1));
    }
}

FoFormula gen_fo(std::mt19937_64& rng, int depth) {
    int pick = depth <= 0 ? int(rng() % 2) : int(rng() % 7);
    switch (pick) {
        case 0: {
            std::vector<std::string> args;
            size_t arity = rng() % 3;
            for (size_t i = 0; i < arity; ++i) args.push_back(kVars[rng() % 5]);
            return FoFormula::pred(rng() % 4, std::move(args));
        }
        case 1: return FoFormula::bot();
        case 2: return FoFormula::conj(gen_fo(rng, depth - 1), gen_fo(rng, depth - 1));
        case 3: return FoFormula::disj(gen_fo(rng, depth - 1), gen_fo(rng, depth - 1));
        case 4: return FoFormula::imp(gen_fo(rng, depth - 1), gen_fo(rng, depth - 1));
        case 5: return FoFormula::exists(kVars[rng() % 5], gen_fo(rng, depth - 1));
        default: return FoFormula::forall(kVars[rng() % 5], gen_fo(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("propositional parsing") {
    PropFormula f = parse_prop("p0 -> p0");
    CHECK(f.kind() == PropFormula::Kind::Imp);
    CHECK(f.lhs() == PropFormula::atom(0));
    CHECK(f.rhs() == PropFormula::atom(0));

    // -> is right-associative and binds loosest
    CHECK(parse_prop("p0 -> p1 -> p2") ==
          PropFormula::imp(PropFormula::atom(0),
                           PropFormula::imp(PropFormula::atom(1), PropFormula::atom(2))));
    CHECK(parse_prop("p0 /\\ p1 \\/ p2") ==
          PropFormula::disj(PropFormula::conj(PropFormula::atom(0), PropFormula::atom(1)),
                            PropFormula::atom(2)));
    CHECK(parse_prop("p0 \\/ p1 \\/ p2") ==
          PropFormula::disj(PropFormula::disj(PropFormula::atom(0), PropFormula::atom(1)),
                            PropFormula::atom(2)));
    CHECK(parse_prop("~p3") == PropFormula::imp(PropFormula::atom(3), PropFormula::bot()));
    CHECK(parse_prop("((p12))") == PropFormula::atom(12));

    // unicode spellings
    CHECK(parse_prop("p0 ∧ ¬p1 → ⊥") ==
          parse_prop("p0 /\\ ~p1 -> bot"));

    CHECK_THROWS_AS(parse_prop("p0 ->"), ParseError);
    CHECK_THROWS_AS(parse_prop("q0"), ParseError);
    CHECK_THROWS_AS(parse_prop("p0 p1"), ParseError);
    CHECK_THROWS_AS(parse_prop("(p0"), ParseError);
    CHECK_THROWS_AS(parse_prop(""), ParseError);
}

TEST_CASE("propositional printing normalizes") {
    CHECK(print_prop(parse_prop("p0 -> p0")) == "p0 -> p0");
    CHECK(print_prop(parse_prop("(p0 -> p1) -> p2")) == "(p0 -> p1) -> p2");
    CHECK(print_prop(parse_prop("p0 -> (p1 -> p2)")) == "p0 -> p1 -> p2");
    CHECK(print_prop(parse_prop("(p0 /\\ p1) \\/ p2")) == "p0 /\\ p1 \\/ p2");
    CHECK(print_prop(parse_prop("p0 /\\ (p1 \\/ p2)")) == "p0 /\\ (p1 \\/ p2)");
    CHECK(print_prop(parse_prop("~p0")) == "p0 -> bot");
    CHECK(print_prop(parse_prop("p0 \\/ (p1 \\/ p2)")) == "p0 \\/ (p1 \\/ p2)");
    CHECK(print_prop(parse_prop("(p0 \\/ p1) \\/ p2")) == "p0 \\/ p1 \\/ p2");
}

TEST_CASE("propositional print/parse round-trip") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        PropFormula f = gen_prop(rng, 4);
        CAPTURE(print_prop(f));
        CHECK(parse_prop(print_prop(f)) == f);
    }
}

TEST_CASE("set formula parsing") {
    SetFormula f = parse_setformula("forall x in a . exists y . x in y");
    REQUIRE(f.kind() == SetFormula::Kind::BForall);
    CHECK(f.var() == "x");
    CHECK(f.bound() == Term::var("a"));
    REQUIRE(f.body().kind() == SetFormula::Kind::Exists);
    CHECK(f.body().body() == SetFormula::in(Term::var("x"), Term::var("y")));

    CHECK(parse_setformula("x = y") == SetFormula::eq(Term::var("x"), Term::var("y")));
    CHECK(parse_setformula("{∅} in x") ==
          SetFormula::in(Term::constant(make_set({HfSet()})), Term::var("x")));
    CHECK(parse_setformula("#2 = x") ==
          SetFormula::eq(Term::constant(numeral(2)), Term::var("x")));
    CHECK(parse_setformula("<∅, {∅}> = y") ==
          SetFormula::eq(Term::constant(ordered_pair(HfSet(), make_set({HfSet()}))),
                         Term::var("y")));

    // unicode quantifiers and membership
    CHECK(parse_setformula("∀ x ∈ a . x = x") ==
          parse_setformula("forall x in a . x = x"));

    CHECK_THROWS_AS(parse_setformula("x"), ParseError);
    CHECK_THROWS_AS(parse_setformula("forall x . "), ParseError);
    CHECK_THROWS_AS(parse_setformula("forall . x = x"), ParseError);
    CHECK_THROWS_AS(parse_setformula("x = y = z"), ParseError);
}

TEST_CASE("set formula printing normalizes") {
    CHECK(print_setformula(parse_setformula("forall x in a . exists y . x in y")) ==
          "forall x in a . exists y . x in y");
    CHECK(print_setformula(parse_setformula("(forall x . x = x) -> bot")) ==
          "(forall x . x = x) -> bot");
    CHECK(print_setformula(parse_setformula("x = y /\\ (exists z . z in x)")) ==
          "x = y /\\ (exists z . z in x)");
    CHECK(print_setformula(parse_setformula("{} = ∅")) == "∅ = ∅");
}

TEST_CASE("set formula print/parse round-trip") {
    std::mt19937_64 rng(77);
    HfGen hf(91);
    for (int i = 0; i < 500; ++i) {
        SetFormula f = gen_set(rng, hf, 4);
        CAPTURE(print_setformula(f));
        CHECK(parse_setformula(print_setformula(f)) == f);
    }
}

TEST_CASE("first-order parsing and printing") {
    FoFormula f = parse_fo("forall x . P0(x) -> P1(x, y)");
    REQUIRE(f.kind() == FoFormula::Kind::Forall);
    CHECK(f.body().kind() == FoFormula::Kind::Imp);
    CHECK(f.body().lhs() == FoFormula::pred(0, {"x"}));
    CHECK(f.body().rhs() == FoFormula::pred(1, {"x", "y"}));
    CHECK(print_fo(f) == "forall x . P0(x) -> P1(x, y)");
    CHECK(parse_fo("P2()") == FoFormula::pred(2, {}));

    CHECK_THROWS_AS(parse_fo("P0"), ParseError);
    CHECK_THROWS_AS(parse_fo("x in y"), ParseError);
    CHECK_THROWS_AS(parse_fo("forall x in y . P0(x)"), ParseError);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        FoFormula g = gen_fo(rng, 4);
        CAPTURE(print_fo(g));
        CHECK(parse_fo(print_fo(g)) == g);
    }
}

TEST_CASE("free variables") {
    CHECK(free_vars(parse_setformula("forall x in a . exists y . x in y")) ==
          std::set<std::string>{"a"});
    CHECK(free_vars(parse_setformula("x in y -> y in x")) ==
          std::set<std::string>({"x", "y"}));
    CHECK(free_vars(parse_setformula("forall x . x = x")).empty());
    // the bound of a bounded quantifier is evaluated outside the binder
    CHECK(free_vars(parse_setformula("forall x in x . bot")) ==
          std::set<std::string>{"x"});
    CHECK(free_vars(parse_setformula("{∅} = ∅")).empty());
}

TEST_CASE("substitution") {
    Term empty = Term::constant(HfSet());

    CHECK(subst(parse_setformula("x in y"), "x", empty) ==
          parse_setformula("∅ in y"));
    // bound occurrences are untouched
    CHECK(subst(parse_setformula("exists x . x in z"), "x", empty) ==
          parse_setformula("exists x . x in z"));
    // the bound term of a bounded quantifier is an outer occurrence
    CHECK(subst(parse_setformula("forall x in x . x = x"), "x", empty) ==
          parse_setformula("forall x in ∅ . x = x"));
    // capture forces a rename
    CHECK(subst(parse_setformula("exists y . x in y"), "x", Term::var("y")) ==
          parse_setformula("exists y' . y in y'"));
    // no capture: binder stays
    CHECK(subst(parse_setformula("exists y . x in y"), "x", Term::var("z")) ==
          parse_setformula("exists y . z in y"));
}

TEST_CASE("delta0 recognition") {
    CHECK(is_delta0(parse_setformula("forall x in a . exists y in x . y in a")));
    CHECK(is_delta0(parse_setformula("x = y /\\ bot")));
    CHECK_FALSE(is_delta0(parse_setformula("exists y . x in y")));
    CHECK_FALSE(is_delta0(parse_setformula("forall x in a . exists y . x in y")));
}

TEST_CASE("formula codes round-trip") {
    std::mt19937_64 rng(404);
    HfGen hf(405);
    for (int i = 0; i < 300; ++i) {
        SetFormula f = gen_set(rng, hf, 3);
        CAPTURE(print_setformula(f));
        CHECK(godel_decode_formula(godel_encode_formula(f)) == f);
    }
}

TEST_CASE("formula codes are injective on a large corpus") {
    std::mt19937_64 rng(7000);
    HfGen hf(7001);
    std::vector<SetFormula> corpus;
    std::set<std::string> seen;
    while (corpus.size() < 10000) {
        SetFormula f = gen_set(rng, hf, 3);
        if (seen.insert(print_setformula(f)).second) corpus.push_back(f);
    }
    std::unordered_set<HfSet, HfHash> codes;
    for (const SetFormula& f : corpus) codes.insert(godel_encode_formula(f));
    CHECK(codes.size() == corpus.size());
}

TEST_CASE("malformed codes are rejected") {
    CHECK_THROWS_AS(godel_decode_formula(HfSet()), MalformedCode);
    CHECK_THROWS_AS(godel_decode_formula(numeral(3)), MalformedCode);
    CHECK_THROWS_AS(godel_decode_formula(ordered_pair(numeral(11), HfSet())), MalformedCode);
    // bot must carry an empty payload
    CHECK_THROWS_AS(godel_decode_formula(ordered_pair(numeral(2), numeral(1))), MalformedCode);
    // truncated payload under a conjunction tag
    CHECK_THROWS_AS(godel_decode_formula(ordered_pair(numeral(3), numeral(1))), MalformedCode);
}

TEST_CASE("propositional translation") {
    PropTranslation t;
    t.emplace(0, parse_setformula("∅ = ∅"));
    t.emplace(1, parse_setformula("exists x . x = x"));

    SetFormula out = apply_prop_translation(t, parse_prop("p0 /\\ p1 -> bot \\/ p0"));
    CHECK(out == parse_setformula(
                     "∅ = ∅ /\\ (exists x . x = x) -> bot \\/ ∅ = ∅"));

    CHECK_THROWS_AS(apply_prop_translation(t, parse_prop("p2")), MissingAtom);

    PropTranslation open_image;
    open_image.emplace(0, parse_setformula("x = x"));
    CHECK_THROWS_AS(apply_prop_translation(open_image, parse_prop("p0")), MalformedValue);
}

TEST_CASE("first-order translation") {
    FoTranslation t;
    t.emplace(0, FoPredTemplate{{"x"}, parse_setformula("exists y . x in y")});
    t.emplace(1, FoPredTemplate{{"x", "y"}, parse_setformula("x in y")});

    CHECK(apply_fo_translation(t, parse_fo("P1(a, b)")) == parse_setformula("a in b"));
    // commutes with quantifiers
    CHECK(apply_fo_translation(t, parse_fo("forall x . P0(x)")) ==
          parse_setformula("forall x . exists y . x in y"));
    // substitution into the template avoids capture
    CHECK(apply_fo_translation(t, parse_fo("forall y . P0(y)")) ==
          parse_setformula("forall y . exists y' . y in y'"));
    CHECK(apply_fo_translation(t, parse_fo("bot")) == SetFormula::bot());

    CHECK_THROWS_AS(apply_fo_translation(t, parse_fo("P7()")), MissingAtom);
    CHECK_THROWS_AS(apply_fo_translation(t, parse_fo("P0(a, b)")), MalformedValue);

    FoTranslation stray;
    stray.emplace(0, FoPredTemplate{{"x"}, parse_setformula("x in z")});
    CHECK_THROWS_AS(apply_fo_translation(stray, parse_fo("P0(a)")), MalformedValue);
}

TEST_CASE("restricted rules") {
    auto [ante, cons] = visser_rule(1);
    AtomNamer nm = visser_atom_namer(1);
    CHECK(print_prop(ante, nm) == "(p1 -> q1) -> p2 \\/ p3");
    CHECK(print_prop(cons, nm) ==
          "((p1 -> q1) -> p1) \\/ ((p1 -> q1) -> p2) \\/ ((p1 -> q1) -> p3)");

    for (size_t n : {size_t(1), size_t(2), size_t(3), size_t(5)}) {
        auto [a, c] = visser_rule(n);
        std::set<size_t> expect;
        for (size_t i = 0; i < 2 * n + 2; ++i) expect.insert(i);
        CHECK(prop_atoms(a) == expect);
        CHECK(prop_atoms(c) == expect);
    }

    auto [a2, c2] = visser_rule(2);
    AtomNamer nm2 = visser_atom_namer(2);
    CHECK(print_prop(a2, nm2) == "(p1 -> q1) /\\ (p2 -> q2) -> p3 \\/ p4");

    CHECK_THROWS_AS(visser_rule(0), MalformedValue);
}
