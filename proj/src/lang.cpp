#include "srm/lang.hpp"

#include <cctype>
#include <optional>

namespace srm {

// --- AST nodes ---

struct PropFormula::Node {
    Kind kind;
    size_t index = 0;
    std::vector<PropFormula> kids;
};

PropFormula PropFormula::make(std::shared_ptr<const Node> n) {
    return PropFormula(std::move(n));
}

PropFormula PropFormula::atom(size_t index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->index = index;
    return make(std::move(n));
}

PropFormula PropFormula::bot() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bot;
    return make(std::move(n));
}

static std::shared_ptr<PropFormula::Node> prop_pair(PropFormula::Kind k, PropFormula a,
                                                    PropFormula b) {
    auto n = std::make_shared<PropFormula::Node>();
    n->kind = k;
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return n;
}

PropFormula PropFormula::conj(PropFormula a, PropFormula b) {
    return make(prop_pair(Kind::And, std::move(a), std::move(b)));
}
PropFormula PropFormula::disj(PropFormula a, PropFormula b) {
    return make(prop_pair(Kind::Or, std::move(a), std::move(b)));
}
PropFormula PropFormula::imp(PropFormula a, PropFormula b) {
    return make(prop_pair(Kind::Imp, std::move(a), std::move(b)));
}

PropFormula::Kind PropFormula::kind() const { return n_->kind; }

size_t PropFormula::atom_index() const {
    if (n_->kind != Kind::Atom) throw MalformedValue("atom_index: not an atom");
    return n_->index;
}

const PropFormula& PropFormula::lhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("lhs: not a binary formula");
    return n_->kids[0];
}

const PropFormula& PropFormula::rhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("rhs: not a binary formula");
    return n_->kids[1];
}

bool PropFormula::operator==(const PropFormula& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind || n_->index != o.n_->index) return false;
    if (n_->kids.size() != o.n_->kids.size()) return false;
    for (size_t i = 0; i < n_->kids.size(); ++i)
        if (n_->kids[i] != o.n_->kids[i]) return false;
    return true;
}

std::set<size_t> prop_atoms(const PropFormula& f) {
    std::set<size_t> out;
    switch (f.kind()) {
        case PropFormula::Kind::Atom: out.insert(f.atom_index()); break;
        case PropFormula::Kind::Bot: break;
        default: {
            out = prop_atoms(f.lhs());
            for (size_t i : prop_atoms(f.rhs())) out.insert(i);
        }
    }
    return out;
}

// --- terms ---

Term Term::var(std::string name) {
    Term t;
    t.is_var_ = true;
    t.name_ = std::move(name);
    return t;
}

Term Term::constant(HfSet v) {
    Term t;
    t.value_ = std::move(v);
    return t;
}

const std::string& Term::name() const {
    if (!is_var_) throw MalformedValue("name: not a variable");
    return name_;
}

const HfSet& Term::value() const {
    if (is_var_) throw MalformedValue("value: not a constant");
    return value_;
}

bool Term::operator==(const Term& o) const {
    if (is_var_ != o.is_var_) return false;
    return is_var_ ? name_ == o.name_ : value_ == o.value_;
}

// --- set-formula AST ---

struct SetFormula::Node {
    Kind kind;
    std::vector<Term> terms;  // Eq/In: both sides; bounded quantifier: the bound
    std::string var;
    std::vector<SetFormula> kids;
};

namespace {

std::shared_ptr<SetFormula::Node> set_node(SetFormula::Kind k) {
    auto n = std::make_shared<SetFormula::Node>();
    n->kind = k;
    return n;
}

}  // namespace

SetFormula SetFormula::make(std::shared_ptr<const Node> n) { return SetFormula(std::move(n)); }

SetFormula SetFormula::eq(Term a, Term b) {
    auto n = set_node(Kind::Eq);
    n->terms = {std::move(a), std::move(b)};
    return make(std::move(n));
}

SetFormula SetFormula::in(Term a, Term b) {
    auto n = set_node(Kind::In);
    n->terms = {std::move(a), std::move(b)};
    return make(std::move(n));
}

SetFormula SetFormula::bot() { return make(set_node(Kind::Bot)); }

SetFormula SetFormula::conj(SetFormula a, SetFormula b) {
    auto n = set_node(Kind::And);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

SetFormula SetFormula::disj(SetFormula a, SetFormula b) {
    auto n = set_node(Kind::Or);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

SetFormula SetFormula::imp(SetFormula a, SetFormula b) {
    auto n = set_node(Kind::Imp);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

SetFormula SetFormula::exists(std::string var, SetFormula body) {
    auto n = set_node(Kind::Exists);
    n->var = std::move(var);
    n->kids = {std::move(body)};
    return make(std::move(n));
}

SetFormula SetFormula::forall(std::string var, SetFormula body) {
    auto n = set_node(Kind::Forall);
    n->var = std::move(var);
    n->kids = {std::move(body)};
    return make(std::move(n));
}

SetFormula SetFormula::bexists(std::string var, Term bound, SetFormula body) {
    auto n = set_node(Kind::BExists);
    n->var = std::move(var);
    n->terms = {std::move(bound)};
    n->kids = {std::move(body)};
    return make(std::move(n));
}

SetFormula SetFormula::bforall(std::string var, Term bound, SetFormula body) {
    auto n = set_node(Kind::BForall);
    n->var = std::move(var);
    n->terms = {std::move(bound)};
    n->kids = {std::move(body)};
    return make(std::move(n));
}

SetFormula::Kind SetFormula::kind() const { return n_->kind; }

const Term& SetFormula::t1() const {
    if (n_->kind != Kind::Eq && n_->kind != Kind::In) throw MalformedValue("t1: not atomic");
    return n_->terms[0];
}

const Term& SetFormula::t2() const {
    if (n_->kind != Kind::Eq && n_->kind != Kind::In) throw MalformedValue("t2: not atomic");
    return n_->terms[1];
}

const SetFormula& SetFormula::lhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("lhs: not a binary formula");
    return n_->kids[0];
}

const SetFormula& SetFormula::rhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("rhs: not a binary formula");
    return n_->kids[1];
}

const std::string& SetFormula::var() const {
    if (!quantifier()) throw MalformedValue("var: not a quantifier");
    return n_->var;
}

const Term& SetFormula::bound() const {
    if (!bounded_quantifier()) throw MalformedValue("bound: not a bounded quantifier");
    return n_->terms[0];
}

const SetFormula& SetFormula::body() const {
    if (!quantifier()) throw MalformedValue("body: not a quantifier");
    return n_->kids[0];
}

bool SetFormula::quantifier() const {
    Kind k = n_->kind;
    return k == Kind::Exists || k == Kind::Forall || k == Kind::BExists || k == Kind::BForall;
}

bool SetFormula::bounded_quantifier() const {
    return n_->kind == Kind::BExists || n_->kind == Kind::BForall;
}

bool SetFormula::operator==(const SetFormula& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind || n_->var != o.n_->var) return false;
    if (n_->terms.size() != o.n_->terms.size() || n_->kids.size() != o.n_->kids.size())
        return false;
    for (size_t i = 0; i < n_->terms.size(); ++i)
        if (n_->terms[i] != o.n_->terms[i]) return false;
    for (size_t i = 0; i < n_->kids.size(); ++i)
        if (n_->kids[i] != o.n_->kids[i]) return false;
    return true;
}

// --- first-order AST ---

struct FoFormula::Node {
    Kind kind;
    size_t index = 0;
    std::vector<std::string> args;
    std::string var;
    std::vector<FoFormula> kids;
};

namespace {

std::shared_ptr<FoFormula::Node> fo_node(FoFormula::Kind k) {
    auto n = std::make_shared<FoFormula::Node>();
    n->kind = k;
    return n;
}

}  // namespace

FoFormula FoFormula::make(std::shared_ptr<const Node> n) { return FoFormula(std::move(n)); }

FoFormula FoFormula::pred(size_t index, std::vector<std::string> args) {
    auto n = fo_node(Kind::Pred);
    n->index = index;
    n->args = std::move(args);
    return make(std::move(n));
}

FoFormula FoFormula::bot() { return make(fo_node(Kind::Bot)); }

FoFormula FoFormula::conj(FoFormula a, FoFormula b) {
    auto n = fo_node(Kind::And);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

FoFormula FoFormula::disj(FoFormula a, FoFormula b) {
    auto n = fo_node(Kind::Or);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

FoFormula FoFormula::imp(FoFormula a, FoFormula b) {
    auto n = fo_node(Kind::Imp);
    n->kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

FoFormula FoFormula::exists(std::string var, FoFormula body) {
    auto n = fo_node(Kind::Exists);
    n->var = std::move(var);
    n->kids = {std::move(body)};
    return make(std::move(n));
}

FoFormula FoFormula::forall(std::string var, FoFormula body) {
    auto n = fo_node(Kind::Forall);
    n->var = std::move(var);
    n->kids = {std::move(body)};
    return make(std::move(n));
}

FoFormula::Kind FoFormula::kind() const { return n_->kind; }

size_t FoFormula::pred_index() const {
    if (n_->kind != Kind::Pred) throw MalformedValue("pred_index: not a predicate");
    return n_->index;
}

const std::vector<std::string>& FoFormula::args() const {
    if (n_->kind != Kind::Pred) throw MalformedValue("args: not a predicate");
    return n_->args;
}

const FoFormula& FoFormula::lhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("lhs: not a binary formula");
    return n_->kids[0];
}

const FoFormula& FoFormula::rhs() const {
    if (n_->kids.size() != 2) throw MalformedValue("rhs: not a binary formula");
    return n_->kids[1];
}

const std::string& FoFormula::var() const {
    if (n_->kind != Kind::Exists && n_->kind != Kind::Forall)
        throw MalformedValue("var: not a quantifier");
    return n_->var;
}

const FoFormula& FoFormula::body() const {
    if (n_->kids.size() != 1) throw MalformedValue("body: not a quantifier");
    return n_->kids[0];
}

bool FoFormula::operator==(const FoFormula& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind || n_->index != o.n_->index) return false;
    if (n_->args != o.n_->args || n_->var != o.n_->var) return false;
    if (n_->kids.size() != o.n_->kids.size()) return false;
    for (size_t i = 0; i < n_->kids.size(); ++i)
        if (n_->kids[i] != o.n_->kids[i]) return false;
    return true;
}

// --- lexer shared by the three parsers ---

namespace {

enum class Tok {
    LParen, RParen, Dot, Comma, Equals,
    Arrow, And, Or, Not, Bot, Forall, Exists, In,
    Ident, Const, End,
};

struct Token {
    Tok kind;
    std::string text;
    HfSet value;
    size_t pos = 0;
};

bool match_at(std::string_view s, size_t i, std::string_view pat) {
    return s.substr(i, pat.size()) == pat;
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    size_t i = 0;
    auto push = [&](Tok k, size_t pos, size_t adv) {
        out.push_back({k, "", HfSet(), pos});
        i += adv;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        size_t pos = i;
        if (c == '(') { push(Tok::LParen, pos, 1); continue; }
        if (c == ')') { push(Tok::RParen, pos, 1); continue; }
        if (c == '.') { push(Tok::Dot, pos, 1); continue; }
        if (c == ',') { push(Tok::Comma, pos, 1); continue; }
        if (c == '=') { push(Tok::Equals, pos, 1); continue; }
        if (c == '~') { push(Tok::Not, pos, 1); continue; }
        if (match_at(text, i, "->")) { push(Tok::Arrow, pos, 2); continue; }
        if (match_at(text, i, "/\\")) { push(Tok::And, pos, 2); continue; }
        if (match_at(text, i, "\\/")) { push(Tok::Or, pos, 2); continue; }
        if (match_at(text, i, "→")) { push(Tok::Arrow, pos, 3); continue; }   // →
        if (match_at(text, i, "∧")) { push(Tok::And, pos, 3); continue; }     // ∧
        if (match_at(text, i, "∨")) { push(Tok::Or, pos, 3); continue; }      // ∨
        if (match_at(text, i, "¬")) { push(Tok::Not, pos, 2); continue; }     // ¬
        if (match_at(text, i, "⊥")) { push(Tok::Bot, pos, 3); continue; }     // ⊥
        if (match_at(text, i, "∀")) { push(Tok::Forall, pos, 3); continue; }  // ∀
        if (match_at(text, i, "∃")) { push(Tok::Exists, pos, 3); continue; }  // ∃
        if (match_at(text, i, "∈")) { push(Tok::In, pos, 3); continue; }      // ∈
        if (c == '{' || c == '#' || c == '<' || match_at(text, i, "∅")) {
            HfSet v = parse_hf_at(text, i);
            out.push_back({Tok::Const, "", std::move(v), pos});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i + 1;
            while (j < text.size()) {
                char d = text[j];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'')
                    ++j;
                else
                    break;
            }
            std::string word(text.substr(i, j - i));
            i = j;
            if (word == "bot") out.push_back({Tok::Bot, "", HfSet(), pos});
            else if (word == "forall") out.push_back({Tok::Forall, "", HfSet(), pos});
            else if (word == "exists") out.push_back({Tok::Exists, "", HfSet(), pos});
            else if (word == "in") out.push_back({Tok::In, "", HfSet(), pos});
            else out.push_back({Tok::Ident, std::move(word), HfSet(), pos});
            continue;
        }
        throw ParseError(i, "unexpected character");
    }
    out.push_back({Tok::End, "", HfSet(), text.size()});
    return out;
}

struct TokenStream {
    std::vector<Token> toks;
    size_t i = 0;

    const Token& peek() const { return toks[i]; }
    const Token& take() { return toks[i++]; }
    bool eat(Tok k) {
        if (toks[i].kind == k) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!eat(k)) throw ParseError(toks[i].pos, std::string("expected ") + what);
    }
    void expect_end() {
        if (toks[i].kind != Tok::End) throw ParseError(toks[i].pos, "trailing input");
    }
};

// "p12" -> 12 for prefix 'p'; rejects anything else
std::optional<size_t> name_index(const std::string& w, char prefix) {
    if (w.size() < 2 || w[0] != prefix) return std::nullopt;
    size_t v = 0;
    for (size_t k = 1; k < w.size(); ++k) {
        char d = w[k];
        if (d < '0' || d > '9') return std::nullopt;
        v = v * 10 + static_cast<size_t>(d - '0');
        if (v > 1000000) return std::nullopt;
    }
    return v;
}

// --- propositional parser ---

struct PropParser {
    TokenStream& ts;

    PropFormula formula() {
        PropFormula a = disj();
        if (ts.eat(Tok::Arrow)) return PropFormula::imp(std::move(a), formula());
        return a;
    }
    PropFormula disj() {
        PropFormula a = conj();
        while (ts.eat(Tok::Or)) a = PropFormula::disj(std::move(a), conj());
        return a;
    }
    PropFormula conj() {
        PropFormula a = unary();
        while (ts.eat(Tok::And)) a = PropFormula::conj(std::move(a), unary());
        return a;
    }
    PropFormula unary() {
        if (ts.eat(Tok::Not)) return PropFormula::neg(unary());
        return primary();
    }
    PropFormula primary() {
        const Token& t = ts.peek();
        if (t.kind == Tok::Bot) {
            ts.take();
            return PropFormula::bot();
        }
        if (t.kind == Tok::LParen) {
            ts.take();
            PropFormula f = formula();
            ts.expect(Tok::RParen, ")");
            return f;
        }
        if (t.kind == Tok::Ident) {
            auto idx = name_index(t.text, 'p');
            if (!idx) throw ParseError(t.pos, "expected an atom like p0");
            ts.take();
            return PropFormula::atom(*idx);
        }
        throw ParseError(t.pos, "expected a formula");
    }
};

// --- set-formula parser ---

struct SetParser {
    TokenStream& ts;

    SetFormula formula() {
        SetFormula a = disj();
        if (ts.eat(Tok::Arrow)) return SetFormula::imp(std::move(a), formula());
        return a;
    }
    SetFormula disj() {
        SetFormula a = conj();
        while (ts.eat(Tok::Or)) a = SetFormula::disj(std::move(a), conj());
        return a;
    }
    SetFormula conj() {
        SetFormula a = unary();
        while (ts.eat(Tok::And)) a = SetFormula::conj(std::move(a), unary());
        return a;
    }
    SetFormula unary() {
        if (ts.eat(Tok::Not)) return SetFormula::neg(unary());
        Tok k = ts.peek().kind;
        if (k == Tok::Forall || k == Tok::Exists) return quantified();
        return primary();
    }
    SetFormula quantified() {
        bool universal = ts.take().kind == Tok::Forall;
        const Token& v = ts.peek();
        if (v.kind != Tok::Ident) throw ParseError(v.pos, "expected a variable");
        std::string name = v.text;
        ts.take();
        if (ts.eat(Tok::In)) {
            Term b = term();
            ts.expect(Tok::Dot, ".");
            SetFormula body = formula();
            return universal ? SetFormula::bforall(std::move(name), std::move(b), std::move(body))
                             : SetFormula::bexists(std::move(name), std::move(b), std::move(body));
        }
        ts.expect(Tok::Dot, ".");
        SetFormula body = formula();
        return universal ? SetFormula::forall(std::move(name), std::move(body))
                         : SetFormula::exists(std::move(name), std::move(body));
    }
    SetFormula primary() {
        const Token& t = ts.peek();
        if (t.kind == Tok::Bot) {
            ts.take();
            return SetFormula::bot();
        }
        if (t.kind == Tok::LParen) {
            ts.take();
            SetFormula f = formula();
            ts.expect(Tok::RParen, ")");
            return f;
        }
        Term a = term();
        if (ts.eat(Tok::Equals)) return SetFormula::eq(std::move(a), term());
        if (ts.eat(Tok::In)) return SetFormula::in(std::move(a), term());
        throw ParseError(ts.peek().pos, "expected = or in");
    }
    Term term() {
        const Token& t = ts.peek();
        if (t.kind == Tok::Ident) {
            Term r = Term::var(t.text);
            ts.take();
            return r;
        }
        if (t.kind == Tok::Const) {
            Term r = Term::constant(t.value);
            ts.take();
            return r;
        }
        throw ParseError(t.pos, "expected a term");
    }
};

// --- first-order parser ---

struct FoParser {
    TokenStream& ts;

    FoFormula formula() {
        FoFormula a = disj();
        if (ts.eat(Tok::Arrow)) return FoFormula::imp(std::move(a), formula());
        return a;
    }
    FoFormula disj() {
        FoFormula a = conj();
        while (ts.eat(Tok::Or)) a = FoFormula::disj(std::move(a), conj());
        return a;
    }
    FoFormula conj() {
        FoFormula a = unary();
        while (ts.eat(Tok::And)) a = FoFormula::conj(std::move(a), unary());
        return a;
    }
    FoFormula unary() {
        if (ts.eat(Tok::Not)) return FoFormula::imp(unary(), FoFormula::bot());
        Tok k = ts.peek().kind;
        if (k == Tok::Forall || k == Tok::Exists) return quantified();
        return primary();
    }
    FoFormula quantified() {
        bool universal = ts.take().kind == Tok::Forall;
        const Token& v = ts.peek();
        if (v.kind != Tok::Ident) throw ParseError(v.pos, "expected a variable");
        std::string name = v.text;
        ts.take();
        ts.expect(Tok::Dot, ".");
        FoFormula body = formula();
        return universal ? FoFormula::forall(std::move(name), std::move(body))
                         : FoFormula::exists(std::move(name), std::move(body));
    }
    FoFormula primary() {
        const Token& t = ts.peek();
        if (t.kind == Tok::Bot) {
            ts.take();
            return FoFormula::bot();
        }
        if (t.kind == Tok::LParen) {
            ts.take();
            FoFormula f = formula();
            ts.expect(Tok::RParen, ")");
            return f;
        }
        if (t.kind == Tok::Ident) {
            auto idx = name_index(t.text, 'P');
            if (!idx) throw ParseError(t.pos, "expected a predicate like P0");
            ts.take();
            ts.expect(Tok::LParen, "(");
            std::vector<std::string> args;
            if (!ts.eat(Tok::RParen)) {
                for (;;) {
                    const Token& a = ts.peek();
                    if (a.kind != Tok::Ident) throw ParseError(a.pos, "expected a variable");
                    args.push_back(a.text);
                    ts.take();
                    if (ts.eat(Tok::RParen)) break;
                    ts.expect(Tok::Comma, ",");
                }
            }
            return FoFormula::pred(*idx, std::move(args));
        }
        throw ParseError(t.pos, "expected a formula");
    }
};

}  // namespace

PropFormula parse_prop(std::string_view text) {
    TokenStream ts{lex(text)};
    PropParser p{ts};
    PropFormula f = p.formula();
    ts.expect_end();
    return f;
}

SetFormula parse_setformula(std::string_view text) {
    TokenStream ts{lex(text)};
    SetParser p{ts};
    SetFormula f = p.formula();
    ts.expect_end();
    return f;
}

FoFormula parse_fo(std::string_view text) {
    TokenStream ts{lex(text)};
    FoParser p{ts};
    FoFormula f = p.formula();
    ts.expect_end();
    return f;
}

// --- printers ---
// Precedence: -> is 1 (right-assoc), \/ is 2, /\ is 3, leaves 4.  Quantifier
// bodies extend to the end of the formula, so a quantifier prints bare only
// where an implication would (level 1).

namespace {

int prop_prec(PropFormula::Kind k) {
    switch (k) {
        case PropFormula::Kind::Imp: return 1;
        case PropFormula::Kind::Or: return 2;
        case PropFormula::Kind::And: return 3;
        default: return 4;
    }
}

void print_prop_at(std::string& out, const PropFormula& f, int ctx, const AtomNamer& nm) {
    bool wrap = prop_prec(f.kind()) < ctx;
    if (wrap) out += '(';
    switch (f.kind()) {
        case PropFormula::Kind::Atom: out += nm(f.atom_index()); break;
        case PropFormula::Kind::Bot: out += "bot"; break;
        case PropFormula::Kind::And:
            print_prop_at(out, f.lhs(), 3, nm);
            out += " /\\ ";
            print_prop_at(out, f.rhs(), 4, nm);
            break;
        case PropFormula::Kind::Or:
            print_prop_at(out, f.lhs(), 2, nm);
            out += " \\/ ";
            print_prop_at(out, f.rhs(), 3, nm);
            break;
        case PropFormula::Kind::Imp:
            print_prop_at(out, f.lhs(), 2, nm);
            out += " -> ";
            print_prop_at(out, f.rhs(), 1, nm);
            break;
    }
    if (wrap) out += ')';
}

int set_prec(const SetFormula& f) {
    switch (f.kind()) {
        case SetFormula::Kind::Imp: return 1;
        case SetFormula::Kind::Or: return 2;
        case SetFormula::Kind::And: return 3;
        default: return f.quantifier() ? 1 : 4;
    }
}

void print_term(std::string& out, const Term& t) {
    if (t.is_var()) out += t.name();
    else out += print_hf(t.value());
}

void print_set_at(std::string& out, const SetFormula& f, int ctx) {
    bool wrap = set_prec(f) < ctx;
    if (wrap) out += '(';
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
            print_term(out, f.t1());
            out += " = ";
            print_term(out, f.t2());
            break;
        case SetFormula::Kind::In:
            print_term(out, f.t1());
            out += " in ";
            print_term(out, f.t2());
            break;
        case SetFormula::Kind::Bot: out += "bot"; break;
        case SetFormula::Kind::And:
            print_set_at(out, f.lhs(), 3);
            out += " /\\ ";
            print_set_at(out, f.rhs(), 4);
            break;
        case SetFormula::Kind::Or:
            print_set_at(out, f.lhs(), 2);
            out += " \\/ ";
            print_set_at(out, f.rhs(), 3);
            break;
        case SetFormula::Kind::Imp:
            print_set_at(out, f.lhs(), 2);
            out += " -> ";
            print_set_at(out, f.rhs(), 1);
            break;
        case SetFormula::Kind::Exists:
        case SetFormula::Kind::Forall:
            out += f.kind() == SetFormula::Kind::Exists ? "exists " : "forall ";
            out += f.var();
            out += " . ";
            print_set_at(out, f.body(), 1);
            break;
        case SetFormula::Kind::BExists:
        case SetFormula::Kind::BForall:
            out += f.kind() == SetFormula::Kind::BExists ? "exists " : "forall ";
            out += f.var();
            out += " in ";
            print_term(out, f.bound());
            out += " . ";
            print_set_at(out, f.body(), 1);
            break;
    }
    if (wrap) out += ')';
}

int fo_prec(const FoFormula& f) {
    switch (f.kind()) {
        case FoFormula::Kind::Imp: return 1;
        case FoFormula::Kind::Or: return 2;
        case FoFormula::Kind::And: return 3;
        case FoFormula::Kind::Exists:
        case FoFormula::Kind::Forall: return 1;
        default: return 4;
    }
}

void print_fo_at(std::string& out, const FoFormula& f, int ctx) {
    bool wrap = fo_prec(f) < ctx;
    if (wrap) out += '(';
    switch (f.kind()) {
        case FoFormula::Kind::Pred: {
            out += 'P';
            out += std::to_string(f.pred_index());
            out += '(';
            const auto& as = f.args();
            for (size_t i = 0; i < as.size(); ++i) {
                if (i) out += ", ";
                out += as[i];
            }
            out += ')';
            break;
        }
        case FoFormula::Kind::Bot: out += "bot"; break;
        case FoFormula::Kind::And:
            print_fo_at(out, f.lhs(), 3);
            out += " /\\ ";
            print_fo_at(out, f.rhs(), 4);
            break;
        case FoFormula::Kind::Or:
            print_fo_at(out, f.lhs(), 2);
            out += " \\/ ";
            print_fo_at(out, f.rhs(), 3);
            break;
        case FoFormula::Kind::Imp:
            print_fo_at(out, f.lhs(), 2);
            out += " -> ";
            print_fo_at(out, f.rhs(), 1);
            break;
        case FoFormula::Kind::Exists:
        case FoFormula::Kind::Forall:
            out += f.kind() == FoFormula::Kind::Exists ? "exists " : "forall ";
            out += f.var();
            out += " . ";
            print_fo_at(out, f.body(), 1);
            break;
    }
    if (wrap) out += ')';
}

}  // namespace

std::string print_prop(const PropFormula& f, const AtomNamer& namer) {
    AtomNamer nm = namer ? namer : [](size_t i) { return "p" + std::to_string(i); };
    std::string out;
    print_prop_at(out, f, 1, nm);
    return out;
}

std::string print_setformula(const SetFormula& f) {
    std::string out;
    print_set_at(out, f, 1);
    return out;
}

std::string print_fo(const FoFormula& f) {
    std::string out;
    print_fo_at(out, f, 1);
    return out;
}

// --- variables and substitution ---

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_var()) out.insert(t.name());
}

void free_vars_into(const SetFormula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
        case SetFormula::Kind::In:
            term_vars(f.t1(), out);
            term_vars(f.t2(), out);
            break;
        case SetFormula::Kind::Bot: break;
        case SetFormula::Kind::And:
        case SetFormula::Kind::Or:
        case SetFormula::Kind::Imp:
            free_vars_into(f.lhs(), out);
            free_vars_into(f.rhs(), out);
            break;
        default: {
            // the bound term sits outside the binder's scope
            if (f.bounded_quantifier()) term_vars(f.bound(), out);
            std::set<std::string> inner;
            free_vars_into(f.body(), inner);
            inner.erase(f.var());
            out.insert(inner.begin(), inner.end());
        }
    }
}

Term subst_term(const Term& t, const std::map<std::string, Term>& m) {
    if (!t.is_var()) return t;
    auto it = m.find(t.name());
    return it == m.end() ? t : it->second;
}

SetFormula subst_map(const SetFormula& f, std::map<std::string, Term> m) {
    if (m.empty()) return f;
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
            return SetFormula::eq(subst_term(f.t1(), m), subst_term(f.t2(), m));
        case SetFormula::Kind::In:
            return SetFormula::in(subst_term(f.t1(), m), subst_term(f.t2(), m));
        case SetFormula::Kind::Bot: return f;
        case SetFormula::Kind::And:
            return SetFormula::conj(subst_map(f.lhs(), m), subst_map(f.rhs(), m));
        case SetFormula::Kind::Or:
            return SetFormula::disj(subst_map(f.lhs(), m), subst_map(f.rhs(), m));
        case SetFormula::Kind::Imp:
            return SetFormula::imp(subst_map(f.lhs(), m), subst_map(f.rhs(), m));
        default: {
            Term new_bound = f.bounded_quantifier() ? subst_term(f.bound(), m) : Term::var("_");
            std::string v = f.var();
            SetFormula body = f.body();

            std::map<std::string, Term> inner = std::move(m);
            inner.erase(v);
            std::set<std::string> body_free;
            free_vars_into(body, body_free);
            for (auto it = inner.begin(); it != inner.end();) {
                if (body_free.count(it->first)) ++it;
                else it = inner.erase(it);
            }

            bool captures = false;
            for (const auto& [k, t] : inner)
                if (t.is_var() && t.name() == v) captures = true;
            if (captures) {
                std::set<std::string> avoid = body_free;
                for (const auto& [k, t] : inner) {
                    avoid.insert(k);
                    if (t.is_var()) avoid.insert(t.name());
                }
                std::string fresh = v;
                do fresh += '\'';
                while (avoid.count(fresh));
                body = subst_map(body, {{v, Term::var(fresh)}});
                v = fresh;
            }
            body = subst_map(body, std::move(inner));

            switch (f.kind()) {
                case SetFormula::Kind::Exists: return SetFormula::exists(v, std::move(body));
                case SetFormula::Kind::Forall: return SetFormula::forall(v, std::move(body));
                case SetFormula::Kind::BExists:
                    return SetFormula::bexists(v, std::move(new_bound), std::move(body));
                default:
                    return SetFormula::bforall(v, std::move(new_bound), std::move(body));
            }
        }
    }
    throw MalformedValue("unreachable formula kind");
}

}  // namespace

std::set<std::string> free_vars(const SetFormula& f) {
    std::set<std::string> out;
    free_vars_into(f, out);
    return out;
}

SetFormula subst(const SetFormula& f, const std::string& name, const Term& t) {
    return subst_map(f, {{name, t}});
}

bool is_delta0(const SetFormula& f) {
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
        case SetFormula::Kind::In:
        case SetFormula::Kind::Bot: return true;
        case SetFormula::Kind::And:
        case SetFormula::Kind::Or:
        case SetFormula::Kind::Imp: return is_delta0(f.lhs()) && is_delta0(f.rhs());
        case SetFormula::Kind::Exists:
        case SetFormula::Kind::Forall: return false;
        default: return is_delta0(f.body());
    }
}

// --- Goedel coding of set formulas ---
// A formula is <tag, payload> with tags Eq 0, In 1, bot 2, /\ 3, \/ 4, -> 5,
// exists 6, forall 7, bounded exists 8, bounded forall 9.  A term is
// <0, string> for a variable or <1, value> for a constant; strings are
// sequences of character numerals.

namespace {

// Character numerals are shared across all encoded names; rebuilding them per
// occurrence would leave structurally equal deep sets unshared.
const HfSet& char_numeral(unsigned char c) {
    static const std::vector<HfSet> table = [] {
        std::vector<HfSet> v;
        v.reserve(128);
        HfSet cur;
        for (int i = 0; i < 128; ++i) {
            v.push_back(cur);
            cur = add_element(cur, cur);
        }
        return v;
    }();
    return table[c & 0x7f];
}

HfSet enc_string(const std::string& s) {
    std::vector<HfSet> cs;
    cs.reserve(s.size());
    for (unsigned char c : s) cs.push_back(char_numeral(c));
    return make_sequence(cs);
}

std::string dec_string(const HfSet& a) {
    if (!is_ord_sequence(a)) throw MalformedCode("name code is not a sequence");
    std::string out;
    for (const HfSet& c : sequence_elements(a)) {
        if (!is_ordinal(c)) throw MalformedCode("character code is not a numeral");
        uint64_t n = to_natural(c);
        if (n == 0 || n > 127) throw MalformedCode("character code out of range");
        out.push_back(static_cast<char>(n));
    }
    if (out.empty()) throw MalformedCode("empty name");
    return out;
}

uint64_t dec_nat(const HfSet& a) {
    if (!is_ordinal(a)) throw MalformedCode("tag is not a numeral");
    return to_natural(a);
}

std::pair<HfSet, HfSet> dec_pair(const HfSet& a) {
    if (!is_ordered_pair(a)) throw MalformedCode("expected an ordered pair");
    return {proj1(a), proj2(a)};
}

HfSet enc_term(const Term& t) {
    if (t.is_var()) return ordered_pair(numeral(0), enc_string(t.name()));
    return ordered_pair(numeral(1), t.value());
}

Term dec_term(const HfSet& a) {
    auto [tag, payload] = dec_pair(a);
    uint64_t k = dec_nat(tag);
    if (k == 0) return Term::var(dec_string(payload));
    if (k == 1) return Term::constant(payload);
    throw MalformedCode("unknown term tag");
}

constexpr uint64_t TAG_EQ = 0, TAG_IN = 1, TAG_BOT = 2, TAG_AND = 3, TAG_OR = 4,
                   TAG_IMP = 5, TAG_EXISTS = 6, TAG_FORALL = 7, TAG_BEXISTS = 8,
                   TAG_BFORALL = 9;

}  // namespace

HfSet godel_encode_formula(const SetFormula& f) {
    auto tagged = [](uint64_t t, const HfSet& payload) {
        return ordered_pair(numeral(t), payload);
    };
    switch (f.kind()) {
        case SetFormula::Kind::Eq:
            return tagged(TAG_EQ, ordered_pair(enc_term(f.t1()), enc_term(f.t2())));
        case SetFormula::Kind::In:
            return tagged(TAG_IN, ordered_pair(enc_term(f.t1()), enc_term(f.t2())));
        case SetFormula::Kind::Bot: return tagged(TAG_BOT, HfSet());
        case SetFormula::Kind::And:
            return tagged(TAG_AND, ordered_pair(godel_encode_formula(f.lhs()),
                                                godel_encode_formula(f.rhs())));
        case SetFormula::Kind::Or:
            return tagged(TAG_OR, ordered_pair(godel_encode_formula(f.lhs()),
                                               godel_encode_formula(f.rhs())));
        case SetFormula::Kind::Imp:
            return tagged(TAG_IMP, ordered_pair(godel_encode_formula(f.lhs()),
                                                godel_encode_formula(f.rhs())));
        case SetFormula::Kind::Exists:
            return tagged(TAG_EXISTS,
                          ordered_pair(enc_string(f.var()), godel_encode_formula(f.body())));
        case SetFormula::Kind::Forall:
            return tagged(TAG_FORALL,
                          ordered_pair(enc_string(f.var()), godel_encode_formula(f.body())));
        case SetFormula::Kind::BExists:
            return tagged(TAG_BEXISTS,
                          ordered_pair(enc_string(f.var()),
                                       ordered_pair(enc_term(f.bound()),
                                                    godel_encode_formula(f.body()))));
        default:
            return tagged(TAG_BFORALL,
                          ordered_pair(enc_string(f.var()),
                                       ordered_pair(enc_term(f.bound()),
                                                    godel_encode_formula(f.body()))));
    }
}

SetFormula godel_decode_formula(const HfSet& a) {
    auto [tag, payload] = dec_pair(a);
    switch (dec_nat(tag)) {
        case TAG_EQ: {
            auto [l, r] = dec_pair(payload);
            return SetFormula::eq(dec_term(l), dec_term(r));
        }
        case TAG_IN: {
            auto [l, r] = dec_pair(payload);
            return SetFormula::in(dec_term(l), dec_term(r));
        }
        case TAG_BOT:
            if (!payload.is_empty()) throw MalformedCode("bot carries a payload");
            return SetFormula::bot();
        case TAG_AND: {
            auto [l, r] = dec_pair(payload);
            return SetFormula::conj(godel_decode_formula(l), godel_decode_formula(r));
        }
        case TAG_OR: {
            auto [l, r] = dec_pair(payload);
            return SetFormula::disj(godel_decode_formula(l), godel_decode_formula(r));
        }
        case TAG_IMP: {
            auto [l, r] = dec_pair(payload);
            return SetFormula::imp(godel_decode_formula(l), godel_decode_formula(r));
        }
        case TAG_EXISTS: {
            auto [v, b] = dec_pair(payload);
            return SetFormula::exists(dec_string(v), godel_decode_formula(b));
        }
        case TAG_FORALL: {
            auto [v, b] = dec_pair(payload);
            return SetFormula::forall(dec_string(v), godel_decode_formula(b));
        }
        case TAG_BEXISTS: {
            auto [v, rest] = dec_pair(payload);
            auto [bound, b] = dec_pair(rest);
            return SetFormula::bexists(dec_string(v), dec_term(bound), godel_decode_formula(b));
        }
        case TAG_BFORALL: {
            auto [v, rest] = dec_pair(payload);
            auto [bound, b] = dec_pair(rest);
            return SetFormula::bforall(dec_string(v), dec_term(bound), godel_decode_formula(b));
        }
        default: throw MalformedCode("unknown formula tag");
    }
}

// --- translations ---

SetFormula apply_prop_translation(const PropTranslation& t, const PropFormula& a) {
    switch (a.kind()) {
        case PropFormula::Kind::Atom: {
            auto it = t.find(a.atom_index());
            if (it == t.end())
                throw MissingAtom("no translation for atom " + std::to_string(a.atom_index()));
            if (!free_vars(it->second).empty())
                throw MalformedValue("translation of atom " + std::to_string(a.atom_index()) +
                                     " is not a sentence");
            return it->second;
        }
        case PropFormula::Kind::Bot: return SetFormula::bot();
        case PropFormula::Kind::And:
            return SetFormula::conj(apply_prop_translation(t, a.lhs()),
                                    apply_prop_translation(t, a.rhs()));
        case PropFormula::Kind::Or:
            return SetFormula::disj(apply_prop_translation(t, a.lhs()),
                                    apply_prop_translation(t, a.rhs()));
        default:
            return SetFormula::imp(apply_prop_translation(t, a.lhs()),
                                   apply_prop_translation(t, a.rhs()));
    }
}

SetFormula apply_fo_translation(const FoTranslation& t, const FoFormula& a) {
    switch (a.kind()) {
        case FoFormula::Kind::Pred: {
            auto it = t.find(a.pred_index());
            if (it == t.end())
                throw MissingAtom("no translation for predicate " +
                                  std::to_string(a.pred_index()));
            const FoPredTemplate& tpl = it->second;
            if (tpl.params.size() != a.args().size())
                throw MalformedValue("predicate P" + std::to_string(a.pred_index()) +
                                     " applied to " + std::to_string(a.args().size()) +
                                     " arguments, template has " +
                                     std::to_string(tpl.params.size()));
            std::map<std::string, Term> m;
            for (size_t i = 0; i < tpl.params.size(); ++i) {
                if (!m.emplace(tpl.params[i], Term::var(a.args()[i])).second)
                    throw MalformedValue("duplicate template parameter " + tpl.params[i]);
            }
            for (const std::string& v : free_vars(tpl.body))
                if (!m.count(v))
                    throw MalformedValue("template for P" + std::to_string(a.pred_index()) +
                                         " has stray free variable " + v);
            return subst_map(tpl.body, std::move(m));
        }
        case FoFormula::Kind::Bot: return SetFormula::bot();
        case FoFormula::Kind::And:
            return SetFormula::conj(apply_fo_translation(t, a.lhs()),
                                    apply_fo_translation(t, a.rhs()));
        case FoFormula::Kind::Or:
            return SetFormula::disj(apply_fo_translation(t, a.lhs()),
                                    apply_fo_translation(t, a.rhs()));
        case FoFormula::Kind::Imp:
            return SetFormula::imp(apply_fo_translation(t, a.lhs()),
                                   apply_fo_translation(t, a.rhs()));
        case FoFormula::Kind::Exists:
            return SetFormula::exists(a.var(), apply_fo_translation(t, a.body()));
        default:
            return SetFormula::forall(a.var(), apply_fo_translation(t, a.body()));
    }
}

// --- restricted rules ---

std::pair<PropFormula, PropFormula> visser_rule(size_t n) {
    if (n < 1) throw MalformedValue("visser_rule: n must be at least 1");
    auto p = [](size_t j) { return PropFormula::atom(j - 1); };
    auto q = [n](size_t i) { return PropFormula::atom(n + 2 + i - 1); };

    PropFormula premise = PropFormula::imp(p(1), q(1));
    for (size_t i = 2; i <= n; ++i)
        premise = PropFormula::conj(std::move(premise), PropFormula::imp(p(i), q(i)));

    PropFormula antecedent =
        PropFormula::imp(premise, PropFormula::disj(p(n + 1), p(n + 2)));

    PropFormula consequent = PropFormula::imp(premise, p(1));
    for (size_t j = 2; j <= n + 2; ++j)
        consequent = PropFormula::disj(std::move(consequent), PropFormula::imp(premise, p(j)));

    return {std::move(antecedent), std::move(consequent)};
}

AtomNamer visser_atom_namer(size_t n) {
    return [n](size_t i) {
        if (i < n + 2) return "p" + std::to_string(i + 1);
        return "q" + std::to_string(i - (n + 2) + 1);
    };
}

}  // namespace srm
