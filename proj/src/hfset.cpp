#include "srm/hfset.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>
#include <utility>

namespace srm {

namespace {

uint64_t mix64(uint64_t x) {
    // splitmix64 finaliser
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::shared_ptr<const HfSet::Node> make_node(std::vector<HfSet> elems) {
    auto n = std::make_shared<HfSet::Node>();
    uint32_t rank = 0;
    uint64_t code = 0;
    bool code_ok = true;
    uint64_t h = 0x51c2d1b427220a95ull ^ elems.size();
    for (const HfSet& e : elems) {
        rank = std::max(rank, e.rank() + 1);
        h = mix64(h ^ e.hash());
        if (auto c = e.small_code(); code_ok && c && *c < 64)
            code |= 1ull << *c;
        else
            code_ok = false;
    }
    n->elems = std::move(elems);
    n->hash = h;
    n->code = code;
    n->rank = rank;
    n->code_ok = code_ok;
    return n;
}

const std::shared_ptr<const HfSet::Node>& empty_node() {
    static const std::shared_ptr<const HfSet::Node> n = make_node({});
    return n;
}

int cmp_u64(uint64_t a, uint64_t b) { return a < b ? -1 : a > b ? 1 : 0; }

}  // namespace

HfSet::HfSet() : node_(empty_node()) {}

HfSet HfSet::from_sorted(std::vector<HfSet> elems) {
    if (elems.empty()) return HfSet();
    return HfSet(make_node(std::move(elems)));
}

HfSet HfSet::of(std::vector<HfSet> elems) {
    std::sort(elems.begin(), elems.end(), ack_less);
    elems.erase(std::unique(elems.begin(), elems.end(),
                            [](const HfSet& a, const HfSet& b) { return a == b; }),
                elems.end());
    return from_sorted(std::move(elems));
}

std::optional<uint64_t> HfSet::small_code() const {
    if (!node_->code_ok) return std::nullopt;
    return node_->code;
}

bool HfSet::contains(const HfSet& x) const {
    auto& v = node_->elems;
    auto it = std::lower_bound(v.begin(), v.end(), x, ack_less);
    return it != v.end() && *it == x;
}

bool HfSet::operator==(const HfSet& o) const {
    return ack_compare(*this, o) == Ordering::EQ;
}

namespace {

struct PtrPairHash {
    size_t operator()(const std::pair<const void*, const void*>& p) const {
        uint64_t x = reinterpret_cast<uintptr_t>(p.first);
        uint64_t y = reinterpret_cast<uintptr_t>(p.second);
        return static_cast<size_t>(mix64(x ^ (y * 0x9e3779b97f4a7c15ull)));
    }
};
// pairs of element-array addresses already confirmed equal
using EqMemo = std::unordered_set<std::pair<const void*, const void*>, PtrPairHash>;

// Structural equality with hash/size/rank prefilters.  The memo makes
// comparing equal-but-unshared trees polynomial; without it the element
// walk revisits equal subtrees exponentially often.
bool deep_eq(const HfSet& a, const HfSet& b, EqMemo& memo) {
    if (a.size() != b.size() || a.hash() != b.hash() || a.rank() != b.rank()) return false;
    if (a.is_empty()) return true;
    const void* pa = a.elems().data();
    const void* pb = b.elems().data();
    if (pa == pb) return true;
    auto key = pa < pb ? std::make_pair(pa, pb) : std::make_pair(pb, pa);
    if (memo.count(key)) return true;
    for (size_t i = 0; i < a.size(); ++i)
        if (!deep_eq(a.elems()[i], b.elems()[i], memo)) return false;
    memo.insert(key);
    return true;
}

Ordering ack_compare_impl(const HfSet& a, const HfSet& b, EqMemo& memo);

}  // namespace

Ordering ack_compare(const HfSet& a, const HfSet& b) {
    EqMemo memo;
    return ack_compare_impl(a, b, memo);
}

namespace {

Ordering ack_compare_impl(const HfSet& a, const HfSet& b, EqMemo& memo) {
    auto ca = a.small_code(), cb = b.small_code();
    if (ca && cb) {
        int c = cmp_u64(*ca, *cb);
        return c < 0 ? Ordering::LT : c > 0 ? Ordering::GT : Ordering::EQ;
    }
    if (a.rank() != b.rank()) return a.rank() < b.rank() ? Ordering::LT : Ordering::GT;
    if (deep_eq(a, b, memo)) return Ordering::EQ;
    // Binary comparison of codes = positionwise comparison of the element
    // sequences from the largest element down; the first difference is the
    // largest element of the symmetric difference and decides.
    auto ea = a.elems(), eb = b.elems();
    size_t i = ea.size(), j = eb.size();
    while (i > 0 && j > 0) {
        const HfSet& xa = ea[i - 1];
        const HfSet& xb = eb[j - 1];
        if (!deep_eq(xa, xb, memo)) return ack_compare_impl(xa, xb, memo);
        --i, --j;
    }
    if (i == j) return Ordering::EQ;
    return i < j ? Ordering::LT : Ordering::GT;
}

}  // namespace

HfSet make_set(std::vector<HfSet> elems) { return HfSet::of(std::move(elems)); }

std::optional<HfSet> take_least(const HfSet& a) {
    if (a.is_empty()) return std::nullopt;
    return a.elems().front();
}

HfSet powerset(const HfSet& a, uint64_t size_limit) {
    size_t n = a.size();
    if (n >= 63 || (1ull << n) > size_limit)
        throw ResourceExceeded("powerset: 2^" + std::to_string(n) + " exceeds budget of " +
                               std::to_string(size_limit));
    // Masks in increasing numeric order enumerate the subsets in increasing
    // Ackermann order, because the element list is ascending.
    std::vector<HfSet> subsets;
    subsets.reserve(1ull << n);
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
        std::vector<HfSet> sub;
        sub.reserve(static_cast<size_t>(__builtin_popcountll(mask)));
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) sub.push_back(a.elems()[i]);
        subsets.push_back(HfSet::from_sorted(std::move(sub)));
    }
    return HfSet::from_sorted(std::move(subsets));
}

HfSet union2(const HfSet& a, const HfSet& b) {
    std::vector<HfSet> out;
    out.reserve(a.size() + b.size());
    auto ia = a.elems().begin(), ea = a.elems().end();
    auto ib = b.elems().begin(), eb = b.elems().end();
    while (ia != ea && ib != eb) {
        switch (ack_compare(*ia, *ib)) {
            case Ordering::LT: out.push_back(*ia++); break;
            case Ordering::GT: out.push_back(*ib++); break;
            case Ordering::EQ: out.push_back(*ia++); ++ib; break;
        }
    }
    out.insert(out.end(), ia, ea);
    out.insert(out.end(), ib, eb);
    return HfSet::from_sorted(std::move(out));
}

HfSet intersect2(const HfSet& a, const HfSet& b) {
    std::vector<HfSet> out;
    auto ia = a.elems().begin(), ea = a.elems().end();
    auto ib = b.elems().begin(), eb = b.elems().end();
    while (ia != ea && ib != eb) {
        switch (ack_compare(*ia, *ib)) {
            case Ordering::LT: ++ia; break;
            case Ordering::GT: ++ib; break;
            case Ordering::EQ: out.push_back(*ia++); ++ib; break;
        }
    }
    return HfSet::from_sorted(std::move(out));
}

HfSet diff_singleton(const HfSet& a, const HfSet& b) {
    if (!b.contains(a)) return b;
    std::vector<HfSet> out;
    out.reserve(b.size() - 1);
    for (const HfSet& e : b.elems())
        if (e != a) out.push_back(e);
    return HfSet::from_sorted(std::move(out));
}

HfSet add_element(const HfSet& a, const HfSet& b) {
    if (b.contains(a)) return b;
    std::vector<HfSet> out;
    out.reserve(b.size() + 1);
    auto it = b.elems().begin(), end = b.elems().end();
    while (it != end && ack_less(*it, a)) out.push_back(*it++);
    out.push_back(a);
    out.insert(out.end(), it, end);
    return HfSet::from_sorted(std::move(out));
}

HfSet big_union(const HfSet& a) {
    HfSet out;
    for (const HfSet& e : a.elems()) out = union2(out, e);
    return out;
}

HfSet big_intersect(const HfSet& a) {
    if (a.is_empty()) throw EmptyIntersection();
    HfSet out = a.elems().front();
    for (size_t i = 1; i < a.size(); ++i) out = intersect2(out, a.elems()[i]);
    return out;
}

HfSet ordered_pair(const HfSet& a, const HfSet& b) {
    HfSet sa = HfSet::from_sorted({a});
    HfSet sab = make_set({a, b});
    return make_set({sa, sab});
}

namespace {
// Decomposes a Kuratowski pair; nullopt when p has no such shape.
std::optional<std::pair<HfSet, HfSet>> decompose_pair(const HfSet& p) {
    if (p.size() == 1) {
        // {{a}} = <a,a>
        const HfSet& inner = p.elems()[0];
        if (inner.size() != 1) return std::nullopt;
        return std::make_pair(inner.elems()[0], inner.elems()[0]);
    }
    if (p.size() != 2) return std::nullopt;
    const HfSet* single = nullptr;
    const HfSet* doubl = nullptr;
    for (const HfSet& e : p.elems()) {
        if (e.size() == 1 && !single) single = &e;
        else if (e.size() == 2 && !doubl) doubl = &e;
        else return std::nullopt;
    }
    if (!single || !doubl) return std::nullopt;
    const HfSet& a = single->elems()[0];
    if (!doubl->contains(a)) return std::nullopt;
    const HfSet& x = doubl->elems()[0];
    const HfSet& y = doubl->elems()[1];
    return std::make_pair(a, x == a ? y : x);
}
}  // namespace

bool is_ordered_pair(const HfSet& p) { return decompose_pair(p).has_value(); }

HfSet proj1(const HfSet& p) {
    auto d = decompose_pair(p);
    if (!d) throw MalformedValue("proj1: not an ordered pair: " + print_hf(p));
    return d->first;
}

HfSet proj2(const HfSet& p) {
    auto d = decompose_pair(p);
    if (!d) throw MalformedValue("proj2: not an ordered pair: " + print_hf(p));
    return d->second;
}

bool is_function(const HfSet& f) {
    std::vector<HfSet> firsts;
    firsts.reserve(f.size());
    for (const HfSet& e : f.elems()) {
        auto d = decompose_pair(e);
        if (!d) return false;
        firsts.push_back(d->first);
    }
    std::sort(firsts.begin(), firsts.end(), ack_less);
    for (size_t i = 1; i < firsts.size(); ++i)
        if (firsts[i - 1] == firsts[i]) return false;
    return true;
}

HfSet domain(const HfSet& f) {
    if (!is_function(f)) throw MalformedValue("domain: not a function: " + print_hf(f));
    std::vector<HfSet> firsts;
    firsts.reserve(f.size());
    for (const HfSet& e : f.elems()) firsts.push_back(proj1(e));
    return make_set(std::move(firsts));
}

HfSet apply(const HfSet& f, const HfSet& x) {
    if (!is_function(f)) throw MalformedValue("apply: not a function: " + print_hf(f));
    for (const HfSet& e : f.elems()) {
        auto d = decompose_pair(e);
        if (d->first == x) return d->second;
    }
    throw MalformedValue("apply: " + print_hf(x) + " not in domain");
}

HfSet numeral(uint64_t n) {
    HfSet v;
    for (uint64_t i = 0; i < n; ++i) v = add_element(v, v);
    return v;
}

bool is_ordinal(const HfSet& a) {
    // A canonical element list ascends, and the finite ordinals are exactly
    // 0 < 1 < 2 < ..., so a is an ordinal iff its k-th element is the set of
    // the k elements before it.  This sidesteps the cubic transitivity walk.
    auto es = a.elems();
    for (size_t k = 0; k < es.size(); ++k) {
        auto inner = es[k].elems();
        if (inner.size() != k) return false;
        for (size_t i = 0; i < k; ++i)
            if (inner[i] != es[i]) return false;
    }
    return true;
}

uint64_t to_natural(const HfSet& a) {
    if (!is_ordinal(a)) throw MalformedValue("to_natural: not a numeral: " + print_hf(a));
    return a.size();
}

bool is_ord_sequence(const HfSet& a) {
    return is_function(a) && is_ordinal(domain(a));
}

HfSet make_sequence(const std::vector<HfSet>& vals) {
    std::vector<HfSet> pairs;
    pairs.reserve(vals.size());
    HfSet idx;
    for (const HfSet& v : vals) {
        pairs.push_back(ordered_pair(idx, v));
        idx = add_element(idx, idx);
    }
    return make_set(std::move(pairs));
}

std::vector<HfSet> sequence_elements(const HfSet& s) {
    if (!is_ord_sequence(s)) throw MalformedValue("not a sequence: " + print_hf(s));
    std::vector<HfSet> out(s.size());
    for (const HfSet& e : s.elems()) {
        uint64_t i = to_natural(proj1(e));
        out[i] = proj2(e);
    }
    return out;
}

HfSet liminf_formula(const std::vector<HfSet>& xs) {
    if (xs.empty()) throw MalformedValue("liminf_formula: empty run");
    // tail(beta) = intersection of xs[beta+1..); the empty tail at the last
    // position is clamped to the last element.
    HfSet tail = xs.back();
    HfSet out = tail;
    for (size_t g = xs.size() - 1; g >= 1; --g) {
        tail = intersect2(xs[g], tail);
        out = union2(out, tail);
    }
    return out;
}

HfSet liminf_cycle(const std::vector<HfSet>& cycle) {
    if (cycle.empty()) throw MalformedValue("liminf_cycle: empty cycle");
    HfSet out = cycle.front();
    for (size_t i = 1; i < cycle.size(); ++i) out = intersect2(out, cycle[i]);
    return out;
}

HfSet v_stage(uint32_t n, uint64_t size_limit) {
    HfSet v;
    for (uint32_t i = 0; i < n; ++i) v = powerset(v, size_limit);
    return v;
}

HfSet f_tau(uint64_t n) {
    std::vector<HfSet> elems;
    for (unsigned b = 0; b < 64; ++b)
        if (n & (1ull << b)) elems.push_back(f_tau(b));
    return HfSet::from_sorted(std::move(elems));  // bit order is Ackermann order
}

uint64_t f_tau_inv(const HfSet& a) {
    auto c = a.small_code();
    if (!c) throw ResourceExceeded("f_tau_inv: code exceeds 64 bits");
    return *c;
}

std::string print_hf(const HfSet& a, HfStyle style) {
    if (style == HfStyle::Pretty && is_ordinal(a))
        return "#" + std::to_string(a.size());
    if (a.is_empty()) return "∅";
    std::string out = "{";
    bool first = true;
    for (const HfSet& e : a.elems()) {
        if (!first) out += ",";
        first = false;
        out += print_hf(e, style);
    }
    return out + "}";
}

namespace {

void skip_ws(std::string_view s, size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r'))
        ++pos;
}

}  // namespace

HfSet parse_hf_at(std::string_view s, size_t& pos) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw ParseError(pos, "expected a set");
    if (s.compare(pos, 3, "∅") == 0) {
        pos += 3;
        return HfSet();
    }
    char c = s[pos];
    if (c == '{') {
        ++pos;
        skip_ws(s, pos);
        std::vector<HfSet> elems;
        if (pos < s.size() && s[pos] == '}') {
            ++pos;
            return HfSet();
        }
        while (true) {
            elems.push_back(parse_hf_at(s, pos));
            skip_ws(s, pos);
            if (pos >= s.size()) throw ParseError(pos, "unterminated set");
            if (s[pos] == ',') {
                ++pos;
                continue;
            }
            if (s[pos] == '}') {
                ++pos;
                return make_set(std::move(elems));
            }
            throw ParseError(pos, "expected ',' or '}'");
        }
    }
    if (c == '#') {
        ++pos;
        if (pos >= s.size() || !isdigit(static_cast<unsigned char>(s[pos])))
            throw ParseError(pos, "expected digits after '#'");
        uint64_t n = 0;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
            n = n * 10 + (s[pos] - '0');
            if (n > 100000) throw ParseError(pos, "numeral too large");
            ++pos;
        }
        return numeral(n);
    }
    if (c == '<') {
        ++pos;
        HfSet a = parse_hf_at(s, pos);
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ',') throw ParseError(pos, "expected ',' in pair");
        ++pos;
        HfSet b = parse_hf_at(s, pos);
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != '>') throw ParseError(pos, "expected '>'");
        ++pos;
        return ordered_pair(a, b);
    }
    throw ParseError(pos, std::string("unexpected character '") + c + "'");
}

HfSet parse_hf(std::string_view text) {
    size_t pos = 0;
    HfSet a = parse_hf_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw ParseError(pos, "trailing input");
    return a;
}

}  // namespace srm
