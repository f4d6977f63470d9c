#pragma once

// Hereditarily finite sets.
//
// A value is stored canonically: elements deduplicated and sorted ascending
// in the Ackermann order (the order of the codes A(x) = sum over z in x of
// 2^A(z)).  Values are immutable and structurally shared, so copies are
// cheap and safe to pass between threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srm/errors.hpp"

namespace srm {

enum class Ordering { LT, EQ, GT };

class HfSet {
  public:
    HfSet();  // the empty set

    // Canonicalising constructor: sorts and deduplicates.
    static HfSet of(std::vector<HfSet> elems);

    // Trusted constructor: `elems` must already be strictly ascending.
    static HfSet from_sorted(std::vector<HfSet> elems);

    std::span<const HfSet> elems() const { return node_->elems; }
    size_t size() const { return node_->elems.size(); }
    bool is_empty() const { return node_->elems.empty(); }
    uint32_t rank() const { return node_->rank; }
    uint64_t hash() const { return node_->hash; }

    // Ackermann code, when it fits in 64 bits.
    std::optional<uint64_t> small_code() const;

    bool contains(const HfSet& x) const;

    bool operator==(const HfSet& o) const;
    bool operator!=(const HfSet& o) const { return !(*this == o); }

    struct Node {
        std::vector<HfSet> elems;
        uint64_t hash;
        uint64_t code;  // valid iff code_ok
        uint32_t rank;
        bool code_ok;
    };

  private:
    explicit HfSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend Ordering ack_compare(const HfSet&, const HfSet&);
};

// Total order by Ackermann code; never materialises codes beyond 64 bits.
Ordering ack_compare(const HfSet& a, const HfSet& b);

inline bool ack_less(const HfSet& a, const HfSet& b) {
    return ack_compare(a, b) == Ordering::LT;
}

HfSet make_set(std::vector<HfSet> elems);

// Least element in the Ackermann order; nullopt for the empty set.
std::optional<HfSet> take_least(const HfSet& a);

// Power set.  Throws ResourceExceeded when 2^|a| would exceed size_limit.
HfSet powerset(const HfSet& a, uint64_t size_limit = 1u << 16);

HfSet union2(const HfSet& a, const HfSet& b);
HfSet intersect2(const HfSet& a, const HfSet& b);
// b with a removed (b if a is no member), and b with a adjoined.
HfSet diff_singleton(const HfSet& a, const HfSet& b);
HfSet add_element(const HfSet& a, const HfSet& b);

HfSet big_union(const HfSet& a);
// Throws EmptyIntersection when a is empty.
HfSet big_intersect(const HfSet& a);

// Kuratowski pairs <a,b> = {{a},{a,b}}.
HfSet ordered_pair(const HfSet& a, const HfSet& b);
bool is_ordered_pair(const HfSet& p);
// Both throw MalformedValue unless is_ordered_pair holds.
HfSet proj1(const HfSet& p);
HfSet proj2(const HfSet& p);

// Set of ordered pairs with pairwise distinct first components.
bool is_function(const HfSet& f);
// Throws MalformedValue unless is_function holds.
HfSet domain(const HfSet& f);
// Throws MalformedValue unless f is a function with x in its domain.
HfSet apply(const HfSet& f, const HfSet& x);

// Von Neumann naturals: n = {0, ..., n-1}.
HfSet numeral(uint64_t n);
// Throws MalformedValue unless a is a numeral.
uint64_t to_natural(const HfSet& a);
// Transitive set of transitive sets.
bool is_ordinal(const HfSet& a);
// Function whose domain is an ordinal.
bool is_ord_sequence(const HfSet& a);

// <i, v_i> graph of a finite sequence, and its inverse.
HfSet make_sequence(const std::vector<HfSet>& vals);
std::vector<HfSet> sequence_elements(const HfSet& s);

// Pointwise limit inferior of a finite run of sets:  the union over beta of
// the intersection of the tail starting after beta, where the empty tail of
// the last position is taken to be the last element itself.
HfSet liminf_formula(const std::vector<HfSet>& xs);
// Limit inferior of an infinitely repeated cycle: the intersection.
HfSet liminf_cycle(const std::vector<HfSet>& cycle);

// Cumulative stages: V_0 = {}, V_{n+1} = powerset(V_n).
HfSet v_stage(uint32_t n, uint64_t size_limit = 1u << 16);

// Rank-ordered enumeration of HF: f_tau(n) is the set with Ackermann code n.
HfSet f_tau(uint64_t n);
// Inverse; throws ResourceExceeded when the code does not fit in 64 bits.
uint64_t f_tau_inv(const HfSet& a);

enum class HfStyle {
    Plain,   // only {} braces and the empty-set sign
    Pretty,  // von Neumann naturals shown as #n
};

std::string print_hf(const HfSet& a, HfStyle style = HfStyle::Plain);

// Grammar: '∅' | '{}' | '{' t (',' t)* '}' | '#' digits | '<' t ',' t '>',
// whitespace-insensitive.  Throws ParseError.
HfSet parse_hf(std::string_view text);
// Parses one term starting at pos, advancing pos past it.
HfSet parse_hf_at(std::string_view text, size_t& pos);

struct HfHash {
    size_t operator()(const HfSet& a) const { return static_cast<size_t>(a.hash()); }
};

}  // namespace srm
