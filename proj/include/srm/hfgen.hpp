#pragma once

// Seeded random generation of HF sets for differential and property tests.
// Sizes are geometrically distributed (p = 1/2, capped) and elements are
// drawn recursively one rank down, so low-rank sets stay frequent.

#include <cstdint>
#include <random>
#include <vector>

#include "srm/hfset.hpp"

namespace srm {

class HfGen {
  public:
    explicit HfGen(uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    bool coin(double p = 0.5) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
    }

    uint64_t below(uint64_t n) {
        return n == 0 ? 0 : std::uniform_int_distribution<uint64_t>(0, n - 1)(rng_);
    }

    HfSet gen(uint32_t max_rank, size_t size_cap = 5) {
        if (max_rank == 0) return HfSet();
        size_t k = 0;
        while (k < size_cap && coin()) ++k;
        std::vector<HfSet> elems;
        elems.reserve(k);
        for (size_t i = 0; i < k; ++i) elems.push_back(gen(max_rank - 1, size_cap));
        return make_set(std::move(elems));  // dedup may shrink
    }

    HfSet gen_nonempty(uint32_t max_rank) {
        HfSet a = gen(max_rank == 0 ? 1 : max_rank);
        return a.is_empty() ? HfSet::of({HfSet()}) : a;
    }

    // A function with small distinct keys of rank < max_rank.
    HfSet gen_function(uint32_t max_rank, size_t max_size = 4) {
        std::vector<HfSet> keys;
        size_t k = below(max_size + 1);
        for (size_t i = 0; i < k; ++i) keys.push_back(gen(max_rank));
        HfSet keyset = make_set(std::move(keys));
        std::vector<HfSet> pairs;
        for (const HfSet& key : keyset.elems())
            pairs.push_back(ordered_pair(key, gen(max_rank)));
        return make_set(std::move(pairs));
    }

    HfSet gen_sequence(uint32_t max_rank, size_t len) {
        std::vector<HfSet> vals;
        vals.reserve(len);
        for (size_t i = 0; i < len; ++i) vals.push_back(gen(max_rank));
        return make_sequence(vals);
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace srm
