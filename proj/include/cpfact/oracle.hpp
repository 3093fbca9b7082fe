#pragma once

#include <cstdint>
#include <vector>

#include "cpfact/lru_cache.hpp"
#include "cpfact/matrix_core.hpp"

namespace cpfact {

// Every rank-one term R with m - R doubly nonnegative, i.e. k^2 <= a,
// t^2 <= c, k*t <= b and det2(m - R) >= 0, excluding (0,0). Ordered
// lexicographically descending.
std::vector<RankOneTerm> enumerate_reductions(const SymMat2& m);

enum class SearchStatus { Exact, DepthCapped };

const char* to_string(SearchStatus s);

struct MinRankResult {
    Int min_terms{0};
    Factorization witness;
    std::uint64_t nodes_explored{0};
    SearchStatus status{SearchStatus::Exact};
};

// Memo table shared across min_cp_rank calls (e.g. over a survey sweep).
// Entries are absolute facts about (matrix, depth) states, so reuse across
// inputs is sound.
class OracleCache {
public:
    struct Key {
        Int a, b, c, depth;

        bool operator==(const Key&) const = default;
    };

    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    struct Entry {
        bool feasible{false};
        RankOneTerm move; // first term of a witness when feasible
    };

    explicit OracleCache(std::size_t capacity = std::size_t{1} << 20)
        : table_(capacity) {}

    LruCache<Key, Entry, KeyHash>& table() { return table_; }

private:
    LruCache<Key, Entry, KeyHash> table_;
};

// Minimal number of terms in an integer cp-factorization of m, by iterative
// deepening over the term count with depth-first search over
// enumerate_reductions. Along a branch terms are kept lexicographically
// nonincreasing (a symmetry reduction, not a pruning of solutions).
// If no factorization with at most depth_cap terms exists, the result is
// status DepthCapped with min_terms 0 and an empty witness.
MinRankResult min_cp_rank(const SymMat2& m, Int depth_cap, OracleCache& cache);
MinRankResult min_cp_rank(const SymMat2& m, Int depth_cap = 12);

} // namespace cpfact
