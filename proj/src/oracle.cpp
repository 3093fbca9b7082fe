#include "cpfact/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace cpfact {

const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Exact: return "exact";
        case SearchStatus::DepthCapped: return "depth-capped";
    }
    return "unknown";
}

std::size_t OracleCache::KeyHash::operator()(const Key& k) const noexcept {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(static_cast<std::uint64_t>(k.a));
    h = mix(h ^ static_cast<std::uint64_t>(k.b));
    h = mix(h ^ static_cast<std::uint64_t>(k.c));
    h = mix(h ^ static_cast<std::uint64_t>(k.depth));
    return static_cast<std::size_t>(h);
}

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

u128 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Valid t-interval for a fixed k (0 <= k <= isqrt(a)): all t with t^2 <= c,
// k*t <= b and det2(m - (k,t)(k,t)^T) >= 0. Requires det2(m) >= 0.
std::optional<std::pair<Int, Int>> t_range(const SymMat2& m, Int k) {
    if (m.a == 0) {
        // only k == 0 reaches here; det of the remainder is -b^2
        if (m.b != 0) return std::nullopt;
        return std::make_pair(Int{0}, isqrt(m.c));
    }
    if (k == 0) {
        // a*(c - t^2) >= b^2  <=>  t^2 <= (a*c - b^2) / a
        return std::make_pair(Int{0}, isqrt(det2(m) / m.a));
    }
    const Int kk = k * k;
    if (kk == m.a) {
        // det of the remainder is -(b - k*t)^2: t must hit b/k exactly
        if (m.b % k != 0) return std::nullopt;
        const Int t = m.b / k;
        if (static_cast<u128>(t) * static_cast<u128>(t) > static_cast<u128>(m.c))
            return std::nullopt;
        return std::make_pair(t, t);
    }
    // a*t^2 - 2*b*k*t + (b^2 - (a - k^2)*c) <= 0, a quadratic in t with
    // discriminant (a - k^2) * (a*c - b^2) >= 0.
    const u128 disc = static_cast<u128>(m.a - kk) * static_cast<u128>(det2(m));
    const i128 s = static_cast<i128>(isqrt_u128(disc));
    const i128 bk = static_cast<i128>(m.b) * static_cast<i128>(k);
    i128 thi = (bk + s) / m.a;
    thi = std::min<i128>(thi, isqrt(m.c));
    thi = std::min<i128>(thi, m.b / k);
    i128 tlo = 0;
    if (bk > s) tlo = (bk - s + m.a - 1) / m.a;
    if (tlo > thi) return std::nullopt;
    return std::make_pair(static_cast<Int>(tlo), static_cast<Int>(thi));
}

// Lexicographically greatest valid reduction, ignoring any bound.
std::optional<RankOneTerm> greatest_reduction(const SymMat2& m) {
    for (Int k = isqrt(m.a); k >= 0; --k) {
        const auto range = t_range(m, k);
        if (!range) continue;
        const RankOneTerm cand{k, range->second};
        if (cand.is_zero()) return std::nullopt;
        return cand;
    }
    return std::nullopt;
}

struct SearchCtx {
    LruCache<OracleCache::Key, OracleCache::Entry, OracleCache::KeyHash>& memo;
    std::uint64_t nodes{0};
};

constexpr RankOneTerm kUnbounded{std::numeric_limits<Int>::max(),
                                 std::numeric_limits<Int>::max()};

// First move of a factorization of m into exactly d nonzero terms, each
// lexicographically <= bound, or nullopt. Memo entries are absolute facts:
// feasible entries are always safe to reuse (their witness is a genuine
// factorization even if it violates the current bound, which only changes
// the ordering of the overall multiset), and infeasible entries are stored
// only when the search at that state was effectively unbounded.
std::optional<RankOneTerm> search(const SymMat2& m, Int d, RankOneTerm bound, SearchCtx& ctx) {
    ++ctx.nodes;
    if (d == 0) {
        if (m.is_zero()) return RankOneTerm{0, 0}; // no move; marks success
        return std::nullopt;
    }
    if (m.is_zero()) return std::nullopt; // terms are nonzero, no padding

    const OracleCache::Key key{m.a, m.b, m.c, d};
    if (const OracleCache::Entry* hit = ctx.memo.find(key))
        return hit->feasible ? std::optional<RankOneTerm>(hit->move) : std::nullopt;

    const Int ka = isqrt(m.a);
    const Int tc = isqrt(m.c);
    const Int kcap = std::min(ka, bound.k);
    const Int tcap = bound.k == 0 ? std::min(tc, bound.t) : tc;
    // Coverage bounds: every remaining term has k <= kcap and t <= tcap.
    const u128 depth = static_cast<u128>(d);
    if (static_cast<u128>(m.a) > depth * static_cast<u128>(kcap) * static_cast<u128>(kcap) ||
        static_cast<u128>(m.c) > depth * static_cast<u128>(tcap) * static_cast<u128>(tcap) ||
        static_cast<u128>(m.b) > depth * static_cast<u128>(kcap) * static_cast<u128>(tcap))
        return std::nullopt; // bound-dependent: not memoized

    const auto first = greatest_reduction(m);
    if (!first) {
        ctx.memo.insert(key, OracleCache::Entry{false, {}});
        return std::nullopt;
    }
    const bool unrestricted = !(bound < *first);

    if (d == 1) {
        // m itself must be a rank-one term.
        std::optional<RankOneTerm> res;
        if (ka * ka == m.a && tc * tc == m.c && checked_mul(ka, tc) == m.b) {
            const RankOneTerm whole{ka, tc};
            if (!(bound < whole)) res = whole;
            else return std::nullopt; // feasible beyond bound: do not memoize
        }
        if (res) ctx.memo.insert(key, OracleCache::Entry{true, *res});
        else if (unrestricted) ctx.memo.insert(key, OracleCache::Entry{false, {}});
        return res;
    }

    for (Int k = kcap; k >= 0; --k) {
        const auto range = t_range(m, k);
        if (!range) continue;
        Int thi = range->second;
        if (k == bound.k) thi = std::min(thi, bound.t);
        for (Int t = thi; t >= range->first; --t) {
            if (k == 0 && t == 0) continue;
            const RankOneTerm cand{k, t};
            const SymMat2 rest{m.a - k * k, m.b - k * t, m.c - t * t};
            if (search(rest, d - 1, cand, ctx)) {
                ctx.memo.insert(key, OracleCache::Entry{true, cand});
                return cand;
            }
        }
    }
    if (unrestricted) ctx.memo.insert(key, OracleCache::Entry{false, {}});
    return std::nullopt;
}

} // namespace

std::vector<RankOneTerm> enumerate_reductions(const SymMat2& m) {
    if (!is_doubly_nonnegative(m))
        throw DomainError("enumerate_reductions: matrix is not doubly nonnegative");
    std::vector<RankOneTerm> out;
    for (Int k = isqrt(m.a); k >= 0; --k) {
        const auto range = t_range(m, k);
        if (!range) continue;
        for (Int t = range->second; t >= range->first; --t) {
            if (k == 0 && t == 0) continue;
            out.push_back(RankOneTerm{k, t});
        }
    }
    return out;
}

MinRankResult min_cp_rank(const SymMat2& m, Int depth_cap, OracleCache& cache) {
    if (!is_doubly_nonnegative(m))
        throw DomainError("min_cp_rank: matrix is not doubly nonnegative");
    if (depth_cap < 1) throw DomainError("min_cp_rank: depth cap must be positive");

    SearchCtx ctx{cache.table()};
    for (Int d = 0; d <= depth_cap; ++d) {
        const auto move = search(m, d, kUnbounded, ctx);
        if (!move) continue;

        MinRankResult res;
        res.min_terms = d;
        res.status = SearchStatus::Exact;
        res.witness.source = m;
        res.witness.method = Method::Oracle;
        SymMat2 rest = m;
        RankOneTerm next = *move;
        for (Int left = d; left > 0; --left) {
            res.witness.terms.push_back(next);
            rest = subtract_term(rest, next);
            if (left == 1) break;
            const auto follow = search(rest, left - 1, kUnbounded, ctx);
            if (!follow) throw std::logic_error("min_cp_rank: witness reconstruction failed");
            next = *follow;
        }
        if (!rest.is_zero())
            throw std::logic_error("min_cp_rank: witness does not sum to the input");
        res.nodes_explored = ctx.nodes;
        return res;
    }

    MinRankResult res;
    res.min_terms = 0;
    res.status = SearchStatus::DepthCapped;
    res.witness.source = m;
    res.witness.method = Method::Oracle;
    res.nodes_explored = ctx.nodes;
    return res;
}

MinRankResult min_cp_rank(const SymMat2& m, Int depth_cap) {
    OracleCache cache;
    return min_cp_rank(m, depth_cap, cache);
}

} // namespace cpfact
