#pragma once

#include <variant>
#include <vector>

#include "cpfact/matrix_core.hpp"

namespace cpfact {

// One diagonal entry lowered to the smallest value that keeps the
// determinant nonnegative; the excess leaves as axis-aligned four-square
// terms.
struct PeelEvent {
    SymMat2 input;       // matrix before this axis was peeled
    bool axis_c{false};  // which diagonal entry was lowered
    Int from{0}, to{0};
    FourSquare squares;  // decomposition of from - to
    std::vector<RankOneTerm> terms;
    SymMat2 remainder;
};

// Rank-one matrix split into up to four scaled copies of its base vector.
struct RankOneEvent {
    SymMat2 input;
    Int divisor{0}; // gcd of the entries; 0 for the pure-diagonal case
    FourSquare squares;
    std::vector<RankOneTerm> terms;
};

enum class ReductionKind { Recurse, RankOneEscape, UnitDiagonal };

// One level of the reduction recursion. After orienting (swap so a <= c)
// and peeling both diagonal entries maximally, the normalized matrix
// [[a, b], [b, c]] either resolves directly (zero determinant, or a == 1)
// or satisfies 2 <= a <= b <= c and recurses on
//   b = q*a + r,  r^2 = alpha*a + gamma,  child = [[a, r], [r, alpha + 1]],
// lifting the child's term (k, t') to (k, q*k + t').
struct ReductionStep {
    int level{0};       // 0 = outermost call
    SymMat2 input;      // matrix handed to this level
    bool swapped{false};
    Int peel_a{0}, peel_c{0}; // diagonal reductions, in input coordinates
    SymMat2 normalized;       // after swap and peel
    ReductionKind kind{ReductionKind::Recurse};
    Int q{0}, r{0}, alpha{0}, gamma{0};
    SymMat2 child;
    RankOneTerm child_term; // term returned by the recursive call
    RankOneTerm lifted;     // term for `normalized`
    RankOneTerm returned;   // `lifted` mapped back to input coordinates
};

using TraceEvent = std::variant<PeelEvent, ReductionStep, RankOneEvent>;

struct TraceLog {
    std::vector<TraceEvent> events;

    // Terms emitted by a factor() run, in emission order: peel terms,
    // the returned term of each level-0 reduction, rank-one terms.
    std::vector<RankOneTerm> replay_terms() const;
};

struct PeelResult {
    std::vector<RankOneTerm> peeled_terms; // axis-aligned (x,0) / (0,y)
    SymMat2 remainder;
};

// Lowers each diagonal entry of a doubly nonnegative matrix to
// ceil(b^2 / other), larger entry first (ties resolved toward c), emitting
// every excess as four-square terms. With b == 0 both entries go to zero.
PeelResult peel_diagonal(const SymMat2& m, TraceLog* trace = nullptr);

// Factorization of a doubly nonnegative matrix with zero determinant.
// At most four terms: with b != 0 the entries are d*(a1^2, a1*c1, c1^2)
// for d = gcd3(a, b, c), and the terms are (di*a1, di*c1) over the nonzero
// components of four_square(d).
Factorization factor_rank_one(const SymMat2& m, TraceLog* trace = nullptr);

// A rank-one term R != (0,0) with m - R doubly nonnegative, for any nonzero
// doubly nonnegative m. Deterministic; the trace records every recursion
// level.
RankOneTerm find_reduction(const SymMat2& m, TraceLog* trace = nullptr);

// Full integer cp-factorization of a doubly nonnegative matrix: peel,
// then repeatedly subtract reductions until the remainder is rank one or
// zero. The output always satisfies verify_factorization.
Factorization factor(const SymMat2& m, TraceLog* trace = nullptr);

// Human-readable, line-oriented rendering of a trace. Not a stable format.
void render_trace(const TraceLog& trace, std::ostream& os);

} // namespace cpfact
