#include <doctest.h>

#include <numeric>
#include <random>

#include "cpfact/factorizer.hpp"
#include "test_util.hpp"

using namespace cpfact;
using namespace cpfact::testutil;

namespace {

Int entry_sum(const SymMat2& m) { return m.a + m.b + m.c; }

// Walks a factor() trace: checks that the event chain reproduces the
// emitted terms, that every intermediate matrix stays doubly nonnegative,
// and that the recursion identities hold at every level.
void check_trace(const SymMat2& source, const Factorization& f, const TraceLog& trace) {
    CHECK(same_multiset(trace.replay_terms(), f.terms));

    SymMat2 w = source;
    for (const TraceEvent& ev : trace.events) {
        if (const auto* peel = std::get_if<PeelEvent>(&ev)) {
            CHECK(peel->input == w);
            CHECK(is_doubly_nonnegative(peel->remainder));
            SymMat2 back = peel->remainder;
            for (const RankOneTerm& t : peel->terms) {
                back.a += t.k * t.k;
                back.b += t.k * t.t;
                back.c += t.t * t.t;
            }
            CHECK(back == w);
            w = peel->remainder;
        } else if (const auto* step = std::get_if<ReductionStep>(&ev)) {
            if (step->level == 0) {
                CHECK(step->input == w);
                w = subtract_term(w, step->returned);
                CHECK(is_doubly_nonnegative(w));
            }
            CHECK(is_doubly_nonnegative(subtract_term(step->normalized, step->lifted)));
            CHECK(entry_sum(step->normalized) <= entry_sum(step->input));
            if (step->kind == ReductionKind::Recurse) {
                const SymMat2& n = step->normalized;
                CHECK(n.b == step->q * n.a + step->r);
                CHECK(0 <= step->r);
                CHECK(step->r < n.a);
                CHECK(step->r * step->r == step->alpha * n.a + step->gamma);
                CHECK(0 <= step->gamma);
                CHECK(step->gamma < n.a);
                CHECK(step->child == SymMat2{n.a, step->r, step->alpha + 1});
                CHECK(n.c == step->q * step->q * n.a + 2 * step->q * step->r +
                                 step->alpha + 1);
                CHECK(det2(step->child) == det2(n));
                CHECK(det2(subtract_term(n, step->lifted)) ==
                      det2(subtract_term(step->child, step->child_term)));
                CHECK(entry_sum(step->child) < entry_sum(n));
            }
        } else if (const auto* r1 = std::get_if<RankOneEvent>(&ev)) {
            CHECK(r1->input == w);
            SymMat2 sum{};
            for (const RankOneTerm& t : r1->terms) {
                sum.a += t.k * t.k;
                sum.b += t.k * t.t;
                sum.c += t.t * t.t;
            }
            CHECK(sum == w);
            w = SymMat2{};
        }
    }
    CHECK(w.is_zero());
}

} // namespace

TEST_CASE("peel_diagonal on the running example") {
    TraceLog trace;
    const PeelResult res = peel_diagonal(SymMat2{78, 200, 4000}, &trace);
    CHECK(res.remainder == SymMat2{78, 200, 513});
    CHECK(res.peeled_terms ==
          std::vector<RankOneTerm>{{0, 59}, {0, 2}, {0, 1}, {0, 1}});
    REQUIRE(trace.events.size() == 1);
    const auto& ev = std::get<PeelEvent>(trace.events[0]);
    CHECK(ev.axis_c);
    CHECK(ev.from == 4000);
    CHECK(ev.to == 513);
    CHECK(ev.squares == FourSquare{59, 2, 1, 1});
}

TEST_CASE("peel_diagonal processes the larger diagonal entry first") {
    const PeelResult res = peel_diagonal(SymMat2{15, 4, 2});
    CHECK(res.remainder == SymMat2{8, 4, 2});
    CHECK(res.peeled_terms == std::vector<RankOneTerm>{{2, 0}, {1, 0}, {1, 0}, {1, 0}});
}

TEST_CASE("peel_diagonal leaves tight matrices alone") {
    const PeelResult res = peel_diagonal(SymMat2{1, 1, 1});
    CHECK(res.remainder == SymMat2{1, 1, 1});
    CHECK(res.peeled_terms.empty());
}

TEST_CASE("peel_diagonal clears both axes when b is zero") {
    const PeelResult res = peel_diagonal(SymMat2{5, 0, 3});
    CHECK(res.remainder.is_zero());
    // a = 5 is larger, so the a-axis goes first
    CHECK(res.peeled_terms ==
          std::vector<RankOneTerm>{{2, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}});

    const PeelResult tie = peel_diagonal(SymMat2{2, 0, 2});
    CHECK(tie.peeled_terms ==
          std::vector<RankOneTerm>{{0, 1}, {0, 1}, {1, 0}, {1, 0}});
}

TEST_CASE("peel_diagonal rejects non-DNN input") {
    CHECK_THROWS_AS(peel_diagonal(SymMat2{1, 2, 1}), DomainError);
}

TEST_CASE("peel_diagonal maximality: no further unit decrement keeps det >= 0") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 3000; ++i) {
        const SymMat2 m = random_dnn(rng, 200);
        const PeelResult res = peel_diagonal(m);
        const SymMat2& r = res.remainder;
        CHECK(det2(r) >= 0);
        if (r.a > 0) CHECK(det2(SymMat2{r.a - 1, r.b, r.c}) < 0);
        if (r.c > 0) CHECK(det2(SymMat2{r.a, r.b, r.c - 1}) < 0);
    }
}

TEST_CASE("factor_rank_one pinned examples") {
    CHECK(factor_rank_one(SymMat2{8, 4, 2}).terms ==
          std::vector<RankOneTerm>{{2, 1}, {2, 1}});
    CHECK(factor_rank_one(SymMat2{28, 70, 175}).terms ==
          std::vector<RankOneTerm>{{4, 10}, {2, 5}, {2, 5}, {2, 5}});
    CHECK(factor_rank_one(SymMat2{0, 0, 0}).terms.empty());
    CHECK(factor_rank_one(SymMat2{9, 0, 0}).terms == std::vector<RankOneTerm>{{3, 0}});
    CHECK(factor_rank_one(SymMat2{0, 0, 7}).terms ==
          std::vector<RankOneTerm>{{0, 2}, {0, 1}, {0, 1}, {0, 1}});
    CHECK(factor_rank_one(SymMat2{1, 2, 4}).terms == std::vector<RankOneTerm>{{1, 2}});
}

TEST_CASE("factor_rank_one preconditions") {
    CHECK_THROWS_AS(factor_rank_one(SymMat2{2, 1, 1}), DomainError); // det = 1
    CHECK_THROWS_AS(factor_rank_one(SymMat2{1, 2, 1}), DomainError); // det < 0
}

TEST_CASE("factor_rank_one emits at most four reconstructing terms") {
    for (Int a = 0; a <= 60; ++a)
        for (Int c = a; c <= 60; ++c) {
            const Int b = isqrt(a * c);
            if (b * b != a * c) continue;
            const SymMat2 m{a, b, c};
            const Factorization f = factor_rank_one(m);
            CHECK(f.terms.size() <= 4);
            CHECK(verify_factorization(f));
            for (const RankOneTerm& t : f.terms) CHECK_FALSE(t.is_zero());
            if (b != 0) {
                // exactly one term per nonzero four-square component of the gcd
                const FourSquare fs = four_square(gcd3(a, b, c));
                std::size_t nonzero = 0;
                for (Int d : {fs.d1, fs.d2, fs.d3, fs.d4}) nonzero += d != 0;
                CHECK(f.terms.size() == nonzero);
            }
        }
}

TEST_CASE("find_reduction reproduces the example's reduction chain") {
    CHECK(find_reduction(SymMat2{78, 200, 513}) == RankOneTerm{5, 13});
    CHECK(find_reduction(SymMat2{78, 44, 25}) == RankOneTerm{5, 3});
    CHECK(find_reduction(SymMat2{15, 19, 25}) == RankOneTerm{2, 3});
    CHECK(find_reduction(SymMat2{15, 4, 2}) == RankOneTerm{2, 1});
    CHECK(find_reduction(SymMat2{1, 3, 10}) == RankOneTerm{1, 3});
}

TEST_CASE("find_reduction preconditions") {
    CHECK_THROWS_AS(find_reduction(SymMat2{0, 0, 0}), DomainError);
    CHECK_THROWS_AS(find_reduction(SymMat2{1, 2, 1}), DomainError);
}

TEST_CASE("find_reduction yields a valid reduction on random DNN matrices") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20000; ++i) {
        SymMat2 m = random_dnn(rng, 400);
        if (m.is_zero()) m.c = 1;
        const RankOneTerm r = find_reduction(m);
        CHECK_FALSE(r.is_zero());
        const auto rest = try_subtract_term(m, r);
        REQUIRE(rest.has_value());
        CHECK(is_doubly_nonnegative(*rest));
    }
}

TEST_CASE("find_reduction is transpose-covariant off the diagonal tie") {
    // a == c is its own transpose, so only a != c says anything
    std::mt19937_64 rng(19);
    for (int i = 0; i < 5000; ++i) {
        SymMat2 m = random_dnn(rng, 120);
        if (m.is_zero()) m.a = 1;
        if (m.a == m.c) continue;
        const RankOneTerm r = find_reduction(m);
        const RankOneTerm rt = find_reduction(SymMat2{m.c, m.b, m.a});
        CHECK(rt == RankOneTerm{r.t, r.k});
    }
}

TEST_CASE("factor reproduces the example's ten terms") {
    const Factorization f = factor(kExampleMatrix);
    CHECK(f.terms.size() == 10);
    CHECK(same_multiset(f.terms, example_ten_terms()));
    CHECK(verify_factorization(f));
}

TEST_CASE("factor handles the base cases") {
    CHECK(same_multiset(factor(SymMat2{1, 2, 5}).terms, {{1, 2}, {0, 1}}));
    CHECK(factor(SymMat2{0, 0, 0}).terms.empty());
    CHECK(same_multiset(factor(SymMat2{15, 4, 2}).terms,
                        {{2, 0}, {1, 0}, {1, 0}, {1, 0}, {2, 1}, {2, 1}}));
}

TEST_CASE("factor diagnostics name the violated condition") {
    CHECK_THROWS_WITH_AS(factor(SymMat2{1, 2, 1}),
                         "factor: matrix has a negative determinant", DomainError);
    CHECK_THROWS_WITH_AS(factor(SymMat2{-1, 0, 1}),
                         "factor: matrix has a negative entry", DomainError);
}

TEST_CASE("factor trace carries the example's narrative") {
    TraceLog trace;
    const Factorization f = factor(kExampleMatrix, &trace);
    check_trace(kExampleMatrix, f, trace);

    // named anchors: R1..R4 at A1..A4
    const std::vector<std::pair<SymMat2, RankOneTerm>> anchors = {
        {{78, 200, 513}, {5, 13}},
        {{78, 44, 25}, {5, 3}},
        {{15, 19, 25}, {2, 3}},
        {{15, 4, 2}, {2, 1}},
    };
    for (const auto& [matrix, term] : anchors) {
        bool seen = false;
        for (const TraceEvent& ev : trace.events) {
            const auto* step = std::get_if<ReductionStep>(&ev);
            if (step == nullptr) continue;
            if ((step->input == matrix && step->returned == term) ||
                (step->normalized == matrix && step->lifted == term))
                seen = true;
        }
        CHECK_MESSAGE(seen, "missing anchor at ", to_text(matrix));
    }
}

TEST_CASE("factor soundness on random and exhaustive inputs") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 3000; ++i) {
        const SymMat2 m = random_dnn(rng, 500);
        TraceLog trace;
        const Factorization f = factor(m, &trace);
        CHECK(verify_factorization(f));
        for (const RankOneTerm& t : f.terms) {
            CHECK_FALSE(t.is_zero());
            CHECK(t.k >= 0);
            CHECK(t.t >= 0);
        }
        check_trace(m, f, trace);
    }
    for (Int a = 0; a <= 12; ++a)
        for (Int c = a; c <= 12; ++c)
            for (Int b = 0; b <= isqrt(a * c); ++b) {
                const SymMat2 m{a, b, c};
                TraceLog trace;
                const Factorization f = factor(m, &trace);
                CHECK(verify_factorization(f));
                check_trace(m, f, trace);
            }
}

TEST_CASE("factor is transpose-covariant off the diagonal tie") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 2000; ++i) {
        const SymMat2 m = random_dnn(rng, 100);
        if (m.a == m.c) continue;
        auto terms = factor(m).terms;
        for (RankOneTerm& t : terms) std::swap(t.k, t.t);
        CHECK(same_multiset(terms, factor(SymMat2{m.c, m.b, m.a}).terms));
    }
}
