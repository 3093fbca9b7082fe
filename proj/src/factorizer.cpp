#include "cpfact/factorizer.hpp"

#include <cassert>
#include <ostream>
#include <utility>

namespace cpfact {

namespace {

void append_axis_terms(std::vector<RankOneTerm>& out, const FourSquare& fs, bool axis_c) {
    for (Int d : {fs.d1, fs.d2, fs.d3, fs.d4}) {
        if (d == 0) continue;
        out.push_back(axis_c ? RankOneTerm{0, d} : RankOneTerm{d, 0});
    }
}

// Lowers one diagonal entry of `m` to the smallest value keeping the
// determinant nonnegative. Returns the peel amount; fills the event.
Int peel_axis(SymMat2& m, bool axis_c, std::vector<RankOneTerm>& terms, TraceLog* trace) {
    Int& x = axis_c ? m.c : m.a;
    const Int other = axis_c ? m.a : m.c;
    Int target = 0;
    if (m.b != 0) {
        // other >= 1 here: b >= 1 and other*x >= b^2 force it.
        target = ceil_div(checked_mul(m.b, m.b), other);
    }
    if (target >= x) return 0;
    PeelEvent ev;
    ev.input = m;
    ev.axis_c = axis_c;
    ev.from = x;
    ev.to = target;
    const Int delta = x - target;
    ev.squares = four_square(delta);
    append_axis_terms(ev.terms, ev.squares, axis_c);
    x = target;
    ev.remainder = m;
    terms.insert(terms.end(), ev.terms.begin(), ev.terms.end());
    if (trace) trace->events.push_back(std::move(ev));
    return delta;
}

RankOneTerm find_reduction_impl(const SymMat2& m, TraceLog* trace, int level);

} // namespace

PeelResult peel_diagonal(const SymMat2& m, TraceLog* trace) {
    if (!is_doubly_nonnegative(m))
        throw DomainError("peel_diagonal: matrix is not doubly nonnegative");
    PeelResult res;
    res.remainder = m;
    const bool a_first = m.a > m.c; // tie: process c first
    peel_axis(res.remainder, !a_first, res.peeled_terms, trace);
    peel_axis(res.remainder, a_first, res.peeled_terms, trace);
    return res;
}

Factorization factor_rank_one(const SymMat2& m, TraceLog* trace) {
    if (!is_doubly_nonnegative(m))
        throw DomainError("factor_rank_one: matrix is not doubly nonnegative");
    if (det2(m) != 0)
        throw DomainError("factor_rank_one: determinant is nonzero");
    Factorization f;
    f.source = m;
    f.method = Method::PaperAlgorithm;
    if (m.is_zero()) return f;

    RankOneEvent ev;
    ev.input = m;
    if (m.b == 0) {
        // a*c == b^2 == 0: at most one diagonal entry is nonzero.
        const bool axis_c = (m.a == 0);
        ev.divisor = 0;
        ev.squares = four_square(axis_c ? m.c : m.a);
        append_axis_terms(ev.terms, ev.squares, axis_c);
    } else {
        const Int d = gcd3(m.a, m.b, m.c);
        const Int a0 = m.a / d;
        const Int c0 = m.c / d;
        const Int a1 = isqrt(a0);
        const Int c1 = isqrt(c0);
        // a*c == b^2 with gcd(a0, c0) == 1 forces both quotients to be
        // perfect squares with b == d*a1*c1.
        if (a1 * a1 != a0 || c1 * c1 != c0 || checked_mul(d, checked_mul(a1, c1)) != m.b)
            throw std::logic_error("factor_rank_one: rank-one structure violated");
        ev.divisor = d;
        ev.squares = four_square(d);
        for (Int di : {ev.squares.d1, ev.squares.d2, ev.squares.d3, ev.squares.d4}) {
            if (di == 0) continue;
            ev.terms.push_back(RankOneTerm{checked_mul(di, a1), checked_mul(di, c1)});
        }
    }
    f.terms = ev.terms;
    if (trace) trace->events.push_back(std::move(ev));
    return f;
}

namespace {

RankOneTerm find_reduction_impl(const SymMat2& m, TraceLog* trace, int level) {
    ReductionStep step;
    step.level = level;
    step.input = m;

    SymMat2 w = m;
    bool swapped = false;
    if (w.a > w.c) {
        std::swap(w.a, w.c);
        swapped = true;
    }
    // Maximal internal peel; nothing is emitted here. Any reduction of the
    // peeled matrix is a reduction of m, because m dominates it entrywise
    // on the diagonal.
    if (w.b == 0) {
        if (w.a >= 1) w.c = 0;
    } else {
        w.c = ceil_div(checked_mul(w.b, w.b), w.a);
        w.a = ceil_div(checked_mul(w.b, w.b), w.c);
    }
    if (w.a > w.c) {
        std::swap(w.a, w.c);
        swapped = !swapped;
    }
    step.swapped = swapped;
    {
        const SymMat2 in_input = swapped ? SymMat2{w.c, w.b, w.a} : w;
        step.peel_a = m.a - in_input.a;
        step.peel_c = m.c - in_input.c;
    }
    step.normalized = w;

    std::size_t slot = 0;
    if (trace) {
        slot = trace->events.size();
        trace->events.emplace_back(ReductionStep{}); // placeholder, keeps descent order
    }

    RankOneTerm result; // in normalized coordinates
    if (det2(w) == 0) {
        step.kind = ReductionKind::RankOneEscape;
        const Factorization f = factor_rank_one(w);
        result = f.terms.front();
    } else if (w.a == 1) {
        step.kind = ReductionKind::UnitDiagonal;
        result = RankOneTerm{1, w.b};
    } else {
        step.kind = ReductionKind::Recurse;
        // Maximal peel plus orientation leaves a sorted matrix here.
        if (!(2 <= w.a && w.a <= w.b && w.b <= w.c))
            throw std::logic_error("find_reduction: expected 2 <= a <= b <= c");
        step.q = w.b / w.a;
        step.r = w.b % w.a;
        const Int r2 = checked_mul(step.r, step.r);
        step.alpha = r2 / w.a;
        step.gamma = r2 % w.a;
        step.child = SymMat2{w.a, step.r, step.alpha + 1};
        // c = q^2*a + 2*q*r + alpha + 1, so the child has the same
        // determinant: a*(alpha+1) - r^2 == a*c - b^2.
        assert(w.c == step.q * step.q * w.a + 2 * step.q * step.r + step.alpha + 1);
        assert(det2(step.child) == det2(w));
        step.child_term = find_reduction_impl(step.child, trace, level + 1);
        result = RankOneTerm{step.child_term.k,
                             checked_add(checked_mul(step.q, step.child_term.k),
                                         step.child_term.t)};
        assert(det2(subtract_term(w, result)) ==
               det2(subtract_term(step.child, step.child_term)));
    }
    step.lifted = result;
    step.returned = swapped ? RankOneTerm{result.t, result.k} : result;
    if (trace) trace->events[slot] = step;
    return step.returned;
}

} // namespace

RankOneTerm find_reduction(const SymMat2& m, TraceLog* trace) {
    if (!is_doubly_nonnegative(m))
        throw DomainError("find_reduction: matrix is not doubly nonnegative");
    if (m.is_zero())
        throw DomainError("find_reduction: zero matrix has no reduction");
    return find_reduction_impl(m, trace, 0);
}

Factorization factor(const SymMat2& m, TraceLog* trace) {
    if (m.a < 0 || m.b < 0 || m.c < 0)
        throw DomainError("factor: matrix has a negative entry");
    if (det2(m) < 0)
        throw DomainError("factor: matrix has a negative determinant");

    Factorization f;
    f.source = m;
    f.method = Method::PaperAlgorithm;
    SymMat2 w = m;
    while (true) {
        PeelResult peeled = peel_diagonal(w, trace);
        f.terms.insert(f.terms.end(), peeled.peeled_terms.begin(), peeled.peeled_terms.end());
        w = peeled.remainder;
        if (w.is_zero()) break;
        if (det2(w) == 0) {
            const Factorization tail = factor_rank_one(w, trace);
            f.terms.insert(f.terms.end(), tail.terms.begin(), tail.terms.end());
            break;
        }
        const RankOneTerm red = find_reduction_impl(w, trace, 0);
        f.terms.push_back(red);
        w = subtract_term(w, red);
        if (!is_doubly_nonnegative(w))
            throw std::logic_error("factor: reduction left a non-DNN remainder");
    }
    return f;
}

std::vector<RankOneTerm> TraceLog::replay_terms() const {
    std::vector<RankOneTerm> out;
    for (const TraceEvent& ev : events) {
        if (const auto* peel = std::get_if<PeelEvent>(&ev)) {
            out.insert(out.end(), peel->terms.begin(), peel->terms.end());
        } else if (const auto* step = std::get_if<ReductionStep>(&ev)) {
            if (step->level == 0) out.push_back(step->returned);
        } else if (const auto* r1 = std::get_if<RankOneEvent>(&ev)) {
            out.insert(out.end(), r1->terms.begin(), r1->terms.end());
        }
    }
    return out;
}

namespace {

void render_squares(std::ostream& os, const FourSquare& fs) {
    bool first = true;
    for (Int d : {fs.d1, fs.d2, fs.d3, fs.d4}) {
        if (d == 0) continue;
        if (!first) os << " + ";
        os << d << "^2";
        first = false;
    }
    if (first) os << "0";
}

void render_terms(std::ostream& os, const std::vector<RankOneTerm>& terms) {
    for (const RankOneTerm& t : terms) os << ' ' << t;
}

} // namespace

void render_trace(const TraceLog& trace, std::ostream& os) {
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const TraceEvent& ev = trace.events[i];
        if (const auto* peel = std::get_if<PeelEvent>(&ev)) {
            os << "peel " << (peel->axis_c ? 'c' : 'a') << ": " << peel->from << " -> "
               << peel->to << ", delta " << (peel->from - peel->to) << " = ";
            render_squares(os, peel->squares);
            os << ", emit";
            render_terms(os, peel->terms);
            os << "\n    remainder " << peel->remainder << "\n";
        } else if (const auto* r1 = std::get_if<RankOneEvent>(&ev)) {
            os << "rank-one " << r1->input;
            if (r1->divisor > 0) {
                os << ", gcd " << r1->divisor << " = ";
                render_squares(os, r1->squares);
            }
            os << ", emit";
            render_terms(os, r1->terms);
            os << "\n";
        } else if (const auto* step = std::get_if<ReductionStep>(&ev)) {
            if (step->level == 0) os << "reduce " << step->input << "\n";
            os << "  level " << step->level << ": " << step->input;
            if (step->swapped || step->peel_a > 0 || step->peel_c > 0) {
                os << " [";
                if (step->swapped) os << "swap";
                if (step->peel_a > 0)
                    os << (step->swapped ? " " : "") << "peel a -" << step->peel_a;
                if (step->peel_c > 0)
                    os << (step->swapped || step->peel_a > 0 ? " " : "") << "peel c -"
                       << step->peel_c;
                os << "] -> " << step->normalized;
            }
            switch (step->kind) {
                case ReductionKind::Recurse:
                    os << " | q=" << step->q << " r=" << step->r << " alpha=" << step->alpha
                       << " gamma=" << step->gamma << " | child " << step->child << "\n";
                    break;
                case ReductionKind::RankOneEscape:
                    os << " | rank-one base, term " << step->lifted << "\n";
                    break;
                case ReductionKind::UnitDiagonal:
                    os << " | unit diagonal, term " << step->lifted << "\n";
                    break;
            }
            // Close the call once the outermost level is resolved: walk the
            // lift chain back up when the next event is not a deeper level.
            const bool last_of_call =
                i + 1 >= trace.events.size() ||
                !std::holds_alternative<ReductionStep>(trace.events[i + 1]) ||
                std::get<ReductionStep>(trace.events[i + 1]).level <= step->level;
            if (last_of_call) {
                for (std::size_t j = i + 1; j-- > 0;) {
                    const auto* up = std::get_if<ReductionStep>(&trace.events[j]);
                    if (up == nullptr) break;
                    os << "  lift: term " << up->returned << " for " << up->input << "\n";
                    if (up->level == 0) break;
                }
            }
        }
    }
}

} // namespace cpfact
