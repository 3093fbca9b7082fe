#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpfact/number_kernel.hpp"

namespace cpfact {

// Symmetric 2x2 integer matrix [[a, b], [b, c]], stored as the triple
// (a, b, c). Symmetry is structural. Entries are nonnegative everywhere
// except inside validation routines that immediately reject negatives.
struct SymMat2 {
    Int a{0}, b{0}, c{0};

    bool is_zero() const noexcept { return a == 0 && b == 0 && c == 0; }

    bool operator==(const SymMat2&) const = default;
};

// Nonnegative integer vector (k, t), standing for the rank-one matrix
// [[k^2, k*t], [k*t, t^2]]. Ordering is lexicographic on (k, t).
struct RankOneTerm {
    Int k{0}, t{0};

    bool is_zero() const noexcept { return k == 0 && t == 0; }

    auto operator<=>(const RankOneTerm&) const = default;
};

enum class Method { PaperAlgorithm, Oracle, External };

const char* to_string(Method m);

// A list of rank-one terms whose outer products sum to `source` exactly.
struct Factorization {
    SymMat2 source;
    std::vector<RankOneTerm> terms;
    Method method{Method::PaperAlgorithm};
};

// a*c - b^2. May be negative; overflow is reported.
Int det2(const SymMat2& m);

// Entrywise nonnegative and positive semidefinite. For a symmetric 2x2
// matrix with nonnegative entries this is exactly min(a,b,c) >= 0 and
// det2 >= 0.
bool is_doubly_nonnegative(const SymMat2& m);

// m minus the term's outer product, when all three resulting entries are
// nonnegative. The determinant of the result is deliberately not checked;
// callers that need it enforce it themselves.
std::optional<SymMat2> try_subtract_term(const SymMat2& m, const RankOneTerm& r);

// Throwing variant; the error names the violated entry.
SymMat2 subtract_term(const SymMat2& m, const RankOneTerm& r);

// Sum of the terms' outer products.
SymMat2 sum_terms(const std::vector<RankOneTerm>& terms);

// True iff the terms sum exactly to f.source.
bool verify_factorization(const Factorization& f);

// Canonical textual form: three whitespace-separated integers "a b c".
// Negative entries are accepted syntactically so that validation can
// reject them with a domain diagnostic rather than a parse error.
SymMat2 parse_matrix(std::string_view text);
std::string to_text(const SymMat2& m);

// Term list, one "k t" pair per line; blank lines are ignored.
std::vector<RankOneTerm> parse_terms(std::istream& in);
std::string to_text(const RankOneTerm& r);

std::ostream& operator<<(std::ostream& os, const SymMat2& m);
std::ostream& operator<<(std::ostream& os, const RankOneTerm& r);

} // namespace cpfact
