#include "cpfact/matrix_core.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace cpfact {

const char* to_string(Method m) {
    switch (m) {
        case Method::PaperAlgorithm: return "paper-algorithm";
        case Method::Oracle: return "oracle";
        case Method::External: return "external";
    }
    return "unknown";
}

Int det2(const SymMat2& m) {
    return checked_sub(checked_mul(m.a, m.c), checked_mul(m.b, m.b));
}

bool is_doubly_nonnegative(const SymMat2& m) {
    return m.a >= 0 && m.b >= 0 && m.c >= 0 && det2(m) >= 0;
}

std::optional<SymMat2> try_subtract_term(const SymMat2& m, const RankOneTerm& r) {
    const Int a = checked_sub(m.a, checked_mul(r.k, r.k));
    const Int b = checked_sub(m.b, checked_mul(r.k, r.t));
    const Int c = checked_sub(m.c, checked_mul(r.t, r.t));
    if (a < 0 || b < 0 || c < 0) return std::nullopt;
    return SymMat2{a, b, c};
}

SymMat2 subtract_term(const SymMat2& m, const RankOneTerm& r) {
    const Int a = checked_sub(m.a, checked_mul(r.k, r.k));
    const Int b = checked_sub(m.b, checked_mul(r.k, r.t));
    const Int c = checked_sub(m.c, checked_mul(r.t, r.t));
    if (a < 0) throw DomainError("subtract_term: entry (1,1) would be negative");
    if (b < 0) throw DomainError("subtract_term: off-diagonal entry would be negative");
    if (c < 0) throw DomainError("subtract_term: entry (2,2) would be negative");
    return SymMat2{a, b, c};
}

SymMat2 sum_terms(const std::vector<RankOneTerm>& terms) {
    SymMat2 s;
    for (const RankOneTerm& r : terms) {
        s.a = checked_add(s.a, checked_mul(r.k, r.k));
        s.b = checked_add(s.b, checked_mul(r.k, r.t));
        s.c = checked_add(s.c, checked_mul(r.t, r.t));
    }
    return s;
}

bool verify_factorization(const Factorization& f) {
    return sum_terms(f.terms) == f.source;
}

namespace {

// Splits on whitespace and parses each token as a base-10 integer.
// `what` names the expected quantity in diagnostics.
std::vector<Int> parse_ints(std::string_view text, std::size_t expected, const char* what) {
    std::vector<Int> out;
    std::size_t pos = 0;
    std::size_t token = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
        ++token;
        if (token > expected)
            throw ParseError(std::string(what) + ": expected " + std::to_string(expected) +
                                 " integers, got extra token",
                             token);
        Int value = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc::result_out_of_range)
            throw ParseError(std::string(what) + ": value out of 64-bit range", token);
        if (ec != std::errc() || ptr != last)
            throw ParseError(std::string(what) + ": not an integer: '" +
                                 std::string(first, last) + "'",
                             token);
        out.push_back(value);
        pos = end;
    }
    if (out.size() != expected)
        throw ParseError(std::string(what) + ": expected " + std::to_string(expected) +
                             " integers, got " + std::to_string(out.size()),
                         out.size() + 1);
    return out;
}

} // namespace

SymMat2 parse_matrix(std::string_view text) {
    const auto v = parse_ints(text, 3, "matrix");
    return SymMat2{v[0], v[1], v[2]};
}

std::string to_text(const SymMat2& m) {
    std::ostringstream os;
    os << m.a << ' ' << m.b << ' ' << m.c;
    return os.str();
}

std::vector<RankOneTerm> parse_terms(std::istream& in) {
    std::vector<RankOneTerm> terms;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<Int> v;
        try {
            v = parse_ints(line, 2, "term");
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")",
                             lineno);
        }
        if (v[0] < 0 || v[1] < 0)
            throw ParseError("term: negative component (line " + std::to_string(lineno) + ")",
                             lineno);
        terms.push_back(RankOneTerm{v[0], v[1]});
    }
    return terms;
}

std::string to_text(const RankOneTerm& r) {
    std::ostringstream os;
    os << '(' << r.k << ',' << r.t << ')';
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const SymMat2& m) {
    return os << m.a << ' ' << m.b << ' ' << m.c;
}

std::ostream& operator<<(std::ostream& os, const RankOneTerm& r) {
    return os << '(' << r.k << ',' << r.t << ')';
}

} // namespace cpfact
