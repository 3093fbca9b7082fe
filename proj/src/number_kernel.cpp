#include "cpfact/number_kernel.hpp"

#include <cmath>
#include <numeric>

namespace cpfact {

namespace {

using u128 = unsigned __int128;

u128 sq(Int x) { return static_cast<u128>(x) * static_cast<u128>(x); }

} // namespace

Int isqrt(Int n) {
    if (n < 0) throw DomainError("isqrt: negative input");
    if (n == 0) return 0;
    // long double has a 64-bit mantissa on x86; the seed is off by at most 1.
    Int r = static_cast<Int>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && sq(r) > static_cast<u128>(n)) --r;
    while (sq(r + 1) <= static_cast<u128>(n)) ++r;
    return r;
}

Int gcd3(Int a, Int b, Int c) {
    if (a < 0 || b < 0 || c < 0) throw DomainError("gcd3: negative input");
    return std::gcd(a, std::gcd(b, c));
}

Int ceil_div(Int num, Int den) {
    if (den < 1) throw DomainError("ceil_div: divisor must be positive");
    if (num < 0) throw DomainError("ceil_div: negative numerator");
    return num / den + (num % den != 0 ? 1 : 0);
}

FourSquare four_square(Int n) {
    if (n < 0) throw DomainError("four_square: negative input");
    // When n == 0 (mod 8) every quadruple has even parts only (square
    // residues mod 8 are 0, 1, 4, and an odd part contributes 1), so the
    // lexicographically greatest quadruple is exactly twice the one for
    // n/4. Stripping these factors keeps the search shallow for inputs
    // like 7 * 4^k, whose representations all live at the bottom of the
    // d1 range.
    Int scale = 1;
    while (n >= 8 && n % 8 == 0) {
        n /= 4;
        scale *= 2;
    }
    for (Int d1 = isqrt(n); d1 >= 0; --d1) {
        const Int r1 = n - d1 * d1;
        // Three parts <= d1 cannot cover r1; smaller d1 only makes it worse.
        if (static_cast<u128>(r1) > 3 * sq(d1)) break;
        for (Int d2 = std::min(d1, isqrt(r1)); d2 >= 0; --d2) {
            const Int r2 = r1 - d2 * d2;
            if (static_cast<u128>(r2) > 2 * sq(d2)) break;
            for (Int d3 = std::min(d2, isqrt(r2)); d3 >= 0; --d3) {
                const Int r3 = r2 - d3 * d3;
                if (static_cast<u128>(r3) > sq(d3)) break;
                const Int d4 = isqrt(r3);
                if (d4 * d4 == r3)
                    return FourSquare{d1 * scale, d2 * scale, d3 * scale, d4 * scale};
            }
        }
    }
    // Lagrange's theorem guarantees a representation for every n >= 0.
    throw std::logic_error("four_square: search exhausted");
}

} // namespace cpfact
