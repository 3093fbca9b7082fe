#pragma once

#include <cstdint>
#include <stdexcept>

#include "cpfact/errors.hpp"

namespace cpfact {

// Every quantity in this library is an exact integer. Arithmetic is done in
// 64 bits; any operation whose result does not fit reports
// std::overflow_error instead of wrapping.
using Int = std::int64_t;

inline Int checked_add(Int x, Int y) {
    Int r;
    if (__builtin_add_overflow(x, y, &r))
        throw std::overflow_error("integer overflow in addition");
    return r;
}

inline Int checked_sub(Int x, Int y) {
    Int r;
    if (__builtin_sub_overflow(x, y, &r))
        throw std::overflow_error("integer overflow in subtraction");
    return r;
}

inline Int checked_mul(Int x, Int y) {
    Int r;
    if (__builtin_mul_overflow(x, y, &r))
        throw std::overflow_error("integer overflow in multiplication");
    return r;
}

// floor of the real square root; requires n >= 0.
// The result r satisfies r*r <= n < (r+1)*(r+1).
Int isqrt(Int n);

// Greatest common divisor of three values. gcd3(0,0,0) == 0.
Int gcd3(Int a, Int b, Int c);

// Smallest q with q*den >= num. Requires num >= 0 and den >= 1.
Int ceil_div(Int num, Int den);

// n written as d1^2 + d2^2 + d3^2 + d4^2 with d1 >= d2 >= d3 >= d4 >= 0.
// Among all such quadruples, four_square returns the lexicographically
// greatest one, found by descending search with backtracking (pure greedy
// fails, e.g. for 23).
struct FourSquare {
    Int d1{0}, d2{0}, d3{0}, d4{0};

    bool operator==(const FourSquare&) const = default;
};

FourSquare four_square(Int n);

} // namespace cpfact
