#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpfact {

// Input outside an operation's domain: negative values where nonnegative
// integers are required, matrices that are not doubly nonnegative, zero
// divisors, and similar contract violations.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed textual input. position() is the 1-based index of the offending
// token (or line, for line-oriented formats).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace cpfact
