#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace drbm {

// Always stored in lowest terms with a positive denominator. Compare with
// Rational{n}, never a bare integer: under C++20 Boost 1.74's mixed == recurses.
using Rational = boost::rational<std::int64_t>;

// Accepts "p/q" or "p". Anything else (decimals, exponents, junk) is rejected.
std::optional<Rational> parse_rational(std::string_view text);

std::string format_rational(const Rational& q);

// The only place exact parameters become doubles.
inline double to_float(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }
inline bool is_positive_integer(const Rational& q) { return is_integer(q) && q.numerator() > 0; }
inline bool is_negative_integer(const Rational& q) { return is_integer(q) && q.numerator() < 0; }
inline bool is_even_integer(const Rational& q) { return is_integer(q) && q.numerator() % 2 == 0; }
inline bool is_odd_integer(const Rational& q) { return is_integer(q) && q.numerator() % 2 != 0; }

}  // namespace drbm
