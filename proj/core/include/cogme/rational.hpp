#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cogme {

// Arbitrary-precision exact fraction. All score arithmetic uses it so that
// aggregation is independent of summation order.
using Rational = boost::multiprecision::cpp_rational;

// Parses "1.5", "-2", "3e-2" or "8/3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Exact value of the shortest decimal that round-trips to `value`, so a JSON
// number written as 1.5 becomes 3/2 and 0.1 becomes 1/10.
Rational rational_from_double(double value);

// Decimal rendering with `digits` fractional digits, rounding half away from
// zero: 300/11 -> "27.2727".
std::string to_fixed(const Rational& value, int digits = 4);

// "300/11", or "3" when the denominator is 1.
std::string to_exact(const Rational& value);

double to_double(const Rational& value);

}  // namespace cogme
