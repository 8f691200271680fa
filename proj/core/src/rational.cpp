#include "cogme/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "cogme/errors.hpp"

namespace cogme {
namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned exponent) {
  cpp_int result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a number: '" + std::string(original) +
                                "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  cpp_int mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    mantissa = mantissa * 10 + (text[pos] - '0');
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      --scale;
      any_digit = true;
    }
  }
  if (!any_digit) return fail();
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    int exponent = 0;
    auto [end, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), exponent);
    if (ec != std::errc() || end == text.data() + pos) return fail();
    pos = static_cast<std::size_t>(end - text.data());
    scale += exponent;
  }
  if (pos != text.size()) return fail();
  Rational value = scale >= 0
                       ? Rational(mantissa * pow10(static_cast<unsigned>(scale)))
                       : Rational(mantissa, pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, original);
  const Rational numerator = parse_decimal(text.substr(0, slash), original);
  const Rational denominator = parse_decimal(text.substr(slash + 1), original);
  if (denominator == 0) {
    throw std::invalid_argument("zero denominator: '" + std::string(original) +
                                "'");
  }
  return numerator / denominator;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite number");
  }
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::invalid_argument("unprintable number");
  return parse_rational(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

std::string to_fixed(const Rational& value, int digits) {
  const cpp_int scale = pow10(static_cast<unsigned>(digits));
  cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  const cpp_int scaled = (2 * num * scale + den) / (2 * den);
  std::string text = scaled.str();
  if (digits > 0) {
    if (text.size() <= static_cast<std::size_t>(digits)) {
      text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
    }
    text.insert(text.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) text.insert(0, "-");
  return text;
}

std::string to_exact(const Rational& value) {
  const cpp_int den = boost::multiprecision::denominator(value);
  std::string text = boost::multiprecision::numerator(value).str();
  if (den != 1) text += "/" + den.str();
  return text;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace cogme
