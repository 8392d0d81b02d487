#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "ddx2/error.hpp"

namespace ddx2 {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

/// Parses "a/b", "a", or a plain decimal such as "0.001310" into an exact value.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error("cannot parse rational '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    try {
      BigInt num(std::string(text.substr(0, slash)));
      BigInt den(std::string(text.substr(slash + 1)));
      if (den == 0) throw fail();
      return Rational(num, den);
    } catch (const std::runtime_error&) {
      throw fail();
    }
  }
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  BigInt num = 0;
  BigInt den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch == '.') {
      if (seen_point) throw fail();
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      num = num * 10 + (ch - '0');
      if (seen_point) den *= 10;
      seen_digit = true;
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

/// Decimal rendering rounded half away from zero to `places` digits.
inline std::string to_decimal(const Rational& value, int places) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = (negative && scaled != 0 ? "-" : "") + whole.str();
  if (places > 0) {
    std::string digits = frac.str();
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - digits.size(), '0');
    out += digits;
  }
  return out;
}

inline std::string to_fraction(const Rational& value) {
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" + den.str();
}

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}

} // namespace ddx2
