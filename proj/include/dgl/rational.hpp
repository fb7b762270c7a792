#pragma once

// Exact rational arithmetic for the IR. No floating point anywhere: the
// benchmark answers are engineered to be rational, and a single rounding
// step would break the equivalence check.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace dgl {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& r) { return numerator(r); }
inline Integer rat_den(const Rational& r) { return denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

// Parses a decimal literal ("42", "0.5", "12.25"). Returns nullopt on
// anything else; signs are handled by the term grammar, not here.
inline std::optional<Rational> parse_decimal(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::string digits;
  long frac_digits = -1;  // -1: no dot seen
  for (char c : text) {
    if (c == '.') {
      if (frac_digits >= 0) return std::nullopt;
      frac_digits = 0;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    digits += c;
    if (frac_digits >= 0) ++frac_digits;
  }
  if (digits.empty()) return std::nullopt;
  if (frac_digits == 0) return std::nullopt;  // "1." is not a literal
  Integer num(digits);
  Integer den = 1;
  for (long i = 0; i < (frac_digits < 0 ? 0 : frac_digits); ++i) den *= 10;
  return Rational(num, den);
}

// True when the rational has a finite decimal expansion (denominator 2^a*5^b).
inline bool has_finite_decimal(const Rational& r) {
  Integer d = rat_den(r);
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

// Shortest exact decimal form; only valid when has_finite_decimal(r).
inline std::string to_decimal_string(const Rational& r) {
  Integer num = rat_num(r);
  Integer den = rat_den(r);
  bool neg = num < 0;
  if (neg) num = -num;
  int tens = 0;
  Integer d = den;
  while (d % 2 == 0) { d /= 2; num *= 5; ++tens; }
  while (d % 5 == 0) { d /= 5; num *= 2; ++tens; }
  if (d != 1) throw std::invalid_argument("rational has no finite decimal form");
  std::string s = num.str();
  std::string out;
  if (tens == 0) {
    out = s;
  } else {
    while ((int)s.size() <= tens) s.insert(s.begin(), '0');
    out = s.substr(0, s.size() - tens) + "." + s.substr(s.size() - tens);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

}  // namespace dgl
