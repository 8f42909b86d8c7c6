#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace palette_turan {

using Integer = boost::multiprecision::cpp_int;
// Always normalized (lowest terms, positive denominator) by the backend.
using Rational = boost::multiprecision::cpp_rational;

// Boost 1.74 rejects a negative denominator instead of normalizing it.
inline Rational make_rational(Integer num, Integer den) {
  if (den < 0) num = -num, den = -den;
  return Rational(num, den);
}

inline Rational make_rational(long long num, long long den = 1) { return make_rational(Integer(num), Integer(den)); }

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Truncated decimal expansion with `digits` fractional digits; exact, no floating point.
inline std::string to_decimal(const Rational& r, unsigned digits = 12) {
  Integer num = numerator(r);
  const Integer den = denominator(r);
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  const Integer scaled = (num * scale) / den;
  std::string body = scaled.str();
  if (digits == 0) return sign + body;
  if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
  body.insert(body.size() - digits, ".");
  return sign + body;
}

// Nearest-below rational with denominator 2^bits; used to turn a double into an exact probe point.
inline Rational from_double(double x, int bits = 40) {
  const double scaled = std::ldexp(x, bits);
  Integer num(static_cast<long long>(std::floor(scaled)));
  Integer den = Integer(1) << bits;
  return Rational(num, den);
}

inline Rational square(const Rational& r) { return r * r; }

}  // namespace palette_turan
