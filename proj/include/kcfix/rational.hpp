#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kcfix {

// Exact rational scalar used for every finite-space distance.
using Rational = mpq_class;

// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25".
// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational half(const Rational& value) {
  Rational out = value;
  out /= 2;
  return out;
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  Rational out = a - b;
  if (sgn(out) < 0) out = -out;
  return out;
}

}  // namespace kcfix
