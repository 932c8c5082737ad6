#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace hgm {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "12", "-3/7", "0.125", "1.5e-3" into an exact rational.
// Throws ParseError on malformed text or a zero denominator.
Rat parse_rational(std::string_view text);

// Canonical exact form: "num/den", or "num" when the denominator is 1.
std::string to_exact_string(const Rat& q);

// Scientific notation rounded to nearest (ties to even) with `digits`
// significant digits, e.g. "1.2500e-03".
std::string to_decimal(const Rat& q, int digits = 15);

Int factorial(long n);
Rat power(const Rat& base, long exponent);

// Arithmetic policy for the two scalar backends.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& q) { return q; }
  static bool is_zero(const Rat& v) { return sgn(v) == 0; }
  static double magnitude(const Rat& v) { return std::fabs(v.get_d()); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_rat(const Rat& q) { return q.get_d(); }
  static bool is_zero(double v) { return v == 0.0; }
  static double magnitude(double v) { return std::fabs(v); }
};

template <class T>
T from_rat(const Rat& q) {
  return ScalarTraits<T>::from_rat(q);
}

template <class T>
bool is_zero(const T& v) {
  return ScalarTraits<T>::is_zero(v);
}

template <class T>
T from_int(long v) {
  return T(v);
}

}  // namespace hgm
