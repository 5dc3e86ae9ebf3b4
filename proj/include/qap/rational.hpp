#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace qap {

// Exact arithmetic everywhere rank or validity claims are made.  GMP keeps
// rationals canonical: gcd(num, den) = 1 and den > 0.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// gmpxx has no long long constructor; LP64 long is wide enough here
inline Rational to_rational(long long v) { return Rational(static_cast<long>(v)); }

// "num" when the denominator is 1, otherwise "num/den".
std::string rational_to_string(const Rational& r);

// Accepts "num" and "num/den"; throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace qap
