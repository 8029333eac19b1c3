#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace entrolab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "p/q", "-p/q" or an integer "p". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical text: "p" for integers, "p/q" otherwise (lowest terms, q > 0).
std::string to_string(const Rational& value);

// p/q in lowest terms; GMP comparisons require canonical values.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational abs_value(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace entrolab
