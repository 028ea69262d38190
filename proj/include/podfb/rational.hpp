#pragma once

#include <gmpxx.h>

#include <cstdio>
#include <string>

#include "podfb/money.hpp"

namespace podfb {

/// Exact arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;

inline Rational to_rational(Money m) {
  return Rational{mpz_class{static_cast<long>(m.micros())}};
}

inline Rational make_rational(long num, long den) {
  Rational r{num, den};
  r.canonicalize();
  return r;
}

/// Largest Money not exceeding r (r in micro-units).
inline Money floor_money(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Money{q.get_si()};
}

inline std::string to_exact_string(const Rational& r) { return r.get_str(); }

/// Approximate rendering of a micro-unit rational as currency units.
inline std::string to_units_string(const Rational& micros) {
  const double v = micros.get_d() / 1e6;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// Parses "a/b", an integer, or a plain decimal such as "0.01".
inline Rational parse_rational(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational r{text, 10};
    r.canonicalize();
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const std::size_t scale = text.size() - dot - 1;
  Rational r{mpz_class{digits, 10}, mpz_class{"1" + std::string(scale, '0'), 10}};
  r.canonicalize();
  return r;
}

} // namespace podfb
