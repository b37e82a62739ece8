#pragma once

// Exact rational scalars.  All engine arithmetic is exact: coefficients are
// arbitrary-precision rationals and no operation ever rounds.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace equimod {

// mpq_class keeps gcd(|num|, den) = 1 and den > 0 after every arithmetic
// operation, which is exactly the invariant Rat requires.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
  if (d == 0) throw std::invalid_argument("rat: zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

// Parses "a" or "a/b" with optional sign.  Throws on malformed input.
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
  Rat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
  if (r.get_den() == 0)
    throw std::invalid_argument("rat_parse: zero denominator '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace equimod
