#pragma once

// Exact rational scalars. Everything that ends up in a certificate goes
// through this type; no floating point anywhere downstream.

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace logsurf {

using Int = mpz_class;
using Rat = mpq_class;

// Parse "a/b" or "a" with optional sign. Rejects anything else (in
// particular decimal points and exponents: file formats carry rationals
// as strings, never floats).
Rat rat_parse(const std::string& s);

// Canonical form "a/b" with b > 0, gcd 1; plain "a" when b == 1.
std::string rat_str(const Rat& q);

Int rat_floor(const Rat& q);
Int rat_ceil(const Rat& q);

inline int sgn(const Rat& q) { return ::sgn(q); }

inline long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer too large for long");
  return z.get_si();
}

// Deterministic pseudo-random stream for "general position" draws.
// splitmix64; the seed is part of the public behaviour (replay stability).
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // small rational in [-bound, bound] with denominator 1..den
  Rat next_rat(long bound = 97, long den = 7);

 private:
  std::uint64_t state_;
};

}  // namespace logsurf
