#pragma once

// Dense exact linear algebra over Q plus mod-p ranks. Matrices here are
// small (intersection forms, condition systems); clarity over blocking.

#include <cstdint>
#include <optional>
#include <vector>

#include "logsurf/rational.hpp"

namespace logsurf {

class MatQ {
 public:
  MatQ() = default;
  MatQ(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  static MatQ identity(int n);
  bool is_symmetric() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Rat> a_;
};

int rank_exact(MatQ m);

// Solve A x = b for square nonsingular A; nullopt when singular.
std::optional<std::vector<Rat>> solve_exact(MatQ a, std::vector<Rat> b);

// Basis for the right null space of A (vectors of length cols).
std::vector<std::vector<Rat>> kernel_exact(MatQ a);

Rat det_exact(MatQ m);

struct Inertia {
  int pos = 0, neg = 0, zero = 0;
};

// Sylvester inertia of a symmetric rational matrix, exact. Uses symmetric
// elimination with 1x1 pivots and the hyperbolic 2x2 fallback when the
// remaining diagonal is all zero.
Inertia inertia_symmetric(MatQ m);

enum class Definiteness {
  NegativeDefinite,
  NegativeSemidefiniteNotDefinite,
  Indefinite,  // has a direction of positive self-pairing (covers positive cases)
};

Definiteness classify_negativity(const MatQ& sym);

// All principal minors of -M are >= 0 test (exponential; test-support for
// cross-checking the inertia classification on small matrices).
bool neg_semidefinite_by_minors(const MatQ& sym);
bool neg_definite_by_leading_minors(const MatQ& sym);

// ---------------------------------------------------------------- mod p

// Row-reduction rank of a matrix over F_p, entries reduced from Q.
// p must exceed any denominator's prime factors; throws if a denominator
// vanishes mod p.
int rank_mod_p(const MatQ& m, std::uint64_t p);

// Two fixed large primes used by default for modular rank cross-checks.
constexpr std::uint64_t kOraclePrimeA = 2305843009213693951ULL;  // 2^61 - 1
constexpr std::uint64_t kOraclePrimeB = 4611686018427387847ULL;  // below 2^62

std::uint64_t mod_reduce(const Rat& q, std::uint64_t p);

}  // namespace logsurf
