#pragma once

// Picard lattices of the surfaces we track: the plane or a Hirzebruch
// surface, blown up in k points. Classes are kept in the total-transform
// basis, so the pairing is block diagonal and every computation is a few
// exact dot products.

#include <vector>

#include "logsurf/linalg.hpp"
#include "logsurf/rational.hpp"

namespace logsurf {

enum class MotherKind { Plane, Hirzebruch };

// Coefficients in the ambient model basis:
//   Plane:      [H, e_1, ..., e_k]
//   Hirzebruch: [E, F, e_1, ..., e_k]   (E the negative section, F a fiber)
// Rational entries so the same type carries barks and other fractional
// combinations; honest divisor classes are integral.
struct DivisorClass {
  std::vector<Rat> c;

  bool operator==(const DivisorClass& o) const { return c == o.c; }
  bool is_zero() const;
  bool is_integral() const;
};

DivisorClass dc_add(const DivisorClass& a, const DivisorClass& b);
DivisorClass dc_sub(const DivisorClass& a, const DivisorClass& b);
DivisorClass dc_scale(const Rat& s, const DivisorClass& a);

class PicLattice {
 public:
  static PicLattice plane(int points);
  static PicLattice hirzebruch(int n, int points);

  MotherKind mother() const { return kind_; }
  int hirzebruch_n() const;
  int points() const { return k_; }
  int rank() const { return base_rank_ + k_; }

  DivisorClass zero() const;
  DivisorClass H() const;               // Plane only
  DivisorClass E() const;               // Hirzebruch only
  DivisorClass F() const;               // Hirzebruch only
  DivisorClass e(int i) const;          // i-th exceptional class, 0-based
  DivisorClass canonical() const;

  // assemble a class from mother-part coefficients plus point multiplicities:
  // Plane: d H - sum m_i e_i; Hirzebruch: a E + b F - sum m_i e_i
  DivisorClass from_mults(const std::vector<Rat>& mother_coeffs,
                          const std::vector<Rat>& mults) const;
  Rat mult_at(const DivisorClass& d, int i) const;  // m_i = -coefficient of e_i

  Rat pair(const DivisorClass& a, const DivisorClass& b) const;
  Rat self(const DivisorClass& a) const { return pair(a, a); }

  // arithmetic genus by adjunction: 1 + (C^2 + C.K)/2
  Rat genus(const DivisorClass& a) const;

  MatQ gram() const;
  MatQ gram_of(const std::vector<DivisorClass>& v) const;
  Inertia signature() const { return inertia_symmetric(gram()); }

 private:
  PicLattice(MotherKind kind, int n, int k);
  MotherKind kind_;
  int n_ = 0;  // Hirzebruch degree
  int k_ = 0;
  int base_rank_ = 0;
};

}  // namespace logsurf
