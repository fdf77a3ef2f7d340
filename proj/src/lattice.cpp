#include "logsurf/lattice.hpp"

#include <stdexcept>

namespace logsurf {

bool DivisorClass::is_zero() const {
  for (auto& x : c)
    if (sgn(x) != 0) return false;
  return true;
}

bool DivisorClass::is_integral() const {
  for (auto& x : c)
    if (x.get_den() != 1) return false;
  return true;
}

namespace {
void check_same_rank(const DivisorClass& a, const DivisorClass& b) {
  if (a.c.size() != b.c.size()) throw std::invalid_argument("class rank mismatch");
}
}  // namespace

DivisorClass dc_add(const DivisorClass& a, const DivisorClass& b) {
  check_same_rank(a, b);
  DivisorClass r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

DivisorClass dc_sub(const DivisorClass& a, const DivisorClass& b) {
  check_same_rank(a, b);
  DivisorClass r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

DivisorClass dc_scale(const Rat& s, const DivisorClass& a) {
  DivisorClass r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

PicLattice::PicLattice(MotherKind kind, int n, int k) : kind_(kind), n_(n), k_(k) {
  base_rank_ = kind == MotherKind::Plane ? 1 : 2;
  if (k < 0) throw std::invalid_argument("negative point count");
  if (kind == MotherKind::Hirzebruch && n < 0)
    throw std::invalid_argument("negative ruling degree");
}

PicLattice PicLattice::plane(int points) { return PicLattice(MotherKind::Plane, 0, points); }

PicLattice PicLattice::hirzebruch(int n, int points) {
  return PicLattice(MotherKind::Hirzebruch, n, points);
}

int PicLattice::hirzebruch_n() const {
  if (kind_ != MotherKind::Hirzebruch) throw std::logic_error("not a ruled model");
  return n_;
}

DivisorClass PicLattice::zero() const { return DivisorClass{std::vector<Rat>(rank(), Rat(0))}; }

DivisorClass PicLattice::H() const {
  if (kind_ != MotherKind::Plane) throw std::logic_error("H lives on the plane model");
  DivisorClass d = zero();
  d.c[0] = 1;
  return d;
}

DivisorClass PicLattice::E() const {
  if (kind_ != MotherKind::Hirzebruch) throw std::logic_error("E lives on a ruled model");
  DivisorClass d = zero();
  d.c[0] = 1;
  return d;
}

DivisorClass PicLattice::F() const {
  if (kind_ != MotherKind::Hirzebruch) throw std::logic_error("F lives on a ruled model");
  DivisorClass d = zero();
  d.c[1] = 1;
  return d;
}

DivisorClass PicLattice::e(int i) const {
  if (i < 0 || i >= k_) throw std::out_of_range("exceptional index");
  DivisorClass d = zero();
  d.c[base_rank_ + i] = 1;
  return d;
}

DivisorClass PicLattice::canonical() const {
  DivisorClass d = zero();
  if (kind_ == MotherKind::Plane) {
    d.c[0] = -3;
  } else {
    d.c[0] = -2;
    d.c[1] = -(n_ + 2);
  }
  for (int i = 0; i < k_; ++i) d.c[base_rank_ + i] = 1;
  return d;
}

DivisorClass PicLattice::from_mults(const std::vector<Rat>& mother_coeffs,
                                    const std::vector<Rat>& mults) const {
  if (static_cast<int>(mother_coeffs.size()) != base_rank_ ||
      static_cast<int>(mults.size()) != k_)
    throw std::invalid_argument("from_mults arity");
  DivisorClass d = zero();
  for (int i = 0; i < base_rank_; ++i) d.c[i] = mother_coeffs[i];
  for (int i = 0; i < k_; ++i) d.c[base_rank_ + i] = -mults[i];
  return d;
}

Rat PicLattice::mult_at(const DivisorClass& d, int i) const {
  if (i < 0 || i >= k_) throw std::out_of_range("exceptional index");
  return -d.c[base_rank_ + i];
}

Rat PicLattice::pair(const DivisorClass& a, const DivisorClass& b) const {
  if (static_cast<int>(a.c.size()) != rank() || static_cast<int>(b.c.size()) != rank())
    throw std::invalid_argument("class rank mismatch");
  Rat s(0);
  if (kind_ == MotherKind::Plane) {
    s = a.c[0] * b.c[0];
  } else {
    // (E,F) block: E^2 = -n, E.F = 1, F^2 = 0
    s = -Rat(n_) * a.c[0] * b.c[0] + a.c[0] * b.c[1] + a.c[1] * b.c[0];
  }
  for (int i = 0; i < k_; ++i) s -= a.c[base_rank_ + i] * b.c[base_rank_ + i];
  return s;
}

Rat PicLattice::genus(const DivisorClass& a) const {
  return Rat(1) + (self(a) + pair(a, canonical())) / 2;
}

MatQ PicLattice::gram() const {
  int r = rank();
  MatQ g(r, r);
  if (kind_ == MotherKind::Plane) {
    g.at(0, 0) = 1;
  } else {
    g.at(0, 0) = -n_;
    g.at(0, 1) = 1;
    g.at(1, 0) = 1;
  }
  for (int i = 0; i < k_; ++i) g.at(base_rank_ + i, base_rank_ + i) = -1;
  return g;
}

MatQ PicLattice::gram_of(const std::vector<DivisorClass>& v) const {
  int n = static_cast<int>(v.size());
  MatQ g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g.at(i, j) = pair(v[i], v[j]);
      g.at(j, i) = g.at(i, j);
    }
  return g;
}

}  // namespace logsurf
