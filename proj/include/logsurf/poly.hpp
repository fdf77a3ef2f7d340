#pragma once

// Sparse polynomials with exact rational coefficients, in up to four
// variables. Degrees stay small (plane curves of degree <= ~15, Cox forms
// on ruled surfaces), so a term map beats anything clever.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "logsurf/rational.hpp"

namespace logsurf {

using Expo = std::vector<int>;  // one exponent per variable, all >= 0

class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : n_(nvars) {}

  static Poly constant(int nvars, const Rat& c);
  static Poly variable(int nvars, int i);
  static Poly monomial(int nvars, const Expo& e, const Rat& c);

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Expo, Rat>& terms() const { return terms_; }

  void add_term(const Expo& e, const Rat& c);
  Rat coeff(const Expo& e) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rat& c) const;

  Rat eval(const std::vector<Rat>& point) const;
  Poly derivative(int var) const;

  // Simultaneous substitution: variable i is replaced by images[i]. All
  // images share a variable count, which becomes the result's.
  Poly subst(const std::vector<Poly>& images) const;

  // var -> var + by, other variables untouched
  Poly translated(int var, const Rat& by) const;

  int total_degree() const;   // -1 when zero
  int degree_in(int var) const;

  // Smallest total degree of a term; the multiplicity at the origin for a
  // local equation. -1 when zero.
  int order_at_origin() const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  int n_ = 0;
  std::map<Expo, Rat> terms_;
};

Poly poly_pow(const Poly& p, int e);

// Exact multivariate division p / q (lex leading-term elimination); throws
// std::domain_error when q does not divide p.
Poly poly_div_exact(const Poly& p, const Poly& q);

// Exact division by var^m; throws std::domain_error when any term has a
// smaller exponent (the divisions in strict transforms must come out even).
Poly poly_div_var_pow(const Poly& p, int var, int m);

// Monic product of (x - r) over the given roots, as a 1-variable Poly.
Poly uni_from_roots(const std::vector<Rat>& roots);

bool is_homogeneous(const Poly& p, int deg);

// ------------------------------------------------------------- local rings
//
// Bivariate Laurent expansions: the working object while walking a chain
// of infinitely near points. Exponents may go negative after the formal
// division by the exceptional variable; for any curve actually satisfying
// the multiplicity requirements upstream, those terms cancel, and the
// condition rows we emit for them make that cancellation part of the
// linear system rather than an assumption.

struct LaurentBi {
  std::map<std::pair<int, int>, Rat> t;  // (x-exponent, y-exponent) -> coeff

  void add(int a, int b, const Rat& c);
  bool is_zero() const { return t.empty(); }
};

LaurentBi lb_from_poly(const Poly& f);  // nvars must be 2

// Blow up the origin and move to the chart containing the child point.
//
// main chart, child at direction (1 : v0):
//   (x, y) -> (u, u (v + v0)),  then shift x-exponents down by m
// vertical chart, child at direction (0 : 1):
//   (x, y) -> (u v, u),         then shift x-exponents down by m
//
// In both results the new exceptional curve is {u = 0} and the child sits
// at the origin. m is the multiplicity being divided out.
LaurentBi lb_blowup_main(const LaurentBi& f, const Rat& v0, int m);
LaurentBi lb_blowup_vertical(const LaurentBi& f, int m);

// Split at total degree m: take = terms with a+b < m (the ones a
// multiplicity-m requirement turns into condition rows), drop = the rest.
LaurentBi lb_take_below(const LaurentBi& f, int m);
LaurentBi lb_drop_below(const LaurentBi& f, int m);

bool operator==(const Poly& a, const Poly& b);
inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

}  // namespace logsurf
