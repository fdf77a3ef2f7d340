#include "logsurf/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace logsurf {

Poly Poly::constant(int nvars, const Rat& c) {
  Poly p(nvars);
  p.add_term(Expo(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  Poly p(nvars);
  Expo e(nvars, 0);
  e[i] = 1;
  p.add_term(e, Rat(1));
  return p;
}

Poly Poly::monomial(int nvars, const Expo& e, const Rat& c) {
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

void Poly::add_term(const Expo& e, const Rat& c) {
  if (static_cast<int>(e.size()) != n_)
    throw std::invalid_argument("exponent arity mismatch");
  if (sgn(c) == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Rat Poly::coeff(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r(*this);
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r(*this);
  for (auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("variable count mismatch");
  Poly r(n_);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      Expo e(n_);
      for (int i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Poly Poly::scaled(const Rat& c) const {
  Poly r(n_);
  if (sgn(c) == 0) return r;
  for (auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}

Rat Poly::eval(const std::vector<Rat>& point) const {
  if (static_cast<int>(point.size()) != n_)
    throw std::invalid_argument("point arity mismatch");
  Rat acc(0);
  for (auto& [e, c] : terms_) {
    Rat term = c;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    acc += term;
  }
  return acc;
}

Poly Poly::derivative(int var) const {
  Poly r(n_);
  for (auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Expo d(e);
    d[var] -= 1;
    r.add_term(d, c * Rat(e[var]));
  }
  return r;
}

Poly Poly::subst(const std::vector<Poly>& images) const {
  if (static_cast<int>(images.size()) != n_)
    throw std::invalid_argument("need one image per variable");
  int out_n = images.empty() ? 0 : images[0].nvars();
  for (auto& im : images)
    if (im.nvars() != out_n) throw std::invalid_argument("image arity mismatch");
  // cache powers of each image as they come up
  std::vector<std::vector<Poly>> pow_cache(n_);
  for (int i = 0; i < n_; ++i) pow_cache[i].push_back(Poly::constant(out_n, Rat(1)));
  auto power = [&](int var, int e) -> const Poly& {
    auto& cache = pow_cache[var];
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[var]);
    return cache[e];
  };
  Poly r(out_n);
  for (auto& [e, c] : terms_) {
    Poly term = Poly::constant(out_n, c);
    for (int i = 0; i < n_; ++i)
      if (e[i] > 0) term = term * power(i, e[i]);
    r = r + term;
  }
  return r;
}

Poly Poly::translated(int var, const Rat& by) const {
  if (sgn(by) == 0) return *this;
  std::vector<Poly> images;
  for (int i = 0; i < n_; ++i) {
    Poly im = Poly::variable(n_, i);
    if (i == var) im = im + Poly::constant(n_, by);
    images.push_back(im);
  }
  return subst(images);
}

int Poly::total_degree() const {
  int d = -1;
  for (auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    if (s > d) d = s;
  }
  return d;
}

int Poly::degree_in(int var) const {
  int d = -1;
  for (auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int Poly::order_at_origin() const {
  if (terms_.empty()) return -1;
  int best = -1;
  for (auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    if (best < 0 || s < best) best = s;
  }
  return best;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      os << "*" << names[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

Poly poly_pow(const Poly& p, int e) {
  if (e < 0) throw std::invalid_argument("negative power");
  Poly r = Poly::constant(p.nvars(), Rat(1));
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

Poly poly_div_exact(const Poly& p, const Poly& q) {
  if (q.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (p.nvars() != q.nvars()) throw std::invalid_argument("variable count mismatch");
  Poly rem = p;
  Poly quot(p.nvars());
  const auto& qlead = *q.terms().rbegin();  // lex-largest term of q
  while (!rem.is_zero()) {
    const auto& rlead = *rem.terms().rbegin();
    Expo d(rlead.first);
    for (size_t i = 0; i < d.size(); ++i) {
      d[i] -= qlead.first[i];
      if (d[i] < 0) throw std::domain_error("polynomial division not exact");
    }
    Poly mono = Poly::monomial(p.nvars(), d, rlead.second / qlead.second);
    quot = quot + mono;
    rem = rem - mono * q;
  }
  return quot;
}

Poly poly_div_var_pow(const Poly& p, int var, int m) {
  Poly r(p.nvars());
  for (auto& [e, c] : p.terms()) {
    if (e[var] < m) throw std::domain_error("division by variable power not exact");
    Expo d(e);
    d[var] -= m;
    r.add_term(d, c);
  }
  return r;
}

Poly uni_from_roots(const std::vector<Rat>& roots) {
  Poly r = Poly::constant(1, Rat(1));
  for (auto& root : roots) {
    Poly factor = Poly::variable(1, 0) - Poly::constant(1, root);
    r = r * factor;
  }
  return r;
}

bool is_homogeneous(const Poly& p, int deg) {
  for (auto& [e, c] : p.terms()) {
    int s = 0;
    for (int x : e) s += x;
    if (s != deg) return false;
  }
  return true;
}

// ------------------------------------------------------------- local rings

void LaurentBi::add(int a, int b, const Rat& c) {
  if (sgn(c) == 0) return;
  auto key = std::make_pair(a, b);
  auto it = t.find(key);
  if (it == t.end()) {
    t.emplace(key, c);
    return;
  }
  it->second += c;
  if (sgn(it->second) == 0) t.erase(it);
}

LaurentBi lb_from_poly(const Poly& f) {
  if (f.nvars() != 2) throw std::invalid_argument("need a bivariate polynomial");
  LaurentBi r;
  for (auto& [e, c] : f.terms()) r.add(e[0], e[1], c);
  return r;
}

LaurentBi lb_blowup_main(const LaurentBi& f, const Rat& v0, int m) {
  LaurentBi r;
  for (auto& [ab, c] : f.t) {
    auto [a, b] = ab;
    if (b < 0) throw std::domain_error("negative power of the direction variable");
    // y^b -> u^b (v + v0)^b, expanded binomially
    Rat binom(1);
    Rat v0pow(1);
    // walk k = b down to 0 so binomials update incrementally:
    //   coeff of v^k is C(b,k) v0^(b-k)
    for (int k = b; k >= 0; --k) {
      r.add(a + b - m, k, c * binom * v0pow);
      if (k > 0) {
        binom = binom * Rat(k) / Rat(b - k + 1);
        v0pow *= v0;
      }
    }
  }
  return r;
}

LaurentBi lb_blowup_vertical(const LaurentBi& f, int m) {
  LaurentBi r;
  // x^a y^b -> (u v)^a u^b = u^(a+b) v^a
  for (auto& [ab, c] : f.t) r.add(ab.first + ab.second - m, ab.first, c);
  return r;
}

LaurentBi lb_take_below(const LaurentBi& f, int m) {
  LaurentBi r;
  for (auto& [ab, c] : f.t)
    if (ab.first + ab.second < m) r.add(ab.first, ab.second, c);
  return r;
}

LaurentBi lb_drop_below(const LaurentBi& f, int m) {
  LaurentBi r;
  for (auto& [ab, c] : f.t)
    if (ab.first + ab.second >= m) r.add(ab.first, ab.second, c);
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.nvars() == b.nvars() && a.terms() == b.terms();
}

}  // namespace logsurf
