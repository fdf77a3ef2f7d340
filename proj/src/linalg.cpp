#include "logsurf/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace logsurf {

MatQ MatQ::identity(int n) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool MatQ::is_symmetric() const {
  if (r_ != c_) return false;
  for (int i = 0; i < r_; ++i)
    for (int j = i + 1; j < c_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

int rank_exact(MatQ m) {
  int rank = 0;
  int rows = m.rows(), cols = m.cols();
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (sgn(m.at(i, col)) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = col; j < cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    Rat inv = Rat(1) / m.at(rank, col);
    for (int i = rank + 1; i < rows; ++i) {
      if (sgn(m.at(i, col)) == 0) continue;
      Rat f = m.at(i, col) * inv;
      m.at(i, col) = 0;
      for (int j = col + 1; j < cols; ++j) m.at(i, j) -= f * m.at(rank, j);
    }
    ++rank;
  }
  return rank;
}

std::optional<std::vector<Rat>> solve_exact(MatQ a, std::vector<Rat> b) {
  int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_exact: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (sgn(a.at(i, col)) != 0) { piv = i; break; }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      std::swap(b[piv], b[col]);
    }
    Rat inv = Rat(1) / a.at(col, col);
    for (int i = 0; i < n; ++i) {
      if (i == col || sgn(a.at(i, col)) == 0) continue;
      Rat f = a.at(i, col) * inv;
      for (int j = col; j < n; ++j) a.at(i, j) -= f * a.at(col, j);
      b[i] -= f * b[col];
    }
  }
  std::vector<Rat> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a.at(i, i);
  return x;
}

std::vector<std::vector<Rat>> kernel_exact(MatQ a) {
  int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (sgn(a.at(i, col)) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(a.at(piv, j), a.at(rank, j));
    Rat inv = Rat(1) / a.at(rank, col);
    for (int j = 0; j < cols; ++j) a.at(rank, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank || sgn(a.at(i, col)) == 0) continue;
      Rat f = a.at(i, col);
      for (int j = 0; j < cols; ++j) a.at(i, j) -= f * a.at(rank, j);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(cols);
    v[free] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -a.at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

Rat det_exact(MatQ m) {
  int n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("det_exact: not square");
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (sgn(m.at(i, col)) != 0) { piv = i; break; }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      det = -det;
    }
    det *= m.at(col, col);
    Rat inv = Rat(1) / m.at(col, col);
    for (int i = col + 1; i < n; ++i) {
      if (sgn(m.at(i, col)) == 0) continue;
      Rat f = m.at(i, col) * inv;
      for (int j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return det;
}

namespace {

// Symmetric congruence elimination step: kill row/col `k` using pivot at
// (k,k), acting on the trailing block only.
void sym_eliminate(MatQ& m, int k, const std::vector<int>& idx) {
  Rat inv = Rat(1) / m.at(idx[k], idx[k]);
  for (size_t i = k + 1; i < idx.size(); ++i) {
    Rat f = m.at(idx[i], idx[k]) * inv;
    if (sgn(f) == 0) continue;
    for (size_t j = i; j < idx.size(); ++j)
      m.at(idx[i], idx[j]) -= f * m.at(idx[k], idx[j]);
    for (size_t j = i; j < idx.size(); ++j)  // keep symmetry explicit
      m.at(idx[j], idx[i]) = m.at(idx[i], idx[j]);
  }
}

}  // namespace

Inertia inertia_symmetric(MatQ m) {
  if (!m.is_symmetric()) throw std::invalid_argument("inertia: matrix not symmetric");
  int n = m.rows();
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Inertia out;
  size_t k = 0;
  while (k < idx.size()) {
    // prefer a nonzero diagonal pivot in the remaining block
    int dpiv = -1;
    for (size_t i = k; i < idx.size(); ++i)
      if (sgn(m.at(idx[i], idx[i])) != 0) { dpiv = static_cast<int>(i); break; }
    if (dpiv >= 0) {
      std::swap(idx[k], idx[dpiv]);
      (sgn(m.at(idx[k], idx[k])) > 0 ? out.pos : out.neg) += 1;
      sym_eliminate(m, static_cast<int>(k), idx);
      ++k;
      continue;
    }
    // all-zero diagonal: either the block is zero, or pick a hyperbolic pair
    int oi = -1, oj = -1;
    for (size_t i = k; i < idx.size() && oi < 0; ++i)
      for (size_t j = i + 1; j < idx.size(); ++j)
        if (sgn(m.at(idx[i], idx[j])) != 0) { oi = static_cast<int>(i); oj = static_cast<int>(j); break; }
    if (oi < 0) {
      out.zero += static_cast<int>(idx.size() - k);
      break;
    }
    // rows i,j with m_ii = m_jj = 0, m_ij != 0: congruent to diag(+1,-1)
    // after the change of basis e_i +- e_j; eliminate both at once.
    std::swap(idx[k], idx[oi]);
    std::swap(idx[k + 1], idx[oj == static_cast<int>(k) ? oi : oj]);
    Rat b = m.at(idx[k], idx[k + 1]);
    out.pos += 1;
    out.neg += 1;
    // update trailing block: v -> v - (v.ei/b) ej - (v.ej/b) ei
    for (size_t i = k + 2; i < idx.size(); ++i) {
      Rat vi = m.at(idx[i], idx[k]);
      Rat vj = m.at(idx[i], idx[k + 1]);
      if (sgn(vi) == 0 && sgn(vj) == 0) continue;
      for (size_t j = i; j < idx.size(); ++j) {
        Rat wj_i = m.at(idx[j], idx[k]);
        Rat wj_j = m.at(idx[j], idx[k + 1]);
        m.at(idx[i], idx[j]) -= (vi * wj_j + vj * wj_i) / b;
        m.at(idx[j], idx[i]) = m.at(idx[i], idx[j]);
      }
    }
    k += 2;
  }
  return out;
}

Definiteness classify_negativity(const MatQ& sym) {
  Inertia in = inertia_symmetric(sym);
  if (in.pos > 0) return Definiteness::Indefinite;
  if (in.zero > 0) return Definiteness::NegativeSemidefiniteNotDefinite;
  return Definiteness::NegativeDefinite;
}

bool neg_semidefinite_by_minors(const MatQ& sym) {
  int n = sym.rows();
  if (n > 20) throw std::invalid_argument("minor enumeration too large");
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> sel;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(i);
    MatQ sub(static_cast<int>(sel.size()), static_cast<int>(sel.size()));
    for (size_t i = 0; i < sel.size(); ++i)
      for (size_t j = 0; j < sel.size(); ++j)
        sub.at(static_cast<int>(i), static_cast<int>(j)) = -sym.at(sel[i], sel[j]);
    if (sgn(det_exact(sub)) < 0) return false;
  }
  return true;
}

bool neg_definite_by_leading_minors(const MatQ& sym) {
  int n = sym.rows();
  int expect = -1;
  for (int k = 1; k <= n; ++k) {
    MatQ sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = sym.at(i, j);
    if (sgn(det_exact(sub)) != expect) return false;
    expect = -expect;
  }
  return true;
}

// ---------------------------------------------------------------- mod p

namespace {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

}  // namespace

std::uint64_t mod_reduce(const Rat& q, std::uint64_t p) {
  Int pm(static_cast<unsigned long>(p));
  Int num = q.get_num() % pm;
  if (num < 0) num += pm;
  Int den = q.get_den() % pm;
  if (den == 0) throw std::domain_error("denominator vanishes mod p");
  std::uint64_t n = num.get_ui();
  std::uint64_t d = den.get_ui();
  return mulmod(n, invmod(d, p), p);
}

int rank_mod_p(const MatQ& m, std::uint64_t p) {
  int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = mod_reduce(m.at(i, j), p);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (a[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    std::uint64_t inv = invmod(a[rank][col], p);
    for (int i = rank + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      std::uint64_t f = mulmod(a[i][col], inv, p);
      a[i][col] = 0;
      for (int j = col + 1; j < cols; ++j) {
        std::uint64_t sub = mulmod(f, a[rank][j], p);
        a[i][j] = a[i][j] >= sub ? a[i][j] - sub : a[i][j] + p - sub;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace logsurf
