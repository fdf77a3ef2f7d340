#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logsurf/linalg.hpp"
#include "logsurf/rational.hpp"

using namespace logsurf;

namespace {

MatQ from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  int r = static_cast<int>(rows.size());
  int c = static_cast<int>(rows.begin()->size());
  MatQ m(r, c);
  int i = 0;
  for (auto& row : rows) {
    int j = 0;
    for (int v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

MatQ random_symmetric(DetRng& rng, int n, int bound = 4) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rat v = Rat(static_cast<long>(rng.next() % (2 * bound + 1)) - bound);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

}  // namespace

TEST_CASE("rank of hand picked matrices") {
  CHECK(rank_exact(MatQ::identity(4)) == 4);
  CHECK(rank_exact(from_rows({{1, 2}, {2, 4}})) == 1);
  CHECK(rank_exact(from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 2);
  CHECK(rank_exact(MatQ(3, 5)) == 0);
  CHECK(rank_exact(from_rows({{0, 1}, {1, 0}, {1, 1}})) == 2);
}

TEST_CASE("determinant") {
  CHECK(det_exact(MatQ::identity(3)) == 1);
  CHECK(det_exact(from_rows({{2, 1}, {1, 1}})) == 1);
  CHECK(det_exact(from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 0);
  // row swap flips the sign
  CHECK(det_exact(from_rows({{0, 1}, {1, 0}})) == -1);
}

TEST_CASE("solve recovers a known solution") {
  DetRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.next() % 6);
    MatQ a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) = rng.next_rat(9, 3);
    std::vector<Rat> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.next_rat(9, 3);
    std::vector<Rat> b(n, Rat(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b[i] += a.at(i, j) * x[j];
    auto sol = solve_exact(a, b);
    if (sgn(det_exact(a)) == 0) {
      CHECK(!sol.has_value());
      continue;
    }
    REQUIRE(sol.has_value());
    for (int i = 0; i < n; ++i) CHECK((*sol)[i] == x[i]);
  }
}

TEST_CASE("solve reports singular") {
  CHECK(!solve_exact(from_rows({{1, 2}, {2, 4}}), {Rat(1), Rat(1)}).has_value());
}

TEST_CASE("kernel vectors annihilate and count matches rank") {
  DetRng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + static_cast<int>(rng.next() % 5);
    int c = 1 + static_cast<int>(rng.next() % 6);
    MatQ a(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) a.at(i, j) = rng.next_rat(5, 2);
    auto ker = kernel_exact(a);
    CHECK(static_cast<int>(ker.size()) == c - rank_exact(a));
    for (auto& v : ker) {
      for (int i = 0; i < r; ++i) {
        Rat dot(0);
        for (int j = 0; j < c; ++j) dot += a.at(i, j) * v[j];
        CHECK(sgn(dot) == 0);
      }
    }
  }
}

TEST_CASE("inertia of diagonal matrices is read off the signs") {
  MatQ d = MatQ(4, 4);
  d.at(0, 0) = 3;
  d.at(1, 1) = -2;
  d.at(2, 2) = 0;
  d.at(3, 3) = Rat(-1) / 7;
  Inertia in = inertia_symmetric(d);
  CHECK(in.pos == 1);
  CHECK(in.neg == 2);
  CHECK(in.zero == 1);
}

TEST_CASE("hyperbolic plane needs the off-diagonal pivot path") {
  // [[0,1],[1,0]] has eigenvalues +-1
  Inertia in = inertia_symmetric(from_rows({{0, 1}, {1, 0}}));
  CHECK(in.pos == 1);
  CHECK(in.neg == 1);
  CHECK(in.zero == 0);

  // triangle adjacency matrix J - I: eigenvalues 2, -1, -1
  Inertia in3 = inertia_symmetric(from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(in3.pos == 1);
  CHECK(in3.neg == 2);
}

TEST_CASE("intersection form of a rational surface has signature (1,k)") {
  // diag(1, -1, ..., -1), the unimodular form these lattices carry
  for (int k = 1; k <= 9; ++k) {
    MatQ g(k + 1, k + 1);
    g.at(0, 0) = 1;
    for (int i = 1; i <= k; ++i) g.at(i, i) = -1;
    Inertia in = inertia_symmetric(g);
    CHECK(in.pos == 1);
    CHECK(in.neg == k);
    CHECK(in.zero == 0);
  }
}

TEST_CASE("negativity classifier agrees with minor enumeration") {
  DetRng rng(23);
  int seen_def = 0, seen_semi = 0, seen_indef = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 1 + static_cast<int>(rng.next() % 5);
    MatQ m = random_symmetric(rng, n, 3);
    // bias the pool toward semidefinite cases: -A^T A for random A
    if (trial % 3 == 0) {
      MatQ a = m;
      MatQ prod(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rat s(0);
          for (int k = 0; k < n; ++k) s += a.at(k, i) * a.at(k, j);
          prod.at(i, j) = -s;
        }
      m = prod;
    }
    Definiteness verdict = classify_negativity(m);
    bool semi = neg_semidefinite_by_minors(m);
    bool def = neg_definite_by_leading_minors(m);
    switch (verdict) {
      case Definiteness::NegativeDefinite:
        CHECK(def);
        CHECK(semi);
        ++seen_def;
        break;
      case Definiteness::NegativeSemidefiniteNotDefinite:
        CHECK(semi);
        CHECK(!def);
        ++seen_semi;
        break;
      case Definiteness::Indefinite:
        CHECK(!semi);
        ++seen_indef;
        break;
    }
  }
  // the pool must actually exercise all three branches
  CHECK(seen_def > 10);
  CHECK(seen_semi > 10);
  CHECK(seen_indef > 10);
}

TEST_CASE("chain intersection matrices are negative definite") {
  // tridiagonal with -2..-5 on the diagonal and 1 off it: curve chains
  DetRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.next() % 7);
    MatQ m(n, n);
    for (int i = 0; i < n; ++i) {
      m.at(i, i) = -2 - static_cast<long>(rng.next() % 4);
      if (i + 1 < n) {
        m.at(i, i + 1) = 1;
        m.at(i + 1, i) = 1;
      }
    }
    CHECK(classify_negativity(m) == Definiteness::NegativeDefinite);
  }
}

TEST_CASE("mod p rank agrees with exact rank on random rational matrices") {
  DetRng rng(47);
  for (int trial = 0; trial < 80; ++trial) {
    int r = 1 + static_cast<int>(rng.next() % 6);
    int c = 1 + static_cast<int>(rng.next() % 6);
    MatQ a(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) a.at(i, j) = rng.next_rat(20, 5);
    int exact = rank_exact(a);
    CHECK(rank_mod_p(a, kOraclePrimeA) == exact);
    CHECK(rank_mod_p(a, kOraclePrimeB) == exact);
  }
}

TEST_CASE("mod p reduction respects arithmetic") {
  Rat q = rat_parse("3/7");
  std::uint64_t r = mod_reduce(q, kOraclePrimeA);
  // 7 * (3/7 mod p) == 3 mod p
  std::uint64_t seven = 7, lhs = 0;
  // cheap mulmod via repeated addition is fine for a single check
  for (std::uint64_t i = 0; i < seven; ++i) lhs = (lhs + r) % kOraclePrimeA;
  CHECK(lhs == 3);
  CHECK(mod_reduce(Rat(-1), kOraclePrimeA) == kOraclePrimeA - 1);
  CHECK(mod_reduce(Rat(0), kOraclePrimeB) == 0);
}
