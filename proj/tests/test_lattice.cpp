#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logsurf/lattice.hpp"

using namespace logsurf;

TEST_CASE("plane basis pairing") {
  PicLattice L = PicLattice::plane(3);
  CHECK(L.rank() == 4);
  CHECK(L.self(L.H()) == 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(L.self(L.e(i)) == -1);
    CHECK(L.pair(L.H(), L.e(i)) == 0);
    for (int j = i + 1; j < 3; ++j) CHECK(L.pair(L.e(i), L.e(j)) == 0);
  }
}

TEST_CASE("canonical class of blown-up plane") {
  PicLattice L = PicLattice::plane(4);
  DivisorClass K = L.canonical();
  CHECK(K.c[0] == -3);
  for (int i = 1; i <= 4; ++i) CHECK(K.c[i] == 1);
  CHECK(L.self(K) == 9 - 4);
}

TEST_CASE("ruled basis pairing and canonical class") {
  for (int n = 0; n <= 4; ++n) {
    PicLattice L = PicLattice::hirzebruch(n, 2);
    CHECK(L.self(L.E()) == -n);
    CHECK(L.pair(L.E(), L.F()) == 1);
    CHECK(L.self(L.F()) == 0);
    DivisorClass K = L.canonical();
    CHECK(K.c[0] == -2);
    CHECK(K.c[1] == -(n + 2));
    CHECK(L.self(K) == 8 - 2);
  }
  // the F_1 canonical class in (E,F) coordinates
  PicLattice F1 = PicLattice::hirzebruch(1, 0);
  CHECK(F1.canonical().c == std::vector<Rat>{Rat(-2), Rat(-3)});
  CHECK(F1.self(F1.canonical()) == 8);
}

TEST_CASE("adjunction gives the classical plane curve genera") {
  PicLattice L = PicLattice::plane(0);
  auto degree_class = [&](int d) { return dc_scale(Rat(d), L.H()); };
  CHECK(L.genus(degree_class(1)) == 0);
  CHECK(L.genus(degree_class(2)) == 0);
  CHECK(L.genus(degree_class(3)) == 1);
  CHECK(L.genus(degree_class(4)) == 3);
  CHECK(L.genus(degree_class(5)) == 6);
}

TEST_CASE("nodal and cuspidal drops: genus falls by m(m-1)/2") {
  PicLattice L = PicLattice::plane(1);
  // degree d with one point of multiplicity m
  auto cls = [&](int d, int m) {
    return L.from_mults({Rat(d)}, {Rat(m)});
  };
  CHECK(L.genus(cls(3, 2)) == 0);   // nodal cubic
  CHECK(L.genus(cls(4, 2)) == 2);
  CHECK(L.genus(cls(4, 3)) == 0);   // quartic with a triple point
  CHECK(L.genus(cls(5, 3)) == 3);
}

TEST_CASE("sections and fibers on ruled surfaces are rational") {
  for (int n = 0; n <= 3; ++n) {
    PicLattice L = PicLattice::hirzebruch(n, 0);
    CHECK(L.genus(L.F()) == 0);
    CHECK(L.genus(L.E()) == 0);
    // the positive section E + nF
    DivisorClass s = dc_add(L.E(), dc_scale(Rat(n), L.F()));
    CHECK(L.self(s) == n);
    CHECK(L.genus(s) == 0);
  }
}

TEST_CASE("parity: C.(C+K) is always even on integral classes") {
  PicLattice L = PicLattice::plane(5);
  DetRng rng(123);
  for (int t = 0; t < 200; ++t) {
    DivisorClass d = L.zero();
    for (auto& x : d.c) x = Rat(static_cast<long>(rng.next() % 21) - 10);
    Rat val = L.pair(d, dc_add(d, L.canonical()));
    CHECK(val.get_den() == 1);
    CHECK(val.get_num() % 2 == 0);
  }
  PicLattice R = PicLattice::hirzebruch(2, 4);
  for (int t = 0; t < 200; ++t) {
    DivisorClass d = R.zero();
    for (auto& x : d.c) x = Rat(static_cast<long>(rng.next() % 21) - 10);
    Rat val = R.pair(d, dc_add(d, R.canonical()));
    CHECK(val.get_den() == 1);
    CHECK(val.get_num() % 2 == 0);
  }
}

TEST_CASE("signature is (1, rank-1) for every model") {
  for (int k = 0; k <= 8; ++k) {
    Inertia sp = PicLattice::plane(k).signature();
    CHECK(sp.pos == 1);
    CHECK(sp.neg == k);
    CHECK(sp.zero == 0);
    for (int n = 0; n <= 3; ++n) {
      Inertia sr = PicLattice::hirzebruch(n, k).signature();
      CHECK(sr.pos == 1);
      CHECK(sr.neg == k + 1);
      CHECK(sr.zero == 0);
    }
  }
}

TEST_CASE("riemann-roch shape on a pair: the line bound") {
  // chi-style right hand side K.(K+D) - h + 1 for the plane with D a line,
  // one connected component: 6 - 1 + 1 = 6
  PicLattice L = PicLattice::plane(0);
  DivisorClass D = L.H();
  Rat rhs = L.pair(L.canonical(), dc_add(L.canonical(), D)) - 1 + 1;
  CHECK(rhs == 6);
}

TEST_CASE("from_mults and mult_at round-trip") {
  PicLattice L = PicLattice::plane(3);
  DivisorClass d = L.from_mults({Rat(7)}, {Rat(3), Rat(2), Rat(1)});
  CHECK(d.c[0] == 7);
  CHECK(L.mult_at(d, 0) == 3);
  CHECK(L.mult_at(d, 1) == 2);
  CHECK(L.mult_at(d, 2) == 1);
  CHECK(L.self(d) == 49 - 9 - 4 - 1);
  CHECK(d.is_integral());
  CHECK(!d.is_zero());
}
