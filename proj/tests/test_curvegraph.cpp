#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logsurf/curvegraph.hpp"

#include <algorithm>

using namespace logsurf;

namespace {

// plane blown up in 7 points; classes below are honest exceptional and
// strict-transform classes, so every intersection number is real geometry
PicLattice L7() { return PicLattice::plane(7); }

GraphComponent gc(const PicLattice& L, int id, std::string name,
                  std::vector<int> e_coeffs, int h = 0) {
  DivisorClass d = L.zero();
  d.c[0] = h;
  for (size_t i = 0; i < e_coeffs.size(); ++i) d.c[1 + i] = e_coeffs[i];
  return GraphComponent{id, std::move(name), d};
}

// center (-4) with three arms: two -2s / a single -1 / a single -2.
// tips: [e4-e5], [e2], [e3-e6]
DualGraph fork_graph() {
  PicLattice L = L7();
  std::vector<GraphComponent> comps;
  comps.push_back(gc(L, 0, "center", {1, -1, -1, -1, 0, 0, 0}));
  comps.push_back(gc(L, 1, "arm1a", {0, 1, 0, 0, -1, 0, 0}));
  comps.push_back(gc(L, 2, "arm1b", {0, 0, 0, 0, 1, -1, 0}));
  comps.push_back(gc(L, 3, "arm2", {0, 0, 1, 0, 0, 0, 0}));
  comps.push_back(gc(L, 4, "arm3", {0, 0, 0, 1, 0, 0, -1}));
  return DualGraph(L, std::move(comps));
}

}  // namespace

TEST_CASE("weights come from the pairing and validation accepts real configs") {
  DualGraph g = fork_graph();
  CHECK(g.n() == 5);
  CHECK(g.self(0) == -4);
  CHECK(g.self(1) == -2);
  CHECK(g.self(3) == -1);
  CHECK(g.weight(0, 1) == 1);
  CHECK(g.weight(0, 3) == 1);
  CHECK(g.weight(1, 2) == 1);
  CHECK(g.weight(1, 3) == 0);
  CHECK(g.valency(0) == 3);
  CHECK(g.valency(2) == 1);
  CHECK(g.index_of_id(4) == 4);
}

TEST_CASE("validation rejects junk") {
  PicLattice L = L7();
  // a plane cubic has genus 1
  std::vector<GraphComponent> bad1{gc(L, 0, "cubic", {0, 0, 0, 0, 0, 0, 0}, 3)};
  CHECK_THROWS(DualGraph(L, bad1));
  // e2-e3 and e2 meet in -1
  std::vector<GraphComponent> bad2{gc(L, 0, "a", {0, 1, -1, 0, 0, 0, 0}),
                                   gc(L, 1, "b", {0, 1, 0, 0, 0, 0, 0})};
  CHECK_THROWS(DualGraph(L, bad2));
}

TEST_CASE("shape classification: rods") {
  PicLattice L = L7();
  std::vector<GraphComponent> comps{gc(L, 0, "c1", {1, -1, 0, 0, 0, 0, 0}),
                                    gc(L, 1, "c2", {0, 1, -1, 0, 0, 0, 0}),
                                    gc(L, 2, "c3", {0, 0, 1, -1, 0, 0, 0})};
  DualGraph g(L, comps);
  auto groups = g.connected_groups();
  REQUIRE(groups.size() == 1);
  CHECK(g.shape(groups[0]) == GroupShape::Rod);
  auto order = g.chain_order(groups[0]);
  REQUIRE(order.has_value());
  // either orientation is a valid chain order
  std::vector<int> fwd{0, 1, 2}, bwd{2, 1, 0};
  CHECK((*order == fwd || *order == bwd));
  CHECK(g.group_is_admissible(groups[0]));
  CHECK(g.maximal_twigs().empty());  // rods carry no twigs
  CHECK(g.group_pa(groups[0]) == 0);
}

TEST_CASE("shape classification: forks, arms, and twigs") {
  DualGraph g = fork_graph();
  auto groups = g.connected_groups();
  REQUIRE(groups.size() == 1);
  CHECK(g.shape(groups[0]) == GroupShape::Fork);
  CHECK(g.fork_center(groups[0]) == 0);
  CHECK(!g.group_is_admissible(groups[0]));  // the -1 arm spoils it

  auto arms = g.fork_arms(groups[0]);
  REQUIRE(arms.size() == 3);
  std::vector<std::vector<int>> expect{{2, 1}, {3}, {4}};
  std::sort(arms.begin(), arms.end());
  CHECK(arms == expect);

  auto twigs = g.maximal_twigs();
  std::sort(twigs.begin(), twigs.end());
  CHECK(twigs == std::vector<std::vector<int>>{{2, 1}, {3}, {4}});

  auto adm = g.maximal_admissible_twigs();
  std::sort(adm.begin(), adm.end());
  // the (-1) tip contributes nothing
  CHECK(adm == std::vector<std::vector<int>>{{2, 1}, {4}});
}

TEST_CASE("cycles are neither trees nor twig sources") {
  // three general lines: a triangle
  PicLattice L = PicLattice::plane(0);
  std::vector<GraphComponent> comps;
  for (int i = 0; i < 3; ++i) {
    DivisorClass d = L.zero();
    d.c[0] = 1;
    comps.push_back(GraphComponent{i, "L" + std::to_string(i), d});
  }
  DualGraph g(L, comps);
  auto groups = g.connected_groups();
  REQUIRE(groups.size() == 1);
  CHECK(!g.group_is_tree(groups[0]));
  CHECK(g.shape(groups[0]) == GroupShape::Other);
  CHECK(g.maximal_twigs().empty());
  CHECK(g.group_pa(groups[0]) == 1);  // the triangle carries a cycle
  CHECK(g.is_one_connected());
}

TEST_CASE("tangency counts as a double edge") {
  PicLattice L = PicLattice::plane(0);
  DivisorClass conic = L.zero();
  conic.c[0] = 2;
  DivisorClass line = L.zero();
  line.c[0] = 1;
  DualGraph g(L, {GraphComponent{0, "conic", conic}, GraphComponent{1, "line", line}});
  CHECK(g.weight(0, 1) == 2);
  auto groups = g.connected_groups();
  CHECK(!g.group_is_tree(groups[0]));  // double edge = cycle
  CHECK(g.shape(groups[0]) == GroupShape::Other);
}

TEST_CASE("trees of rational curves have pa 0, and D.(D+K) counts them") {
  DualGraph fork = fork_graph();
  auto groups = fork.connected_groups();
  CHECK(fork.group_pa(groups[0]) == 0);

  // two disjoint trees: D.(D+K) = -2h with h = 2
  PicLattice L = L7();
  std::vector<GraphComponent> comps{gc(L, 0, "a1", {1, -1, 0, 0, 0, 0, 0}),
                                    gc(L, 1, "a2", {0, 1, 0, 0, 0, 0, 0}),
                                    gc(L, 2, "b1", {0, 0, 1, -1, 0, 0, 0})};
  DualGraph g(L, comps);
  CHECK(g.connected_groups().size() == 2);
  DivisorClass D = L.zero();
  for (int i = 0; i < 3; ++i) D = dc_add(D, g.comp(i).cls);
  CHECK(L.pair(D, dc_add(D, L.canonical())) == -4);
  CHECK(!g.is_one_connected());
}

TEST_CASE("canonical key is invariant under relabeling") {
  DualGraph g = fork_graph();
  std::string key = g.canonical_key();

  // same configuration fed in a different order
  PicLattice L = L7();
  std::vector<GraphComponent> shuffled;
  for (int i : {3, 0, 4, 2, 1}) shuffled.push_back(fork_graph().comp(i));
  DualGraph g2(L, shuffled);
  CHECK(g2.canonical_key() == key);

  // a rod of the same self-intersections keys differently
  std::vector<GraphComponent> rod{gc(L, 0, "c1", {1, -1, 0, 0, 0, 0, 0}),
                                  gc(L, 1, "c2", {0, 1, -1, 0, 0, 0, 0})};
  CHECK(DualGraph(L, rod).canonical_key() != key);
}

TEST_CASE("one-connectedness detects weak joints") {
  // chain a - b where a and b meet exactly once: 1-connected
  PicLattice L = L7();
  std::vector<GraphComponent> chain{gc(L, 0, "a", {1, -1, 0, 0, 0, 0, 0}),
                                    gc(L, 1, "b", {0, 1, -1, 0, 0, 0, 0})};
  CHECK(DualGraph(L, chain).is_one_connected());
  // a single component is 1-connected by convention, the empty graph is not
  std::vector<GraphComponent> one{gc(L, 0, "a", {1, -1, 0, 0, 0, 0, 0})};
  CHECK(DualGraph(L, one).is_one_connected());
  CHECK(!DualGraph(L, {}).is_one_connected());
}
