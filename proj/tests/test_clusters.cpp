#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logsurf/point_tree.hpp"

using namespace logsurf;

namespace {
PosProper plane_pt(long x, long y, long z) {
  return PosProper{{Rat(x), Rat(y), Rat(z)}};
}
}  // namespace

TEST_CASE("ids are stable and ascending") {
  PointTree t;
  PointId a = t.add(plane_pt(0, 0, 1));
  PointId b = t.add(plane_pt(1, 0, 0));
  PointId c = t.add(PosGeneric{a, std::nullopt});
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(c == 2);
  CHECK(t.size() == 3);
  CHECK(t.all() == std::vector<PointId>{0, 1, 2});
  t.remove_leaf(b);
  // freed ids are never reused
  CHECK(t.add(plane_pt(0, 1, 0)) == 3);
}

TEST_CASE("parent and child bookkeeping") {
  PointTree t;
  PointId root = t.add(plane_pt(0, 0, 1));
  PointId c1 = t.add(PosDirection{root, Rat(1), Rat(2)});
  PointId c2 = t.add(PosGeneric{root, std::nullopt});
  PointId gc = t.add(PosDirection{c1, Rat(0), Rat(1)});
  CHECK(t.roots() == std::vector<PointId>{root});
  CHECK(t.children(root) == std::vector<PointId>{c1, c2});
  CHECK(t.parent(gc) == c1);
  CHECK(!t.parent(root).has_value());
  CHECK(t.depth(root) == 0);
  CHECK(t.depth(c1) == 1);
  CHECK(t.depth(gc) == 2);
  CHECK(t.chain_from_root(gc) == std::vector<PointId>{root, c1, gc});
  CHECK(t.subtree(root) == std::vector<PointId>{root, c1, c2, gc});
  CHECK(t.is_leaf(c2));
  CHECK(!t.is_leaf(c1));
}

TEST_CASE("structural misuse is rejected") {
  PointTree t;
  PointId root = t.add(plane_pt(0, 0, 1));
  PointId mid = t.add(PosGeneric{root, std::nullopt});
  CHECK_THROWS(t.add(PosDirection{99, Rat(1), Rat(0)}));
  CHECK_THROWS(t.remove_leaf(root));  // has a child
  CHECK_THROWS(t.node(42));
  CHECK_THROWS((void)t.parent(42));
  t.add_with_id(7, PosGeneric{mid, std::nullopt});
  CHECK_THROWS(t.add_with_id(7, plane_pt(1, 1, 1)));
  CHECK(t.add(plane_pt(2, 1, 1)) == 8);
}

TEST_CASE("set_position supports re-rooting but not cycles") {
  PointTree t;
  PointId a = t.add(plane_pt(0, 0, 1));
  PointId b = t.add(PosGeneric{a, std::nullopt});
  PointId c = t.add(PosGeneric{b, std::nullopt});
  // a de-blown child becomes a proper point
  t.set_position(b, plane_pt(5, 1, 1));
  CHECK(t.roots() == std::vector<PointId>{a, b});
  CHECK(t.parent(c) == b);
  // cannot hang a point under its own subtree
  CHECK_THROWS(t.set_position(b, PosGeneric{c, std::nullopt}));
}

TEST_CASE("cluster closure") {
  PointTree t;
  PointId a = t.add(plane_pt(0, 0, 1));
  PointId b = t.add(PosGeneric{a, std::nullopt});
  PointId c = t.add(PosGeneric{b, std::nullopt});
  PointId d = t.add(plane_pt(1, 1, 1));
  CHECK(cluster_is_closed(t, {a}));
  CHECK(cluster_is_closed(t, {a, b, c}));
  CHECK(cluster_is_closed(t, {a, b, d}));
  CHECK(!cluster_is_closed(t, {b}));        // parent missing
  CHECK(!cluster_is_closed(t, {a, c}));     // gap in the chain
  CHECK(!cluster_is_closed(t, {a, 42}));    // unknown point
  CHECK(cluster_is_closed(t, {}));
}

TEST_CASE("cluster depth below a node") {
  PointTree t;
  PointId a = t.add(plane_pt(0, 0, 1));
  PointId b = t.add(PosGeneric{a, std::nullopt});
  PointId c = t.add(PosGeneric{b, std::nullopt});
  PointId d = t.add(PosGeneric{c, std::nullopt});
  PointId e = t.add(PosGeneric{a, std::nullopt});
  Cluster cl{a, b, c, d, e};
  CHECK(cluster_depth_below(t, cl, a) == 3);
  CHECK(cluster_depth_below(t, cl, b) == 2);
  CHECK(cluster_depth_below(t, cl, d) == 0);
  CHECK(cluster_depth_below(t, cl, e) == 0);
  // points outside the cluster do not count
  Cluster partial{a, b};
  CHECK(cluster_depth_below(t, partial, a) == 1);
  // and a side branch does not inflate a chain
  Cluster with_side{a, b, e};
  CHECK(cluster_depth_below(t, with_side, a) == 1);
}

TEST_CASE("satellite positions are representable") {
  PointTree t;
  PointId a = t.add(plane_pt(0, 0, 1));
  PointId b = t.add(PosDirection{a, Rat(1), Rat(3)});
  PointId s = t.add(PosDirection{b, Rat(0), Rat(1)});  // toward E_a
  auto& pos = std::get<PosDirection>(t.node(s).pos);
  CHECK(sgn(pos.alpha) == 0);
  CHECK(t.depth(s) == 2);
}
