#pragma once

// Honest lattice realizations of chains and forks with prescribed
// self-intersections, for the randomized bark checks. Everything is built
// on the plane by arranging exceptional classes so that consecutive
// curves share one blown-up point; padding points push a self-intersection
// down below -2 without touching the adjacency.

#include <string>
#include <vector>

#include "logsurf/curvegraph.hpp"
#include "logsurf/rational.hpp"

namespace logsurf::testgen {

// C_1 .. C_l with C_t^2 = selfs[t-1], all <= -2. With `attach`, a
// (-1)-curve R is appended after C_l, so the chain becomes a maximal
// admissible twig of the configuration instead of a bare rod.
inline DualGraph chain_config(const std::vector<long>& selfs, bool attach) {
  const int l = static_cast<int>(selfs.size());
  int k = l + 1;
  for (long s : selfs) k += static_cast<int>(-s) - 2;
  PicLattice lat = PicLattice::plane(k);
  int pad = l + 1;  // first free index after the spine e(0) .. e(l)
  std::vector<GraphComponent> comps;
  for (int t = 0; t < l; ++t) {
    DivisorClass c = dc_sub(lat.e(t), lat.e(t + 1));
    for (long extra = -selfs[t] - 2; extra > 0; --extra) c = dc_sub(c, lat.e(pad++));
    comps.push_back({t + 1, "C" + std::to_string(t + 1), c});
  }
  if (attach) comps.push_back({l + 1, "R", lat.e(l)});
  return DualGraph(lat, comps);
}

// Fork with center self-intersection `center_self` and three arms given
// center-outward; every self-intersection <= -2. The center is a line
// through one point of each arm's spine.
inline DualGraph fork_config(long center_self, const std::vector<std::vector<long>>& arms) {
  int k = static_cast<int>(-center_self) - 2;
  for (const auto& a : arms) {
    k += static_cast<int>(a.size()) + 1;
    for (long s : a) k += static_cast<int>(-s) - 2;
  }
  PicLattice lat = PicLattice::plane(k);
  int next = 0;
  std::vector<GraphComponent> comps;
  int id = 0;
  std::vector<int> roots;
  for (const auto& a : arms) {
    const int m = static_cast<int>(a.size());
    std::vector<int> spine(m + 1);
    for (int& s : spine) s = next++;
    roots.push_back(spine[0]);
    for (int t = 0; t < m; ++t) {
      DivisorClass c = dc_sub(lat.e(spine[t]), lat.e(spine[t + 1]));
      for (long extra = -a[t] - 2; extra > 0; --extra) c = dc_sub(c, lat.e(next++));
      ++id;
      comps.push_back({id, "A" + std::to_string(id), c});
    }
  }
  DivisorClass center = lat.H();
  for (int r : roots) center = dc_sub(center, lat.e(r));
  for (long extra = -center_self - 2; extra > 0; --extra)
    center = dc_sub(center, lat.e(next++));
  comps.push_back({++id, "C0", center});
  return DualGraph(lat, comps);
}

// one random admissible group per call: a rod, a maximal twig, or a fork;
// lengths up to 8, self-intersections in [-5, -2], with a slice of pure
// (-2) draws so the coefficient-one branch is exercised
inline DualGraph random_group_config(DetRng& rng, BarkKind* kind_out = nullptr) {
  auto pick = [&](long lo, long hi) {
    return lo + static_cast<long>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const bool pure_minus_two = pick(0, 3) == 0;
  auto draw_selfs = [&](long len) {
    std::vector<long> s(len);
    for (long& x : s) x = pure_minus_two ? -2 : -pick(2, 5);
    return s;
  };
  switch (pick(0, 2)) {
    case 0: {
      if (kind_out) *kind_out = BarkKind::Rod;
      return chain_config(draw_selfs(pick(1, 8)), false);
    }
    case 1: {
      if (kind_out) *kind_out = BarkKind::Twig;
      return chain_config(draw_selfs(pick(1, 7)), true);
    }
    default: {
      if (kind_out) *kind_out = BarkKind::Fork;
      if (pure_minus_two) {
        // the negative definite (-2) stars are exactly the D and E shapes
        static const std::vector<std::vector<long>> shapes[] = {
            {{-2}, {-2}, {-2}},           {{-2}, {-2}, {-2, -2}},
            {{-2}, {-2}, {-2, -2, -2}},   {{-2}, {-2, -2}, {-2, -2}},
            {{-2}, {-2, -2}, {-2, -2, -2}},
            {{-2}, {-2, -2}, {-2, -2, -2, -2}},
        };
        return fork_config(-2, shapes[pick(0, 5)]);
      }
      // quotient-type stars: two short arms of determinant 2 and 2 (or 2
      // and 3) leave the last arm and the center free to vary
      std::vector<std::vector<long>> arms(3);
      arms[0] = {-2};
      if (pick(0, 2) == 0) {
        arms[1] = pick(0, 1) ? std::vector<long>{-3} : std::vector<long>{-2, -2};
        static const std::vector<long> third[] = {{-3}, {-4}, {-5}, {-2, -2},
                                                  {-2, -3}, {-2, -2, -2}};
        arms[2] = third[pick(0, 5)];  // determinant 3, 4 or 5
      } else {
        arms[1] = {-2};
        arms[2] = draw_selfs(pick(1, 5));
      }
      return fork_config(-pick(2, 5), arms);
    }
  }
}

}  // namespace logsurf::testgen
