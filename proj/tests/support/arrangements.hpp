#pragma once

// Line arrangements used across the linear-system and driver tests: the
// d-line family (lines through one point plus two transverse lines) and
// the fixed eight-line configuration with eleven marked nodes.

#include <string>
#include <vector>

#include "logsurf/model.hpp"

namespace logsurf::testgen {

inline Rat rq(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Poly line3(long cx, long cy, long cz) {
  Poly l(3);
  if (cx) l.add_term({1, 0, 0}, Rat(cx));
  if (cy) l.add_term({0, 1, 0}, Rat(cy));
  if (cz) l.add_term({0, 0, 1}, Rat(cz));
  return l;
}

inline void track_line(Triple& t, int id, const std::string& name, Poly geom) {
  t.boundary.push_back({id, name, DivisorClass{{Rat(1)}}, std::move(geom), std::nullopt, true});
}

// L_1..L_{d-2} through P0 = (0:0:1) with slopes 2..d-1, then x = z and
// y = z. Blown: P0 and the d-2 nodes on {x = z}.
inline Triple line_family(int d) {
  Triple t{Model::plane(), {}, {}, {}};
  for (int i = 1; i <= d - 2; ++i)
    track_line(t, i, "L" + std::to_string(i), line3(-(i + 1), 1, 0));
  track_line(t, d - 1, "L" + std::to_string(d - 1), line3(1, 0, -1));
  track_line(t, d, "L" + std::to_string(d), line3(0, 1, -1));
  t = apply_step(t, StepBlowUp{0, PosProper{{Rat(0), Rat(0), Rat(1)}}});
  for (int i = 1; i <= d - 2; ++i)
    t = apply_step(t, StepBlowUp{i, PosProper{{Rat(1), Rat(i + 1), Rat(1)}}});
  return t;
}

// Five lines through P0 (slopes 2..6), x = z, y = z, x + y = 8z; P0 and
// eleven of the pairwise intersections are blown up.
inline Triple eight_lines() {
  Triple t{Model::plane(), {}, {}, {}};
  for (int i = 1; i <= 5; ++i)
    track_line(t, i, "L" + std::to_string(i), line3(-(i + 1), 1, 0));
  track_line(t, 6, "L6", line3(1, 0, -1));
  track_line(t, 7, "L7", line3(0, 1, -1));
  track_line(t, 8, "L8", line3(1, 1, -8));
  t = apply_step(t, StepBlowUp{0, PosProper{{Rat(0), Rat(0), Rat(1)}}});
  const std::vector<std::pair<Rat, Rat>> nodes = {
      {rq(1, 2), Rat(1)},      // L1.L7
      {rq(8, 3), rq(16, 3)},   // L1.L8
      {rq(1, 3), Rat(1)},      // L2.L7
      {Rat(1), Rat(4)},        // L3.L6
      {Rat(1), Rat(5)},        // L4.L6
      {rq(4, 3), rq(20, 3)},   // L4.L8
      {Rat(1), Rat(6)},        // L5.L6
      {rq(8, 7), rq(48, 7)},   // L5.L8
      {Rat(1), Rat(1)},        // L6.L7
      {Rat(1), Rat(7)},        // L6.L8
      {Rat(7), Rat(1)},        // L7.L8
  };
  for (size_t k = 0; k < nodes.size(); ++k)
    t = apply_step(
        t, StepBlowUp{static_cast<PointId>(k + 1),
                      PosProper{{nodes[k].first, nodes[k].second, Rat(1)}}});
  return t;
}

}  // namespace logsurf::testgen
