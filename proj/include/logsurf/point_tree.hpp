#pragma once

// Trees of points: proper points of the mother surface at the roots,
// infinitely near points below them. Nodes keep a stable identity for the
// whole life of a computation; operations on models move points between
// "blown up" and "merely marked" states but never renumber them.
//
// This layer is purely combinatorial. Resolving a symbolic position (a
// direction, a point riding on a curve) into stage coordinates needs the
// carrier equations and happens in the model layer.

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "logsurf/rational.hpp"

namespace logsurf {

using PointId = int;

// A point of the mother surface, by homogeneous coordinates: (x:y:z) on
// the plane, ((s:t),(x:y)) on a ruled surface.
struct PosProper {
  std::vector<Rat> coords;
};

// The point where a named curve's strict transform meets the exceptional
// curve of the parent. Survives coordinate changes untouched.
struct PosOnCarrier {
  PointId parent = -1;
  int carrier = -1;  // component id, resolved by the model
};

// Explicit direction (alpha : beta) in the parent's local frame. (0:1)
// points along the previous exceptional curve, which makes the child a
// satellite point.
struct PosDirection {
  PointId parent = -1;
  Rat alpha, beta;
};

// A general point of the parent's exceptional curve. The actual value is
// drawn deterministically the first time somebody needs coordinates, then
// kept, so replays see the same geometry.
struct PosGeneric {
  PointId parent = -1;
  std::optional<Rat> drawn;  // chart-A direction coordinate once chosen
};

using Position = std::variant<PosProper, PosOnCarrier, PosDirection, PosGeneric>;

std::optional<PointId> position_parent(const Position& p);

struct PointNode {
  PointId id = -1;
  Position pos;
};

class PointTree {
 public:
  PointId add(Position pos);
  // insert with a caller-chosen id (file loading); throws on collisions
  void add_with_id(PointId id, Position pos);
  void remove_leaf(PointId id);
  void set_position(PointId id, Position pos);

  bool contains(PointId id) const { return nodes_.count(id) != 0; }
  const PointNode& node(PointId id) const;
  std::optional<PointId> parent(PointId id) const;
  std::vector<PointId> children(PointId id) const;   // ascending id
  std::vector<PointId> roots() const;
  std::vector<PointId> all() const;                  // ascending id
  std::vector<PointId> subtree(PointId id) const;    // preorder
  std::vector<PointId> chain_from_root(PointId id) const;
  int depth(PointId id) const;                       // proper points sit at 0
  bool is_leaf(PointId id) const;
  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }

 private:
  std::map<PointId, PointNode> nodes_;
  PointId next_ = 0;
};

// ---------------------------------------------------------------- clusters
//
// A cluster is a set of tracked points closed under taking parents: you
// cannot ask for a point infinitely near q without also tracking q.

using Cluster = std::set<PointId>;

bool cluster_is_closed(const PointTree& tree, const Cluster& c);

// longest chain inside the cluster hanging strictly below q (q itself not
// counted); 0 when nothing in the cluster sits under q
int cluster_depth_below(const PointTree& tree, const Cluster& c, PointId q);

}  // namespace logsurf
