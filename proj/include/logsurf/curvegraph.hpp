#pragma once

// Dual graphs of curve configurations. Vertices are irreducible components
// with their classes; edge multiplicities come straight out of the
// intersection pairing. The structural notions the peeling step consumes
// (tips, twigs, rods, forks) live here, with no geometry attached.

#include <optional>
#include <string>
#include <vector>

#include "logsurf/lattice.hpp"

namespace logsurf {

struct GraphComponent {
  int id = -1;  // stable component id from the owning configuration
  std::string name;
  DivisorClass cls;
};

enum class GroupShape { Rod, Fork, Other };

class DualGraph {
 public:
  // throws when a cross pairing is negative or fractional, or when some
  // component is not a rational curve (arithmetic genus 0)
  DualGraph(PicLattice lat, std::vector<GraphComponent> comps);

  int n() const { return static_cast<int>(comps_.size()); }
  const PicLattice& lattice() const { return lat_; }
  const GraphComponent& comp(int i) const { return comps_.at(i); }
  int index_of_id(int component_id) const;

  const Rat& weight(int i, int j) const;  // intersection number, i != j
  const Rat& self(int i) const;
  Rat valency(int i) const;  // sum of multiplicities toward the others

  std::vector<std::vector<int>> connected_groups() const;

  bool group_is_tree(const std::vector<int>& g) const;
  // endpoints-inward ordering when the group is a chain (every vertex
  // meeting the others in at most 2, counted with multiplicity, no cycle)
  std::optional<std::vector<int>> chain_order(const std::vector<int>& g) const;
  GroupShape shape(const std::vector<int>& g) const;
  // the single valency-3 vertex of a fork
  int fork_center(const std::vector<int>& g) const;
  // the three arms of a fork, each ordered tip -> center, center excluded
  std::vector<std::vector<int>> fork_arms(const std::vector<int>& g) const;

  // every self-intersection in the group is <= -2
  bool group_is_admissible(const std::vector<int>& g) const;
  // the group enters the bark as one block: an admissible rod, or a fork
  // of quotient type (arm determinants p, q, r with 1/p + 1/q + 1/r > 1,
  // which forces a negative definite pairing matrix)
  bool group_peels_whole(const std::vector<int>& g) const;

  // chains growing inward from each tip of the group, stopping just before
  // a vertex of valency >= 3 (and, when admissible_only, before the first
  // self-intersection > -2); ordered tip first, empty walks dropped
  std::vector<std::vector<int>> twigs_of_group(const std::vector<int>& g,
                                               bool admissible_only) const;
  // maximal twigs over all non-chain connected groups
  std::vector<std::vector<int>> maximal_twigs() const;
  // maximal admissible twigs entering the bark: harvested from every group
  // except the ones that are admissible rods or forks in their own right
  // (those peel as whole groups, and their tips would collide with this)
  std::vector<std::vector<int>> maximal_admissible_twigs() const;

  DivisorClass group_sum(const std::vector<int>& g) const;
  Rat group_pa(const std::vector<int>& g) const;

  // crossing count of a reduced sub-divisor with the rest: C.(D - C)
  Rat branching_of(const std::vector<int>& sub) const;

  // 1-connectedness of the reduced divisor: every splitting into two
  // nonempty stacks meets in at least 1. Caps at 20 vertices.
  bool is_one_connected() const;

  // relabeling-invariant fingerprint, brute force, for up to 8 vertices
  std::string canonical_key() const;

 private:
  std::vector<int> tips_of_group(const std::vector<int>& g) const;

  PicLattice lat_;
  std::vector<GraphComponent> comps_;
  MatQ w_;  // full pairing matrix of the components
};

// The Riemann-Roch consequence for a configuration whose h connected
// components are all trees of rational curves:
//   h0(2K+D) + h0(-K-D) >= K.(K+D) - h + 1,
// handed back as the two classes plus the right-hand side. Requires every
// connected group to have arithmetic genus 0, and checks D.(D+K) = -2h on
// the way (a breach means the configuration data is corrupt).
struct RRBound {
  DivisorClass two_k_plus_d;
  DivisorClass minus_k_minus_d;
  Rat rhs;
};

RRBound rr_bound(const DualGraph& g);

}  // namespace logsurf
