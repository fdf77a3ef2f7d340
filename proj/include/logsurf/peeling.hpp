#pragma once

// Peeling a boundary divisor: the decomposition D = D# + Bk(D), where the
// bark Bk(D) collects fractional multiples of the admissible twigs, rods
// and forks of D, and D# is what a minimal model actually has to carry.
// Everything here is lattice-level; contraction of offenders lives with
// the birational machinery.

#include <optional>
#include <string>
#include <vector>

#include "logsurf/curvegraph.hpp"
#include "logsurf/linalg.hpp"

namespace logsurf {

enum class BarkKind { Twig, Rod, Fork };

struct BarkGroup {
  BarkKind kind;
  std::vector<int> verts;  // graph indices; twigs tip first, rods end to end
  std::vector<Rat> gamma;  // matching coefficients, each in (0, 1]
};

struct Bark {
  std::vector<BarkGroup> groups;
  DivisorClass total;    // sum of gamma_i C_i over every group
  DivisorClass d_sharp;  // D - total
  std::vector<int> support;  // all bark vertices, ascending
  bool empty() const { return groups.empty(); }
  std::optional<Rat> gamma_at(int vert) const;
};

// Coefficients of the bark on one admissible group, solving
//   M(group) * gamma = ((D + K) . C_i)_i
// with D the full configuration divisor. Verifies admissibility and
// negative definiteness up front; checks the exact residual, the (0, 1]
// bounds, and that a coefficient reaches 1 only on (-2) rods and forks
// (where the whole vector is then 1).
std::vector<Rat> bark_of_group(const DualGraph& g, const std::vector<int>& group,
                               BarkKind kind);

// The full decomposition over the maximal admissible twigs plus the whole
// admissible rods and forks. Groups must come out pairwise disjoint and
// mutually orthogonal, D# effective, M(Bk(D)) negative definite, and
// (K + D#) . C = 0 for every C in the bark; any violation is an
// InternalError, not a recoverable state.
Bark bark(const DualGraph& g);

// definiteness of an intersection matrix, the exact arbiter used above
inline Definiteness definiteness(const MatQ& sym) { return classify_negativity(sym); }

// a named curve class fed to the minimality scan or the classifier on top
// of the configuration's own components (exceptional classes of the
// model, classes registered by earlier contraction steps)
struct TrackedClass {
  std::string name;
  DivisorClass cls;
};

struct Offender {
  std::string name;
  DivisorClass cls;
  std::optional<int> vert;  // graph index when the offender is a component
};

// first (-1)-curve C among the candidates with (D# + K) . C < 0 and
// M(C + Bk(D)) negative definite; components are scanned in id order,
// then the extra classes in the order given. The scan only sees named
// classes, never the whole cone, so a clean result means "almost minimal
// relative to the tracked candidate set".
std::optional<Offender> almost_minimal_offender(const DualGraph& g, const Bark& bk,
                                                const std::vector<TrackedClass>& extra);

inline bool is_almost_minimal(const DualGraph& g, const Bark& bk,
                              const std::vector<TrackedClass>& extra = {}) {
  return !almost_minimal_offender(g, bk, extra).has_value();
}

enum class Obstruction {
  PencilReduction,           // a tracked class fibers the pair over a curve
  DelPezzoRank1Shrinkable,   // the boundary is nothing but bark
  NonAdmissibleFork,         // a single fork with an irrelevant branch curve
  DriverContractible,        // handed off to the contraction driver
  Unknown,
};

std::string obstruction_name(Obstruction o);

struct ObstructionReport {
  Obstruction kind = Obstruction::Unknown;
  std::optional<int> fork_component;   // component id of the fork's branch
  std::optional<TrackedClass> pencil;  // class certifying the fibration
  bool candidate_set_exhaustive = false;
};

// Decides what blocks further contraction of an almost-minimal pair:
// shrinkable boundary first, then an isolated non-admissible fork, then a
// pencil certified by some class f with f^2 = 0, M(f + Bk(D)) negative
// semidefinite but not definite, and f . D <= 1 (components are tried
// before the extra tracked classes). Throws std::invalid_argument when
// the input still has an offender.
ObstructionReport classify_obstruction(const DualGraph& g, const Bark& bk,
                                       const std::vector<TrackedClass>& tracked,
                                       bool driver_recognizes = false);

}  // namespace logsurf
