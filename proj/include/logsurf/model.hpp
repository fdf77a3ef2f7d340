#pragma once

// Blow-up models of the plane and of Hirzebruch surfaces, with the curves
// and point clusters riding on them, and the birational steps that move
// everything at once. A step is small on purpose: blow up a marked point,
// forget a childless one, or re-express the same surface over a different
// mother (a quadratic change of plane coordinates, an elementary
// transformation of the ruling, the two ways of reading F_1). Every
// classical transformation this toolkit performs is a finite word in these
// steps, which is what makes the logs replayable.

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "logsurf/curvegraph.hpp"
#include "logsurf/lattice.hpp"
#include "logsurf/point_tree.hpp"
#include "logsurf/poly.hpp"
#include "logsurf/rational.hpp"

namespace logsurf {

// An irreducible curve (or, with strict=false, a bare numerical class such
// as the fibre of a pencil) followed through the computation. The class is
// written in the owning model's basis. geom, when present, is a defining
// form on the mother surface: homogeneous in (X,Y,Z) over the plane,
// bihomogeneous in Cox coordinates (s,t,x,y) over F_n, where s,t cut
// fibres, {y=0} is the negative section and x has bidegree (n,1).
struct TrackedCurve {
  int id = -1;
  std::string name;
  DivisorClass cls;
  std::optional<Poly> geom;
  // rational parameterization (one univariate poly per mother coordinate),
  // for drawing points on the curve; not carried across rebases
  std::optional<std::vector<Poly>> param;
  bool strict = true;  // blow-ups subtract the local multiplicity; classes
                       // marked strict=false pull back totally
};

class Model {
 public:
  static Model plane();
  static Model hirzebruch(int n);

  MotherKind mother() const { return kind_; }
  int fn() const;  // Hirzebruch degree; throws over the plane

  const PointTree& tree() const { return tree_; }
  PointTree& tree() { return tree_; }

  // the blown-up points in lattice slot order: slot i of the lattice's
  // exceptional block belongs to blown()[i]
  const std::vector<PointId>& blown() const { return blown_; }
  bool is_blown(PointId q) const;
  std::optional<int> slot_of(PointId q) const;
  PicLattice lattice() const;

  DivisorClass e_of(PointId q) const;  // total transform of the point
  // e_q minus the exceptionals of the blown points proximate to q; this is
  // the class of the q-th exceptional curve as it sits on the model
  DivisorClass strict_exceptional(PointId q) const;

  // p lies on the exceptional curve of q: either a child of q, or a
  // satellite child of a child (direction (0:1) points back along the
  // previous exceptional)
  bool proximate(PointId p, PointId q) const;

  // a point of the current surface: proper, or hanging under blown points
  // only; such a point can be blown up next
  bool on_surface(PointId q) const;

  // the base of an elementary transformation stops denoting a point (its
  // exceptional turns into a whole fibre); the node stays in the tree for
  // id stability but is skipped by every transport and validity check
  bool is_retired(PointId q) const;
  void retire(PointId q);

  void append_blown(PointId q);
  void remove_blown(PointId q);
  void set_mother(MotherKind kind, int n);

 private:
  Model(MotherKind kind, int n) : kind_(kind), n_(n) {}
  MotherKind kind_;
  int n_ = 0;
  PointTree tree_;
  std::vector<PointId> blown_;
  std::set<PointId> retired_;
};

// ------------------------------------------------------------------ triple

// The working state: a model, the boundary curve D as a list of tracked
// components, auxiliary tracked curves (joining lines, pencil classes),
// and the cluster of points the contraction is not allowed to blow up.
struct Triple {
  Model model;
  std::vector<TrackedCurve> boundary;
  std::vector<TrackedCurve> aux;
  Cluster protect;

  DivisorClass divisor() const;
  const TrackedCurve* find(int id) const;
  const TrackedCurve* find_by_name(const std::string& name) const;
  TrackedCurve* find(int id);
  int fresh_curve_id() const;
};

// dual graph of the boundary components (ids preserved)
DualGraph config_of(const Triple& t);

// ------------------------------------------------------------------- steps

// The position rides along so a log can be replayed against a fresh start
// triple: applying the step registers the point first when the tree does
// not know it yet.
struct StepBlowUp {
  PointId point = -1;
  Position pos = PosProper{};
};
struct StepContractLeaf {
  PointId point = -1;
};
// re-express a plane model through the net of conics over three blown,
// childless, pairwise non-collinear proper points; the three slots survive
// with the joining lines as their new exceptional curves
struct StepQuadratic {
  PointId a = -1, b = -1, c = -1;
};
// blow up a childless proper point of an F_n model and contract the fibre
// through it; over F_0, second_ruling picks which ruling provides the
// contracted fibre. image names the tree node that receives the contracted
// fibre's image point (fresh, recorded for replay).
struct StepElementary {
  PointId point = -1;
  Position pos = PosProper{};
  PointId image = -1;
  bool second_ruling = false;
};
// read an F_1 model as the plane blown up at one more point (the negative
// section becomes the exceptional of z, a fresh tree node recorded here)
struct StepSwitchToPlane {
  PointId z = -1;
};
// the reverse reading: a blown, childless proper point z of a plane model
// becomes the negative section of F_1
struct StepSwitchToF1 {
  PointId z = -1;
};

using BirationalStep = std::variant<StepBlowUp, StepContractLeaf, StepQuadratic,
                                    StepElementary, StepSwitchToPlane, StepSwitchToF1>;

std::string step_name(const BirationalStep& s);

bool position_eq(const Position& a, const Position& b);

// Applies one step, transporting every tracked class, curve equation,
// anchor and cluster point. Throws std::invalid_argument when the step's
// preconditions fail (wrong mother, collinear bases, a marked point
// sitting on a curve the step contracts, a base point with children) and
// InternalError when a consistency check breaks afterwards.
Triple apply_step(const Triple& t, const BirationalStep& s);

// ---------------------------------------------------------- local geometry

// Local affine equation of a curve at a proper point: two variables, the
// point at the origin. The chart is fixed by normalizing the first nonzero
// homogeneous coordinate (both groups separately on a Hirzebruch model).
Poly localize_at_proper(const Model& m, const Poly& geom, const std::vector<Rat>& anchor);

// Direction (alpha:beta) of a tree point in its parent's frame, resolving
// carrier positions through the carrier's own strict transform. Throws on
// undrawn generic positions and on carriers not meeting the exceptional in
// a single point.
std::pair<Rat, Rat> resolve_direction(const Triple& t, PointId q);

// Multiplicity at q of the strict transform of a tracked curve (geom
// required). q may be proper or infinitely near; blown or merely marked.
int curve_mult_at(const Triple& t, const TrackedCurve& c, PointId q);

// multiplicity at q of the exceptional curve of w, from proximity alone
int exceptional_mult_at(const Model& m, PointId w, PointId q);

// ----------------------------------------------------------- marked pairs

// True when the composite map the steps describe has an exceptional
// divisor over a point of the cluster, i.e. some step blows up a cluster
// point (directly or as the blow-up half of an elementary transformation).
// Rebases and contractions are isomorphisms or morphisms and never count.
bool blows_up_cluster(const std::vector<BirationalStep>& steps, const Cluster& k);

// Proper-transform class of a curve given by mother degree data plus
// multiplicities at tree points: plane {d} or Hirzebruch {a,b} coefficients
// and one multiplicity per listed point. Points must be blown.
DivisorClass total_vs_proper(const Model& m, const std::vector<Rat>& mother_coeffs,
                             const std::vector<std::pair<PointId, Rat>>& mults);

}  // namespace logsurf
