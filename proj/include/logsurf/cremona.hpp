#pragma once

// Birational moves one level above the raw steps: seeded draws of general
// points, quadratic and De Jonquieres words, (-1)-contractions with the
// boundary case analysis, small models, the Fujita threshold search, and
// the step-log serialization the replay tooling consumes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logsurf/linsys.hpp"
#include "logsurf/model.hpp"
#include "logsurf/peeling.hpp"

namespace logsurf {

// Deterministic source of "general" points: exact rational coordinates from
// a seeded stream, validated against every tracked curve and marked point,
// redrawn on a clash. Same seed, same triple, same draws.
class PointDrawer {
 public:
  explicit PointDrawer(uint64_t seed) : rng_(seed) {}

  // a proper point away from all marks and off every tracked curve
  std::vector<Rat> general_point(const Triple& t);
  // a proper point on the given tracked curve, away from all marks, off the
  // other tracked curves; the curve must cut each fibre once on ruled
  // models, or be a line on the plane
  std::vector<Rat> general_point_on(const Triple& t, int curve_id);
  // a fresh direction coordinate for generic infinitely near points
  Rat fresh_value();

 private:
  DetRng rng_;
};

// smallest id not used by the point tree (image points, fresh marks)
PointId fresh_point_id(const Triple& t);

// a word of steps together with the triple it produced
struct WordResult {
  Triple triple;
  std::vector<BirationalStep> steps;
};

WordResult blow_up(const Triple& t, PointId q, const Position& pos);

// image id is drawn fresh; the step records it for replay
WordResult elementary(const Triple& t, PointId p, const Position& pos,
                      bool second_ruling = false);

// blows up whichever of the three bases is not blown yet, then rebases
WordResult quadratic_map(const Triple& t, PointId a, PointId b, PointId c);

// how the boundary changed when a (-1)-curve was contracted
struct ContractReport {
  int curve_id = -1;
  std::string name;
  Rat epsilon;        // C . D, with C's own contribution when C lies in D
  std::string kind;   // isolated / terminal / node / cusp / tacnode /
                      // off-boundary / multiple
  PointId image = -1; // the mark left where the curve came down
};

struct ContractOutcome {
  Triple triple;
  std::vector<BirationalStep> steps;
  ContractReport report;
};

// Realizes the contraction of a tracked curve with C^2 = C.K = -1 as a step
// word: a plain leaf contraction when C is a pure exceptional, a quadratic
// rebase route on plane models, elementary transformations down to F_1 and
// a switch for vertical classes on ruled models.
ContractOutcome contract(const Triple& t, int curve_id, PointDrawer& draw);

struct SmallModelOutcome {
  Triple triple;
  std::vector<BirationalStep> steps;
  std::vector<ContractReport> contracted;
};

// Repeatedly contracts the lowest-id tracked boundary (-1)-curve with
// C . D <= 1 until none is left. Deterministic; the other order of two
// simultaneous offenders gives a model related by an elementary
// transformation, not this one.
SmallModelOutcome small_model(const Triple& t, PointDrawer& draw);

// Contracts almost-minimal offenders (peeling scan over the boundary plus
// the given extra classes) until the scan comes back clean.
SmallModelOutcome almost_minimalize(const Triple& t, PointDrawer& draw);

// De Jonquieres word on an F_1 model: carrier must be a tracked unisecant
// (class E + dF). Plans chains at the carrier's intersections with the
// negative section, tops them up so the net degree m exceeds d and every
// chain outruns the largest protected cluster, fills with general points of
// the negative section, and ends on a plane model where the carrier has
// degree 1. Refuses when an intersection point is not rational.
WordResult dejonquieres_f1(const Triple& t, int carrier_id, PointDrawer& draw);

// Plane wrapper: carrier of degree d with multiplicity >= d-1 at the
// centre; switches the pencil of lines through the centre into a ruling
// and runs the F_1 word.
WordResult dejonquieres(const Triple& t, int carrier_id, PointId centre,
                        PointDrawer& draw);

struct FujitaReport {
  std::optional<int> m;     // largest m <= m_max with |E + m(K+D)| nonempty
  bool claim_applies = false;  // D.E >= 2 and D + E is 1-connected
  bool claim_checked = false;  // connectivity enumeration actually ran
  bool claim_ok = false;       // claim_applies and m >= 1
  bool exhausted = false;      // still nonempty at m_max
};

// Oracle-backed threshold search for |E + m(K+D)|; E is given as a class
// on the current lattice.
FujitaReport fujita_threshold(const Triple& t, const DivisorClass& e_cls, int m_max);

// ------------------------------------------------------------ step-log JSON

// Serializes a word with per-step boundary class snapshots, rationals as
// strings. The result replays bit-for-bit through parse + apply.
std::string steps_to_json(const Triple& initial, const std::vector<BirationalStep>& steps);

std::vector<BirationalStep> steps_from_json(const std::string& json);

// Applies the parsed word to the initial triple, verifying the recorded
// snapshots along the way; throws on any mismatch.
Triple replay_steps(const Triple& initial, const std::string& json);

}  // namespace logsurf
