#pragma once

// Linear systems with base multiplicities at the blown-up points: the
// virtual (expected) dimension, an exact h^0 oracle built from condition
// rows on mother-surface forms, the splitting process that strips forced
// components, and the plurigenus/kod verdicts assembled from both.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logsurf/lattice.hpp"
#include "logsurf/model.hpp"

namespace logsurf {

// A class on the blown-up model, read as "forms of this mother degree with
// at least these multiplicities at the blown-up points".
struct LinSysSpec {
  DivisorClass cls;
  std::vector<Rat> mother;
  std::map<PointId, Int> mults;
};

LinSysSpec linsys_spec(const Model& m, const DivisorClass& cls);

// Expected projective dimension chi(cls) - 1 = (cls^2 - cls.K) / 2; may be
// negative, and the honest dimension may exceed it in special position.
Int virtual_dim(const PicLattice& lat, const DivisorClass& cls);

// Replace the class by one with the same sections whose multiplicities
// satisfy every proximity inequality. Subtracts strict exceptionals E with
// cls.E < 0 one at a time; each such E sits in the base locus, so h^0 is
// untouched.
DivisorClass unloaded(const Model& m, const DivisorClass& cls);

// Exact h^0 of the class: monomial count minus the rank of the vanishing
// conditions. Every blown-up point in the support must be concrete (proper
// anchor, explicit or carrier direction, or a drawn generic value); an
// undrawn generic point is refused. Ranks are exact on small systems and
// double-prime modular on large ones. LOGSURF_WORKERS caps the threads
// used to build condition columns.
int h0_oracle(const Triple& t, const DivisorClass& cls);

// ------------------------------------------------------- splitting process

struct SplitCandidate {
  int id = -1;       // scan order: tracked curves first, then synthesized
  std::string name;
  DivisorClass cls;
};

// Tracked components, strict exceptionals, and (on the plane) joining lines
// of point pairs plus conics through five points, each with its honest
// class computed from coordinates; duplicates collapse onto the earliest.
std::vector<SplitCandidate> splitting_candidates(const Triple& t);

struct SplitStep {
  std::string name;
  DivisorClass cls;        // the component split off
  Int k;                   // multiplicity taken in this step
  Rat pairing;             // residual.cls before the step, the justification
  DivisorClass residual;   // what is left afterwards
};

enum class SplitVerdict { Empty, Residual, Inconclusive };

struct SplitCertificate {
  DivisorClass start;
  std::vector<SplitStep> steps;
  SplitVerdict verdict = SplitVerdict::Inconclusive;
  std::string reason;      // set for Empty
  DivisorClass residual;
};

// One forced split against the given residual: the first candidate C in
// scan order with spec.C < 0, taken k times where k is maximal with
// (spec - (k-1)C).C < 0 (once when C^2 >= 0). Absent when nothing is
// forced.
std::optional<SplitStep> split_once(const PicLattice& lat, const DivisorClass& spec,
                                    const std::vector<SplitCandidate>& pool);

// Round-based: every candidate forced against the residual at the start of
// a round splits off in that round, with its multiplicity measured there
// too. Ends Empty once the residual meets a nef mother class negatively,
// Residual when no candidate is forced, Inconclusive at the step cap.
SplitCertificate splitting_certificate(const Triple& t, const DivisorClass& spec,
                                       const std::vector<SplitCandidate>& pool,
                                       int max_steps = 10000);

// --------------------------------------------------------- log plurigenera

// P_m = h^0(m(K + D)) with D the boundary divisor of the triple.
int plurigenus(const Triple& t, int m);

struct KodVerdict {
  bool minus_infinity = false;
  int bound = 0;    // P_m = 0 for all m <= bound, or the failing m
  int witness = 0;  // h^0 at the failing m, 0 otherwise
  std::vector<SplitCertificate> certificates;
};

// Checks P_1, ..., P_mmax: certificate first (cheap), oracle as fallback.
// The verdict always names the bound; nothing is claimed beyond it.
KodVerdict kod_estimate(const Triple& t, int mmax = 12);

}  // namespace logsurf
