#include "logsurf/cremona.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/linalg.hpp"

namespace logsurf {

namespace {

using json = nlohmann::ordered_json;

void need(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void must(bool ok, const std::string& msg) {
  if (!ok) throw InternalError(msg);
}

long rat_int(const Rat& q) {
  need(q.get_den() == 1, "integer value expected");
  return to_long(q.get_num());
}

std::vector<Rat> norm_groups(const Model& m, std::vector<Rat> v) {
  auto norm = [](std::vector<Rat>& w, int lo, int hi) {
    int p = lo;
    while (p < hi && w[p] == 0) ++p;
    need(p < hi, "degenerate homogeneous coordinates");
    Rat s = w[p];
    for (int i = lo; i < hi; ++i) w[i] /= s;
  };
  if (m.mother() == MotherKind::Plane) {
    norm(v, 0, 3);
  } else {
    norm(v, 0, 2);
    norm(v, 2, 4);
  }
  return v;
}

// a candidate draw clashes when it hits a marked point, an occupied fibre
// (ruled models, when requested), or a tracked curve other than `skip`
bool draw_clashes(const Triple& t, const std::vector<Rat>& cand, int skip_curve,
                  bool fresh_fibre) {
  const Model& m = t.model;
  std::vector<Rat> p = norm_groups(m, cand);
  for (PointId r : m.tree().roots()) {
    auto* pp = std::get_if<PosProper>(&m.tree().node(r).pos);
    if (!pp) continue;
    std::vector<Rat> q = norm_groups(m, pp->coords);
    if (q == p) return true;
    if (fresh_fibre && m.mother() == MotherKind::Hirzebruch &&
        p[0] * q[1] - p[1] * q[0] == 0)
      return true;
  }
  for (const std::vector<TrackedCurve>* list : {&t.boundary, &t.aux})
    for (const TrackedCurve& c : *list) {
      if (c.id == skip_curve || !c.geom) continue;
      if (c.geom->eval(p) == 0) return true;
    }
  return false;
}

Rat det3(const std::vector<Rat>& a, const std::vector<Rat>& b, const std::vector<Rat>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

// ----------------------------------------------------------------- drawing

std::vector<Rat> PointDrawer::general_point(const Triple& t) {
  const bool ruled = t.model.mother() == MotherKind::Hirzebruch;
  for (int tries = 0; tries < 64; ++tries) {
    std::vector<Rat> p =
        ruled ? std::vector<Rat>{Rat(1), rng_.next_rat(), rng_.next_rat(), Rat(1)}
              : std::vector<Rat>{rng_.next_rat(), rng_.next_rat(), Rat(1)};
    if (!draw_clashes(t, p, -1, ruled)) return p;
  }
  throw InternalError("no general point found after 64 draws");
}

std::vector<Rat> PointDrawer::general_point_on(const Triple& t, int curve_id) {
  const TrackedCurve* cv = t.find(curve_id);
  need(cv != nullptr, "unknown curve");
  const Model& m = t.model;

  if (cv->param) {
    for (int tries = 0; tries < 64; ++tries) {
      Rat r = rng_.next_rat();
      std::vector<Rat> p;
      p.reserve(cv->param->size());
      for (const Poly& f : *cv->param) p.push_back(f.eval({r}));
      if (std::all_of(p.begin(), p.end(), [](const Rat& x) { return x == 0; })) continue;
      if (cv->geom) must(cv->geom->eval(p) == 0, "parameterization left its curve");
      if (!draw_clashes(t, p, curve_id, m.mother() == MotherKind::Hirzebruch)) return p;
    }
    throw InternalError("no general point found on the curve after 64 draws");
  }

  need(cv->geom.has_value(), "curve has no equation to draw on");

  if (m.mother() == MotherKind::Plane) {
    need(is_homogeneous(*cv->geom, 1), "plane draws need a line or a parameterization");
    MatQ a(1, 3);
    for (int j = 0; j < 3; ++j) {
      Expo e(3, 0);
      e[j] = 1;
      a.at(0, j) = cv->geom->coeff(e);
    }
    auto ker = kernel_exact(a);
    must(ker.size() == 2, "a line's point space has dimension two");
    for (int tries = 0; tries < 64; ++tries) {
      Rat r = rng_.next_rat();
      std::vector<Rat> p(3);
      for (int i = 0; i < 3; ++i) p[i] = ker[0][i] + r * ker[1][i];
      if (p[0] == 0 && p[1] == 0 && p[2] == 0) continue;
      if (!draw_clashes(t, p, curve_id, false)) return p;
    }
    throw InternalError("no general point found on the line after 64 draws");
  }

  const PicLattice lat = m.lattice();
  bool neg_section = cv->cls == lat.E();
  if (neg_section) {
    for (int tries = 0; tries < 64; ++tries) {
      Rat r = rng_.next_rat();
      std::vector<Rat> p = {Rat(1), r, Rat(1), Rat(0)};
      must(cv->geom->eval(p) == 0, "negative-section class with a different equation");
      if (!draw_clashes(t, p, curve_id, true)) return p;
    }
    throw InternalError("no general point found on the section after 64 draws");
  }

  if (cv->cls.c[0] == 1) {
    // unisecant: pick a fibre, the curve cuts it once
    for (int tries = 0; tries < 64; ++tries) {
      Rat r = rng_.next_rat();
      std::vector<Poly> imgs = {Poly::constant(4, Rat(1)), Poly::constant(4, r),
                                Poly::variable(4, 2), Poly::variable(4, 3)};
      Poly rest = cv->geom->subst(imgs);
      Rat a0 = rest.coeff(Expo{0, 0, 1, 0});
      Rat b0 = rest.coeff(Expo{0, 0, 0, 1});
      if (a0 == 0) continue;  // the fibre through a negative-section point
      std::vector<Rat> p = {Rat(1), r, -b0, a0};
      if (!draw_clashes(t, p, curve_id, true)) return p;
    }
    throw InternalError("no general point found on the unisecant after 64 draws");
  }

  if (cv->cls.c[0] == 0) {
    // a single fibre: the equation is linear in (s, t)
    Rat al = cv->geom->coeff(Expo{1, 0, 0, 0});
    Rat be = cv->geom->coeff(Expo{0, 1, 0, 0});
    Poly lin = Poly::variable(4, 0).scaled(al) + Poly::variable(4, 1).scaled(be);
    need(!(al == 0 && be == 0) && (*cv->geom - lin).is_zero(),
         "fibre draws need a linear fibre equation");
    Rat s0 = -be, t0 = al;
    for (int tries = 0; tries < 64; ++tries) {
      Rat r = rng_.next_rat();
      std::vector<Rat> p = {s0, t0, r, Rat(1)};
      if (!draw_clashes(t, p, curve_id, false)) return p;
    }
    throw InternalError("no general point found on the fibre after 64 draws");
  }

  need(false, "unsupported curve class for point drawing");
  return {};
}

Rat PointDrawer::fresh_value() { return rng_.next_rat(); }

PointId fresh_point_id(const Triple& t) {
  PointId mx = -1;
  for (PointId q : t.model.tree().all()) mx = std::max(mx, q);
  return mx + 1;
}

// ------------------------------------------------------------ step wrappers

WordResult blow_up(const Triple& t, PointId q, const Position& pos) {
  StepBlowUp st;
  st.point = q;
  st.pos = pos;
  return {apply_step(t, st), {BirationalStep{st}}};
}

WordResult elementary(const Triple& t, PointId p, const Position& pos, bool second_ruling) {
  StepElementary st;
  st.point = p;
  st.pos = pos;
  st.image = fresh_point_id(t);
  if (st.image <= p) st.image = p + 1;
  st.second_ruling = second_ruling;
  return {apply_step(t, st), {BirationalStep{st}}};
}

WordResult quadratic_map(const Triple& t, PointId a, PointId b, PointId c) {
  WordResult r{t, {}};
  for (PointId x : {a, b, c}) {
    if (r.triple.model.is_blown(x)) continue;
    need(r.triple.model.tree().contains(x), "rebase point must be marked first");
    StepBlowUp st;
    st.point = x;
    st.pos = r.triple.model.tree().node(x).pos;
    r.triple = apply_step(r.triple, st);
    r.steps.push_back(st);
  }
  StepQuadratic q;
  q.a = a;
  q.b = b;
  q.c = c;
  r.triple = apply_step(r.triple, q);
  r.steps.push_back(q);
  return r;
}

// -------------------------------------------------------------- contraction

namespace {

std::optional<PointId> pure_exceptional_of(const Model& m, const DivisorClass& cls) {
  for (PointId q : m.blown())
    if (cls == m.e_of(q)) return q;
  return std::nullopt;
}

// does `q` carry deeper blow-ups, which no rebase can move
bool has_blown_below(const Model& m, PointId q) {
  for (PointId w : m.tree().subtree(q))
    if (w != q && m.is_blown(w)) return true;
  return false;
}

// Tangent split test: two branches of one component eventually land on
// distinct points of some exceptional curve. One smooth branch stays a
// single point all the way down (a cusp of some order); two branches that
// share every tangent stay together for a while and then split (a
// tacnode). Verified against y^2 = x^3, x^4, x^5, x^6 by hand.
std::string twofold_kind(const Triple& after, int comp_id, PointId q) {
  Triple scratch = after;
  PointId at = q;
  for (int depth = 0; depth < 64; ++depth) {
    {
      Triple probe = scratch;
      PointId x = probe.model.tree().add(PosOnCarrier{at, comp_id});
      try {
        (void)resolve_direction(probe, x);
      } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).find("more than one point") != std::string::npos)
          return depth == 0 ? "node" : "tacnode";
        throw;
      }
    }
    StepBlowUp st;
    st.point = at;
    st.pos = scratch.model.tree().node(at).pos;
    scratch = apply_step(scratch, st);
    PointId nxt = scratch.model.tree().add(PosOnCarrier{at, comp_id});
    const TrackedCurve* c = scratch.find(comp_id);
    must(c != nullptr && c->geom.has_value(), "component lost during branch analysis");
    if (curve_mult_at(scratch, *c, nxt) <= 1) return "cusp";
    at = nxt;
  }
  must(false, "branch analysis did not terminate");
  return {};
}

std::string image_kind(const Triple& after, PointId image, bool in_boundary, const Rat& eps) {
  if (!in_boundary) return "off-boundary";
  if (eps == -1) return "isolated";
  if (eps == 0) return "terminal";
  if (eps >= 2) return "multiple";
  must(eps == 1, "a curve in the boundary has self-pairing at least -1 with it");
  struct Branch {
    int id;
    int mult;
    bool has_geom;
  };
  std::vector<Branch> at;
  bool missing_geom = false;
  for (const TrackedCurve& b : after.boundary) {
    int mu = 0;
    bool has_geom = b.geom.has_value();
    if (has_geom) {
      mu = curve_mult_at(after, b, image);
    } else if (auto w = pure_exceptional_of(after.model, b.cls)) {
      mu = exceptional_mult_at(after.model, *w, image);
    } else if (b.strict && b.cls.is_integral() && !b.cls.is_zero()) {
      // no equation and no proximity data: the local shape is out of reach
      missing_geom = true;
      continue;
    } else {
      continue;
    }
    if (mu > 0) at.push_back({b.id, mu, has_geom});
  }
  int total = 0;
  for (const Branch& x : at) total += x.mult;
  if (total > 2) must(false, "boundary multiplicity at the image exceeds the pairing");
  if (total < 2) {
    need(!missing_geom, "boundary components need equations to classify the image point");
    must(false, "boundary multiplicity at the image does not match the pairing");
  }
  for (const Branch& x : at)
    need(x.has_geom, "boundary components need equations to classify the image point");
  if (at.size() == 2) {
    auto dir = [&](int cid) {
      Triple probe = after;
      PointId x = probe.model.tree().add(PosOnCarrier{image, cid});
      return resolve_direction(probe, x);
    };
    auto [a1, b1] = dir(at[0].id);
    auto [a2, b2] = dir(at[1].id);
    return a1 * b2 - a2 * b1 != 0 ? "node" : "tacnode";
  }
  // one component of multiplicity two: look at its tangent first
  {
    Triple probe = after;
    PointId x = probe.model.tree().add(PosOnCarrier{image, at[0].id});
    try {
      (void)resolve_direction(probe, x);
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).find("more than one point") != std::string::npos)
        return "node";
      throw;
    }
  }
  return twofold_kind(after, at[0].id, image);
}

}  // namespace

ContractOutcome contract(const Triple& t, int curve_id, PointDrawer& draw) {
  const TrackedCurve* cv0 = t.find(curve_id);
  need(cv0 != nullptr, "contract: unknown curve id");
  need(cv0->strict, "contract: numerical pencil classes have no curve to contract");
  need(cv0->cls.is_integral(), "contract: fractional class");
  {
    const PicLattice lat = t.model.lattice();
    need(lat.self(cv0->cls) == -1 && lat.pair(cv0->cls, lat.canonical()) == -1,
         "contract: the class is not a (-1)-curve");
  }
  bool in_boundary = false;
  for (const TrackedCurve& b : t.boundary)
    if (b.id == curve_id) in_boundary = true;

  ContractOutcome out{t, {}, {}};
  out.report.curve_id = curve_id;
  out.report.name = cv0->name;
  out.report.epsilon = t.model.lattice().pair(cv0->cls, t.divisor());

  Triple cur = t;
  std::vector<BirationalStep> word;
  auto push = [&](WordResult&& w) {
    cur = std::move(w.triple);
    for (BirationalStep& s : w.steps) word.push_back(std::move(s));
  };

  PointId image = -1;
  for (int guard = 0;; ++guard) {
    must(guard < 64, "contraction word did not terminate");
    const TrackedCurve* cv = cur.find(curve_id);
    must(cv != nullptr, "curve lost before its contraction");
    const Model& m = cur.model;

    if (auto q = pure_exceptional_of(m, cv->cls)) {
      StepContractLeaf st;
      st.point = *q;
      cur = apply_step(cur, st);
      word.push_back(st);
      image = *q;
      break;
    }

    if (m.mother() == MotherKind::Hirzebruch) {
      if (m.fn() == 1) {
        // read the model as a plane; vertical classes become H - e - e,
        // the negative section becomes a plain exceptional class
        StepSwitchToPlane st;
        st.z = fresh_point_id(cur);
        cur = apply_step(cur, st);
        word.push_back(st);
      } else {
        // an elementary transformation at a general point moves the index
        // toward one without touching any (-1)-class shape
        auto g = draw.general_point(cur);
        push(elementary(cur, fresh_point_id(cur), PosProper{g}));
      }
      continue;
    }

    // plane model
    const PicLattice lat = m.lattice();
    long d = rat_int(cv->cls.c[0]);
    need(d >= 1, "contract: the class is not effective on this model");

    struct Base {
      long mult;
      PointId q;
      std::vector<Rat> anchor;
    };
    std::vector<Base> cands;
    for (int i = 0; i < lat.points(); ++i) {
      Rat mi = lat.mult_at(cv->cls, i);
      if (mi <= 0) continue;
      PointId q = m.blown()[i];
      if (m.tree().depth(q) != 0) continue;
      if (has_blown_below(m, q)) continue;
      auto* pp = std::get_if<PosProper>(&m.tree().node(q).pos);
      if (!pp) continue;
      cands.push_back({rat_int(mi), q, norm_groups(m, pp->coords)});
    }
    std::sort(cands.begin(), cands.end(), [](const Base& x, const Base& y) {
      return x.mult != y.mult ? x.mult > y.mult : x.q < y.q;
    });

    if (d == 1) {
      need(cands.size() == 2 && cands[0].mult == 1 && cands[1].mult == 1,
           "contract: a degree-one (-1)-class needs two simple proper base points");
      PointId A = cands[0].q, B = cands[1].q;
      bool done = false;
      for (PointId w : m.blown()) {
        if (done || w == A || w == B) continue;
        if (m.tree().depth(w) != 0 || has_blown_below(m, w)) continue;
        auto* pp = std::get_if<PosProper>(&m.tree().node(w).pos);
        if (!pp) continue;
        if (det3(cands[0].anchor, cands[1].anchor, norm_groups(m, pp->coords)) == 0) continue;
        try {
          push(quadratic_map(cur, A, B, w));
          done = true;
        } catch (const std::invalid_argument&) {
        }
      }
      for (int k = 0; !done && k < 8; ++k) {
        auto g = draw.general_point(cur);
        PointId w = fresh_point_id(cur);
        try {
          WordResult w1 = blow_up(cur, w, PosProper{g});
          WordResult w2 = quadratic_map(w1.triple, A, B, w);
          push(std::move(w1));
          push(std::move(w2));
          done = true;
        } catch (const std::invalid_argument&) {
        }
      }
      need(done, "contract: could not place a third rebase point");
      continue;
    }

    // degree two and up: rebase at a maximal-multiplicity triple; the
    // degree drops by m_a + m_b + m_c - d > 0 each round
    bool done = false;
    for (size_t i = 0; i < cands.size() && !done; ++i)
      for (size_t j = i + 1; j < cands.size() && !done; ++j)
        for (size_t k = j + 1; k < cands.size() && !done; ++k) {
          if (cands[i].mult + cands[j].mult + cands[k].mult <= d) continue;
          if (det3(cands[i].anchor, cands[j].anchor, cands[k].anchor) == 0) continue;
          try {
            push(quadratic_map(cur, cands[i].q, cands[j].q, cands[k].q));
            done = true;
          } catch (const std::invalid_argument&) {
          }
        }
    need(done, "contract: no rebase triple in general position");
  }

  out.report.image = image;
  out.report.kind = image_kind(cur, image, in_boundary, out.report.epsilon);
  out.triple = std::move(cur);
  out.steps = std::move(word);
  return out;
}

// ------------------------------------------------------------- small models

namespace {

// one pass: the lowest-id tracked (-1)-curve with C.D <= 1, or failing
// that a pure exceptional class with the same bound
bool small_model_pass(SmallModelOutcome& out, PointDrawer& draw) {
  const Model& m = out.triple.model;
  const PicLattice lat = m.lattice();
  DivisorClass D = out.triple.divisor();
  DivisorClass K = lat.canonical();

  std::vector<const TrackedCurve*> cand;
  for (const TrackedCurve& b : out.triple.boundary) cand.push_back(&b);
  for (const TrackedCurve& a : out.triple.aux) cand.push_back(&a);
  std::sort(cand.begin(), cand.end(),
            [](const TrackedCurve* x, const TrackedCurve* y) { return x->id < y->id; });
  for (const TrackedCurve* cv : cand) {
    if (!cv->strict || !cv->cls.is_integral()) continue;
    if (lat.self(cv->cls) != -1 || lat.pair(cv->cls, K) != -1) continue;
    if (lat.pair(cv->cls, D) > 1) continue;
    try {
      ContractOutcome co = contract(out.triple, cv->id, draw);
      out.triple = std::move(co.triple);
      for (BirationalStep& s : co.steps) out.steps.push_back(std::move(s));
      out.contracted.push_back(std::move(co.report));
      return true;
    } catch (const std::invalid_argument&) {
      // not realizable as placed (riders, irrational data); try the next one
    }
  }

  for (PointId q : m.blown()) {
    bool rider = false;
    for (PointId w : m.blown())
      if (w != q && m.proximate(w, q)) rider = true;
    if (rider) continue;
    DivisorClass eq = m.e_of(q);
    if (lat.pair(eq, D) > 1) continue;
    StepContractLeaf st;
    st.point = q;
    Triple nxt = apply_step(out.triple, st);
    ContractReport rep;
    rep.curve_id = -1;
    rep.name = "e" + std::to_string(q);
    rep.epsilon = lat.pair(eq, D);
    rep.image = q;
    rep.kind = image_kind(nxt, q, false, rep.epsilon);
    out.triple = std::move(nxt);
    out.steps.push_back(st);
    out.contracted.push_back(std::move(rep));
    return true;
  }
  return false;
}

}  // namespace

SmallModelOutcome small_model(const Triple& t, PointDrawer& draw) {
  SmallModelOutcome out{t, {}, {}};
  for (int guard = 0;; ++guard) {
    must(guard < 256, "small model search did not terminate");
    if (!small_model_pass(out, draw)) break;
  }
  return out;
}

SmallModelOutcome almost_minimalize(const Triple& t, PointDrawer& draw) {
  SmallModelOutcome out;
  out.triple = t;
  for (int guard = 0;; ++guard) {
    must(guard < 256, "almost-minimal search did not terminate");
    DualGraph g = config_of(out.triple);
    Bark bk = bark(g);
    const Model& m = out.triple.model;
    std::vector<TrackedClass> extra;
    for (const TrackedCurve& a : out.triple.aux)
      if (a.strict && a.cls.is_integral()) extra.push_back({a.name, a.cls});
    for (PointId q : m.blown())
      extra.push_back({"e" + std::to_string(q), m.strict_exceptional(q)});
    auto off = almost_minimal_offender(g, bk, extra);
    if (!off) break;

    if (off->vert) {
      ContractOutcome co = contract(out.triple, g.comp(*off->vert).id, draw);
      out.triple = std::move(co.triple);
      for (BirationalStep& s : co.steps) out.steps.push_back(std::move(s));
      out.contracted.push_back(std::move(co.report));
      continue;
    }
    const TrackedCurve* ax = nullptr;
    for (const TrackedCurve& a : out.triple.aux)
      if (a.strict && a.cls == off->cls && (!ax || a.id < ax->id)) ax = &a;
    if (ax) {
      ContractOutcome co = contract(out.triple, ax->id, draw);
      out.triple = std::move(co.triple);
      for (BirationalStep& s : co.steps) out.steps.push_back(std::move(s));
      out.contracted.push_back(std::move(co.report));
      continue;
    }
    bool acted = false;
    for (PointId q : m.blown()) {
      if (m.strict_exceptional(q) != off->cls) continue;
      const PicLattice lat = m.lattice();
      StepContractLeaf st;
      st.point = q;
      Triple nxt = apply_step(out.triple, st);
      ContractReport rep;
      rep.curve_id = -1;
      rep.name = off->name;
      rep.epsilon = lat.pair(off->cls, out.triple.divisor());
      rep.image = q;
      rep.kind = image_kind(nxt, q, false, rep.epsilon);
      out.triple = std::move(nxt);
      out.steps.push_back(st);
      out.contracted.push_back(std::move(rep));
      acted = true;
      break;
    }
    must(acted, "offender class not realizable from the tracked data");
  }
  return out;
}

// ------------------------------------------------------------ De Jonquieres

namespace {

struct BinRoot {
  Rat s, t;
  int mult;
};

// divisors of |n|, when n factors over primes up to 10^6 with at most one
// larger prime cofactor; the honest failure mode is "cannot factor"
std::optional<std::vector<Int>> divisors_of(Int n) {
  if (n < 0) n = -n;
  must(n != 0, "divisors of zero requested");
  std::map<Int, int> fac;
  for (Int p = 2; p * p <= n; p = (p == 2 ? Int(3) : p + 2)) {
    if (p > 1000000) break;
    while (n % p == 0) {
      ++fac[p];
      n /= p;
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) return std::nullopt;
    ++fac[n];
  }
  std::vector<Int> divs = {Int(1)};
  for (const auto& [p, e] : fac) {
    size_t base = divs.size();
    Int pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (size_t j = 0; j < base; ++j) {
        divs.push_back(divs[j] * pk);
        if (divs.size() > 4096) return std::nullopt;
      }
    }
  }
  return divs;
}

// rational roots, with multiplicity, of the binary form sum a[i] s^i t^(D-i);
// nullopt when the form has a factor we cannot split rationally
std::optional<std::vector<BinRoot>> binary_rational_roots(const std::vector<Rat>& a) {
  int D = static_cast<int>(a.size()) - 1;
  std::vector<BinRoot> out;
  int lo = 0;
  while (lo <= D && a[lo] == 0) ++lo;
  must(lo <= D, "the zero form has no root data");
  int hi = D;
  while (a[hi] == 0) --hi;
  if (lo > 0) out.push_back({Rat(0), Rat(1), lo});
  if (hi < D) out.push_back({Rat(1), Rat(0), D - hi});
  int deg = hi - lo;
  if (deg == 0) return out;

  Int den = 1;
  for (int i = lo; i <= hi; ++i) {
    Int l;
    mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), a[i].get_den().get_mpz_t());
    den = l;
  }
  std::vector<Rat> poly(deg + 1);
  for (int i = 0; i <= deg; ++i) poly[i] = a[lo + i] * Rat(den);

  auto d0 = divisors_of(poly[0].get_num());
  auto dl = divisors_of(poly[deg].get_num());
  if (!d0 || !dl) return std::nullopt;
  if (d0->size() * dl->size() > 100000) return std::nullopt;
  std::set<Rat> cands;
  for (const Int& p : *d0)
    for (const Int& q : *dl) {
      cands.insert(Rat(p) / Rat(q));
      cands.insert(Rat(-p) / Rat(q));
    }

  for (const Rat& r : cands) {
    int mult = 0;
    while (poly.size() > 1) {
      Rat v = 0;
      for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) v = v * r + poly[i];
      if (v != 0) break;
      std::vector<Rat> q(poly.size() - 1);
      Rat acc = poly.back();
      for (int i = static_cast<int>(poly.size()) - 2; i >= 1; --i) {
        q[i] = acc;
        acc = poly[i] + r * acc;
      }
      q[0] = acc;
      poly = std::move(q);
      ++mult;
    }
    if (mult > 0) out.push_back({r, Rat(1), mult});
    if (poly.size() == 1) break;
  }
  if (poly.size() > 1) return std::nullopt;
  return out;
}

// order of the largest protected cluster (points grouped by root ancestor)
int protected_order(const Triple& t) {
  std::map<PointId, int> cnt;
  for (PointId q : t.protect) {
    if (!t.model.tree().contains(q)) continue;
    PointId r = q;
    while (auto p = t.model.tree().parent(r)) r = *p;
    ++cnt[r];
  }
  int mx = 0;
  for (const auto& [r, c] : cnt) mx = std::max(mx, c);
  return mx;
}

}  // namespace

WordResult dejonquieres_f1(const Triple& t, int carrier_id, PointDrawer& draw) {
  need(t.model.mother() == MotherKind::Hirzebruch && t.model.fn() == 1,
       "the net construction needs an index-one ruled model");
  need(t.model.blown().empty(), "the net construction needs a relatively minimal model");
  const TrackedCurve* cv = t.find(carrier_id);
  need(cv != nullptr && cv->strict && cv->geom.has_value(),
       "carrier must be tracked with an equation");
  need(cv->cls.c.size() == 2 && cv->cls.c[0] == 1, "carrier must be a unisecant");
  long d = rat_int(cv->cls.c[1]);
  need(d >= 2, "carrier is already a line");

  // where the carrier meets the negative section: the roots of the x-part
  std::vector<Rat> acoef(d, Rat(0));
  for (int i = 0; i < d; ++i) acoef[i] = cv->geom->coeff(Expo{i, static_cast<int>(d) - 1 - i, 1, 0});
  bool azero = std::all_of(acoef.begin(), acoef.end(), [](const Rat& x) { return x == 0; });
  need(!azero, "carrier contains the negative section");
  auto roots = binary_rational_roots(acoef);
  need(roots.has_value(),
       "a base point of the reduction is not rational over the coefficients "
       "(or its coordinates could not be isolated exactly)");
  {
    int s = 0;
    for (const BinRoot& r : *roots) s += r.mult;
    must(s == d - 1, "root multiplicities do not add up to the section pairing");
  }

  // chain plan: every chain outruns the largest protected cluster, the
  // total weight reaches the carrier degree, and the raises come early
  // enough that no contraction is asked of an index-zero model
  struct Chain {
    Rat s, t;
    int n;
    long k;
  };
  std::vector<Chain> chains;
  for (const BinRoot& r : *roots) chains.push_back({r.s, r.t, r.mult, 0});
  std::sort(chains.begin(), chains.end(), [](const Chain& x, const Chain& y) {
    if (x.n != y.n) return x.n > y.n;
    if (x.s != y.s) return x.s < y.s;
    return x.t < y.t;
  });
  const int korder = protected_order(t);
  long sum_front = 0;
  for (size_t j = 0; j + 1 < chains.size(); ++j) {
    chains[j].k = std::max<long>(0, korder + 1 - chains[j].n);
    sum_front += chains[j].k;
  }
  Chain& last = chains.back();
  last.k = std::max<long>(std::max<long>(0, korder + 1 - last.n), d - sum_front);
  long m = sum_front + last.k + 1;
  long fills = m - d;
  auto feasible = [&]() {
    long idx = 1 + fills;
    for (const Chain& ch : chains) {
      idx += ch.n;
      if (idx < ch.k) return false;
      idx -= ch.k;
    }
    must(idx == 1, "net word bookkeeping is off balance");
    return true;
  };
  for (int guard = 0; !feasible(); ++guard) {
    must(guard < 512, "net plan did not stabilize");
    ++last.k;
    ++m;
    ++fills;
  }
  must(m > d, "net degree must exceed the carrier degree");

  Triple cur = t;
  std::vector<BirationalStep> word;
  auto push = [&](WordResult&& w) {
    cur = std::move(w.triple);
    for (BirationalStep& s : w.steps) word.push_back(std::move(s));
  };

  // general points of the negative section first: they raise the index and
  // buffer the contractions the chains ask for later
  for (long i = 0; i < fills; ++i) {
    Triple tmp = cur;
    TrackedCurve eaux;
    eaux.id = tmp.fresh_curve_id();
    eaux.name = "@section";
    eaux.cls = tmp.model.lattice().E();
    eaux.geom = Poly::variable(4, 3);
    tmp.aux.push_back(eaux);
    auto p = draw.general_point_on(tmp, eaux.id);
    push(elementary(cur, fresh_point_id(cur), PosProper{p}));
  }

  for (const Chain& ch : chains) {
    for (long step = 0; step < ch.n + ch.k; ++step) {
      const TrackedCurve* c = cur.find(carrier_id);
      must(c != nullptr && c->geom.has_value(), "carrier lost its equation mid-word");
      std::vector<Poly> imgs = {Poly::constant(4, ch.s), Poly::constant(4, ch.t),
                                Poly::variable(4, 2), Poly::variable(4, 3)};
      Poly rest = c->geom->subst(imgs);
      Rat a0 = rest.coeff(Expo{0, 0, 1, 0});
      Rat b0 = rest.coeff(Expo{0, 0, 0, 1});
      need(!(a0 == 0 && b0 == 0), "carrier contains a fibre of the plan");
      bool on_section = a0 == 0;
      must(on_section == (step < ch.n),
           "chain tangency does not match the root multiplicity");
      std::vector<Rat> base = {ch.s, ch.t, -b0, a0};
      push(elementary(cur, fresh_point_id(cur), PosProper{base}));
    }
  }

  must(cur.model.mother() == MotherKind::Hirzebruch && cur.model.fn() == 1,
       "net word did not come back to index one");
  must(cur.model.blown().empty(), "net word left points blown up");
  {
    const TrackedCurve* c = cur.find(carrier_id);
    must(c != nullptr, "carrier lost by the net word");
    must(c->cls.c[0] == 1 && c->cls.c[1] == 1, "carrier degree did not drop to one");
  }
  StepSwitchToPlane sw;
  sw.z = fresh_point_id(cur);
  cur = apply_step(cur, sw);
  word.push_back(sw);
  {
    const TrackedCurve* c = cur.find(carrier_id);
    must(c != nullptr && c->cls.c[0] == 1, "carrier is not a line on the plane model");
    for (size_t i = 1; i < c->cls.c.size(); ++i)
      must(c->cls.c[i] == 0, "carrier picked up a base point it should not have");
  }
  must(!blows_up_cluster(word, t.protect), "net word touched the protected cluster");
  return {std::move(cur), std::move(word)};
}

WordResult dejonquieres(const Triple& t, int carrier_id, PointId centre, PointDrawer& draw) {
  need(t.model.mother() == MotherKind::Plane, "plane model required");
  const TrackedCurve* cv = t.find(carrier_id);
  need(cv != nullptr && cv->strict && cv->geom.has_value(),
       "carrier must be tracked with an equation");
  need(t.model.tree().contains(centre), "unknown centre point");

  Triple cur = t;
  std::vector<BirationalStep> word;
  if (!cur.model.is_blown(centre)) {
    need(cur.model.tree().depth(centre) == 0, "centre must be a proper point");
    StepBlowUp st;
    st.point = centre;
    st.pos = cur.model.tree().node(centre).pos;
    cur = apply_step(cur, st);
    word.push_back(st);
  }
  need(cur.model.blown().size() == 1,
       "the plane model must have no blown-up points besides the centre");
  {
    const PicLattice lat = cur.model.lattice();
    const TrackedCurve* c2 = cur.find(carrier_id);
    long dd = rat_int(c2->cls.c[0]);
    need(dd >= 2, "carrier must have degree at least two");
    need(lat.mult_at(c2->cls, *cur.model.slot_of(centre)) == Rat(dd - 1),
         "centre multiplicity must be one less than the carrier degree");
  }
  StepSwitchToF1 sw;
  sw.z = centre;
  cur = apply_step(cur, sw);
  word.push_back(sw);

  WordResult rest = dejonquieres_f1(cur, carrier_id, draw);
  for (BirationalStep& s : rest.steps) word.push_back(std::move(s));
  return {std::move(rest.triple), std::move(word)};
}

// ------------------------------------------------------------------- Fujita

FujitaReport fujita_threshold(const Triple& t, const DivisorClass& e_cls, int m_max) {
  need(m_max >= 0, "threshold bound must be nonnegative");
  const PicLattice lat = t.model.lattice();
  need(static_cast<int>(e_cls.c.size()) == lat.rank(), "class written in the wrong basis");

  FujitaReport rep;
  DivisorClass D = t.divisor();
  if (lat.pair(D, e_cls) >= 2) {
    std::vector<GraphComponent> comps;
    for (const TrackedCurve& b : t.boundary) comps.push_back({b.id, b.name, b.cls});
    comps.push_back({t.fresh_curve_id(), "E", e_cls});
    try {
      DualGraph g(lat, comps);
      rep.claim_applies = g.is_one_connected();
      rep.claim_checked = true;
    } catch (const std::invalid_argument&) {
      // not a configuration we can enumerate (too many components, or E
      // is not an honest extra component here)
      rep.claim_checked = false;
      rep.claim_applies = false;
    }
  }

  DivisorClass kd = dc_add(lat.canonical(), D);
  std::optional<int> best;
  int h_at_max = 0;
  for (int mm = 0; mm <= m_max; ++mm) {
    DivisorClass cls = dc_add(e_cls, dc_scale(Rat(mm), kd));
    int h = h0_oracle(t, cls);
    if (h > 0) best = mm;
    if (mm == m_max) h_at_max = h;
  }
  if (best.has_value() && *best == m_max && h_at_max > 0) {
    rep.exhausted = true;
  } else {
    rep.m = best;
  }
  rep.claim_ok =
      rep.claim_applies && ((rep.m.has_value() && *rep.m >= 1) || (rep.exhausted && m_max >= 1));
  return rep;
}

// ------------------------------------------------------------ step-log JSON

namespace {

json rat_list(const std::vector<Rat>& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(rat_str(x));
  return a;
}

json pos_to_json(const Position& p) {
  json j;
  if (auto* pp = std::get_if<PosProper>(&p)) {
    j["kind"] = "proper";
    j["coords"] = rat_list(pp->coords);
  } else if (auto* oc = std::get_if<PosOnCarrier>(&p)) {
    j["kind"] = "on_carrier";
    j["parent"] = oc->parent;
    j["carrier"] = oc->carrier;
  } else if (auto* dr = std::get_if<PosDirection>(&p)) {
    j["kind"] = "direction";
    j["parent"] = dr->parent;
    j["alpha"] = rat_str(dr->alpha);
    j["beta"] = rat_str(dr->beta);
  } else if (auto* g = std::get_if<PosGeneric>(&p)) {
    j["kind"] = "generic";
    j["parent"] = g->parent;
    if (g->drawn) j["drawn"] = rat_str(*g->drawn);
  }
  return j;
}

Position pos_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "proper") {
    PosProper p;
    for (const auto& s : j.at("coords")) p.coords.push_back(rat_parse(s.get<std::string>()));
    return p;
  }
  if (kind == "on_carrier") {
    PosOnCarrier p;
    p.parent = j.at("parent").get<int>();
    p.carrier = j.at("carrier").get<int>();
    return p;
  }
  if (kind == "direction") {
    PosDirection p;
    p.parent = j.at("parent").get<int>();
    p.alpha = rat_parse(j.at("alpha").get<std::string>());
    p.beta = rat_parse(j.at("beta").get<std::string>());
    return p;
  }
  if (kind == "generic") {
    PosGeneric p;
    p.parent = j.at("parent").get<int>();
    if (j.contains("drawn")) p.drawn = rat_parse(j.at("drawn").get<std::string>());
    return p;
  }
  throw std::invalid_argument("unknown position kind: " + kind);
}

json step_to_json(const BirationalStep& s) {
  json j;
  j["op"] = step_name(s);
  if (auto* b = std::get_if<StepBlowUp>(&s)) {
    j["point"] = b->point;
    j["pos"] = pos_to_json(b->pos);
  } else if (auto* c = std::get_if<StepContractLeaf>(&s)) {
    j["point"] = c->point;
  } else if (auto* q = std::get_if<StepQuadratic>(&s)) {
    j["a"] = q->a;
    j["b"] = q->b;
    j["c"] = q->c;
  } else if (auto* e = std::get_if<StepElementary>(&s)) {
    j["point"] = e->point;
    j["pos"] = pos_to_json(e->pos);
    j["image"] = e->image;
    j["second_ruling"] = e->second_ruling;
  } else if (auto* sp = std::get_if<StepSwitchToPlane>(&s)) {
    j["z"] = sp->z;
  } else if (auto* sf = std::get_if<StepSwitchToF1>(&s)) {
    j["z"] = sf->z;
  }
  return j;
}

BirationalStep step_from_json(const json& j) {
  try {
    std::string op = j.at("op").get<std::string>();
    if (op == "blow_up") {
      StepBlowUp s;
      s.point = j.at("point").get<int>();
      s.pos = pos_from_json(j.at("pos"));
      return s;
    }
    if (op == "contract_leaf") {
      StepContractLeaf s;
      s.point = j.at("point").get<int>();
      return s;
    }
    if (op == "quadratic") {
      StepQuadratic s;
      s.a = j.at("a").get<int>();
      s.b = j.at("b").get<int>();
      s.c = j.at("c").get<int>();
      return s;
    }
    if (op == "elementary") {
      StepElementary s;
      s.point = j.at("point").get<int>();
      s.pos = pos_from_json(j.at("pos"));
      s.image = j.at("image").get<int>();
      s.second_ruling = j.at("second_ruling").get<bool>();
      return s;
    }
    if (op == "switch_to_plane") {
      StepSwitchToPlane s;
      s.z = j.at("z").get<int>();
      return s;
    }
    if (op == "switch_to_f1") {
      StepSwitchToF1 s;
      s.z = j.at("z").get<int>();
      return s;
    }
    throw std::invalid_argument("unknown step op: " + op);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad step record: ") + e.what());
  }
}

json boundary_snapshot(const Triple& t) {
  json snap = json::object();
  std::set<std::string> seen;
  for (const TrackedCurve& b : t.boundary) {
    std::string key = b.name;
    if (key.empty() || seen.count(key)) key += "#" + std::to_string(b.id);
    seen.insert(key);
    snap[key] = rat_list(b.cls.c);
  }
  return snap;
}

}  // namespace

std::string steps_to_json(const Triple& initial, const std::vector<BirationalStep>& steps) {
  Triple cur = initial;
  json arr = json::array();
  for (const BirationalStep& s : steps) {
    json rec = step_to_json(s);
    cur = apply_step(cur, s);
    rec["after"] = json{{"boundary", boundary_snapshot(cur)}};
    arr.push_back(std::move(rec));
  }
  json root;
  root["format"] = "logsurf-steps/1";
  root["steps"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::vector<BirationalStep> steps_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bad step log: ") + e.what());
  }
  need(j.is_object() && j.contains("steps") && j["steps"].is_array(),
       "step log needs a steps array");
  std::vector<BirationalStep> out;
  for (const json& rec : j["steps"]) out.push_back(step_from_json(rec));
  return out;
}

Triple replay_steps(const Triple& initial, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bad step log: ") + e.what());
  }
  need(j.is_object() && j.contains("steps") && j["steps"].is_array(),
       "step log needs a steps array");
  Triple cur = initial;
  int i = 0;
  for (const json& rec : j["steps"]) {
    BirationalStep s = step_from_json(rec);
    cur = apply_step(cur, s);
    need(rec.contains("after"), "step record is missing its snapshot");
    json snap = json{{"boundary", boundary_snapshot(cur)}};
    need(snap.dump() == rec.at("after").dump(),
         "replay mismatch at step " + std::to_string(i) + " (" + step_name(s) + ")");
    ++i;
  }
  return cur;
}

}  // namespace logsurf
