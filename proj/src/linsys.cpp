#include "logsurf/linsys.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <future>
#include <set>
#include <stdexcept>
#include <thread>

#include "logsurf/errors.hpp"
#include "logsurf/linalg.hpp"

namespace logsurf {

namespace {

void need(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void must(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

long int_of(const Rat& q, const char* what) {
  must(q.get_den() == 1, std::string(what) + " is not an integer");
  must(q.get_num().fits_slong_p(), std::string(what) + " does not fit a machine word");
  return q.get_num().get_si();
}

Rat rpow(const Rat& base, long e) {
  Rat r(1);
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

Rat binom(long n, long k) {
  if (k < 0 || k > n) return Rat(0);
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rat(b);
}

int mother_rank(const Model& m) { return m.mother() == MotherKind::Plane ? 1 : 2; }

std::vector<std::pair<int, int>> groups_of(const Model& m) {
  if (m.mother() == MotherKind::Plane) return {{0, 3}};
  return {{0, 2}, {2, 4}};
}

std::vector<Rat> norm_anchor(const Model& m, std::vector<Rat> v) {
  for (auto [lo, hi] : groups_of(m)) {
    int piv = -1;
    for (int i = lo; i < hi; ++i)
      if (v[i] != 0) {
        piv = i;
        break;
      }
    must(piv >= 0, "anchor has an all-zero coordinate group");
    Rat d = v[piv];
    for (int i = lo; i < hi; ++i) v[i] /= d;
  }
  return v;
}

// The truncated local expansion of one mother monomial at a proper anchor,
// in the same chart localize_at_proper uses: pivot = first nonzero
// coordinate per group, the other coordinates get the offset variables in
// ascending order. Only terms of total local degree < bound are produced.
LaurentBi truncated_local(const Model& m, const Expo& mono, const std::vector<Rat>& anchor,
                          int bound) {
  LaurentBi out;
  if (bound <= 0) return out;
  auto a = norm_anchor(m, anchor);
  std::vector<int> pivots;
  for (auto [lo, hi] : groups_of(m))
    for (int i = lo; i < hi; ++i)
      if (a[i] != 0) {
        pivots.push_back(i);
        break;
      }
  Rat cst(1);
  std::vector<int> freev;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (std::find(pivots.begin(), pivots.end(), i) != pivots.end())
      cst *= rpow(a[i], mono[i]);
    else
      freev.push_back(i);
  }
  must(freev.size() == 2, "local chart needs exactly two free directions");
  long e0 = mono[freev[0]], e1 = mono[freev[1]];
  const Rat &a0 = a[freev[0]], &a1 = a[freev[1]];
  for (long i = 0; i <= e0 && i < bound; ++i) {
    Rat ci = binom(e0, i) * rpow(a0, e0 - i) * cst;
    if (ci == 0) continue;
    for (long j = 0; j <= e1 && i + j < bound; ++j) {
      Rat cj = ci * binom(e1, j) * rpow(a1, e1 - j);
      if (cj != 0) out.add(static_cast<int>(i), static_cast<int>(j), cj);
    }
  }
  return out;
}

std::vector<Expo> mother_monomials(const Model& m, const DivisorClass& cls) {
  std::vector<Expo> out;
  if (m.mother() == MotherKind::Plane) {
    long d = int_of(cls.c[0], "degree");
    if (d < 0) return out;
    for (long i = 0; i <= d; ++i)
      for (long j = 0; j + i <= d; ++j)
        out.push_back(Expo{static_cast<int>(i), static_cast<int>(j), static_cast<int>(d - i - j)});
    return out;
  }
  long al = int_of(cls.c[0], "section degree");
  long be = int_of(cls.c[1], "fibre degree");
  long n = m.fn();
  if (al < 0) return out;
  for (long g = 0; g <= al; ++g) {
    long rem = be - n * g;
    if (rem < 0) continue;
    for (long aa = 0; aa <= rem; ++aa)
      out.push_back(Expo{static_cast<int>(aa), static_cast<int>(rem - aa), static_cast<int>(g),
                         static_cast<int>(al - g)});
  }
  return out;
}

// -------------------------------------------------- condition row planning

struct CNode {
  PointId q = -1;
  int mult = 0;    // virtual multiplicity asked at this point
  int drop = 0;    // exponent shifts accumulated above it
  int emitb = 0;   // rows cover local degrees < emitb
  int tbound = 0;  // expansion truncation; terms above never matter below
  int rowbase = 0;
  bool vertical = false;
  Rat v0;
  std::vector<int> kids;
};

struct CondPlan {
  std::vector<CNode> nodes;
  std::vector<std::pair<int, std::vector<Rat>>> roots;  // node index, anchor
  int total_rows = 0;
};

int rows_in(const CNode& n) {
  int span = n.emitb + n.drop;
  return span <= 0 ? 0 : span * (span + 1) / 2;
}

int row_offset(const CNode& n, int i, int j) {
  // i runs from -drop, each i contributes emitb - i slots
  long lead = 0;
  for (int x = -n.drop; x < i; ++x) lead += n.emitb - x;
  return static_cast<int>(lead) + j;
}

CondPlan build_plan(const Triple& t, const DivisorClass& cls) {
  const Model& m = t.model;
  CondPlan plan;
  std::map<PointId, int> mult_of;
  const auto& blown = m.blown();
  for (size_t i = 0; i < blown.size(); ++i)
    mult_of[blown[i]] = static_cast<int>(-int_of(cls.c[mother_rank(m) + i], "multiplicity"));

  std::function<int(PointId, int)> grow = [&](PointId q, int drop) -> int {
    CNode nd;
    nd.q = q;
    nd.mult = mult_of.at(q);
    nd.drop = drop;
    nd.emitb = std::max(nd.mult, 0);
    int idx = static_cast<int>(plan.nodes.size());
    plan.nodes.push_back(nd);
    int deepest = 0;
    for (PointId ch : m.tree().children(q)) {
      if (!m.is_blown(ch)) continue;
      auto dir = resolve_direction(t, ch);
      int ci = grow(ch, drop + plan.nodes[idx].mult);
      CNode& cn = plan.nodes[ci];
      if (dir.first == 0) {
        cn.vertical = true;
      } else {
        cn.vertical = false;
        cn.v0 = dir.second / dir.first;
      }
      plan.nodes[idx].kids.push_back(ci);
      deepest = std::max(deepest, plan.nodes[ci].tbound);
    }
    CNode& me = plan.nodes[idx];
    me.tbound = std::max(me.emitb, me.mult + deepest);
    return idx;
  };

  for (PointId q : blown) {
    if (m.tree().parent(q).has_value()) continue;
    auto* pp = std::get_if<PosProper>(&m.tree().node(q).pos);
    must(pp != nullptr, "blown root without proper coordinates");
    int idx = grow(q, 0);
    if (plan.nodes[idx].tbound > 0) plan.roots.push_back({idx, pp->coords});
  }
  for (auto& nd : plan.nodes) {
    nd.rowbase = plan.total_rows;
    plan.total_rows += rows_in(nd);
  }
  return plan;
}

int worker_count() {
  if (const char* s = std::getenv("LOGSURF_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1 && v <= 64) return static_cast<int>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  if (hc == 0) hc = 1;
  return static_cast<int>(std::min(hc, 8u));
}

int rank_for_oracle(const MatQ& a) {
  long cells = static_cast<long>(a.rows()) * a.cols();
  if (cells <= 20000) return rank_exact(a);
  int ra = rank_mod_p(a, kOraclePrimeA);
  int rb = rank_mod_p(a, kOraclePrimeB);
  if (ra != rb) return rank_exact(a);
  if (cells <= 80000) {
    // spot-check the modular shortcut against the rational answer
    DetRng rng((static_cast<std::uint64_t>(a.rows()) << 32) ^
               static_cast<std::uint64_t>(a.cols()) ^ 0x9e3779b97f4a7c15ULL);
    if (rng.next() % 100 == 0) {
      must(rank_exact(a) == ra, "modular rank failed its exact re-verification");
    }
  }
  return ra;
}

Poly line_through_pts(const std::vector<Rat>& p, const std::vector<Rat>& q) {
  std::vector<Rat> n = {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2],
                        p[0] * q[1] - p[1] * q[0]};
  Poly l(3);
  for (int i = 0; i < 3; ++i) {
    Expo e(3, 0);
    e[i] = 1;
    if (n[i] != 0) l.add_term(e, n[i]);
  }
  return l;
}

std::string class_key(const DivisorClass& c) {
  std::string k;
  for (auto& x : c.c) {
    k += rat_str(x);
    k += ',';
  }
  return k;
}

}  // namespace

LinSysSpec linsys_spec(const Model& m, const DivisorClass& cls) {
  need(cls.c.size() == static_cast<size_t>(mother_rank(m)) + m.blown().size(),
       "class does not fit the model");
  need(cls.is_integral(), "linear systems need integral classes");
  LinSysSpec s;
  s.cls = cls;
  s.mother.assign(cls.c.begin(), cls.c.begin() + mother_rank(m));
  for (size_t i = 0; i < m.blown().size(); ++i)
    s.mults[m.blown()[i]] = -cls.c[mother_rank(m) + i].get_num();
  return s;
}

Int virtual_dim(const PicLattice& lat, const DivisorClass& cls) {
  Rat v = (lat.self(cls) - lat.pair(cls, lat.canonical())) / 2;
  must(v.get_den() == 1, "virtual dimension came out fractional");
  return v.get_num();
}

DivisorClass unloaded(const Model& m, const DivisorClass& cls0) {
  need(cls0.is_integral(), "unloading needs an integral class");
  const PicLattice lat = m.lattice();
  DivisorClass cls = cls0;
  for (int guard = 0; guard < 200000; ++guard) {
    bool fired = false;
    for (PointId q : m.blown()) {
      DivisorClass eq = m.strict_exceptional(q);
      if (lat.pair(cls, eq) < 0) {
        cls = dc_sub(cls, eq);
        fired = true;
      }
    }
    if (!fired) return cls;
  }
  throw InternalError("unloading did not terminate");
}

int h0_oracle(const Triple& t, const DivisorClass& cls0) {
  const Model& m = t.model;
  const PicLattice lat = m.lattice();
  need(cls0.c.size() == lat.zero().c.size(), "class does not fit the model");
  need(cls0.is_integral(), "h0 needs an integral class");
  DivisorClass cls = unloaded(m, cls0);

  auto monos = mother_monomials(m, cls);
  if (monos.empty()) return 0;
  CondPlan plan = build_plan(t, cls);
  if (plan.total_rows == 0) return static_cast<int>(monos.size());

  MatQ a(plan.total_rows, static_cast<int>(monos.size()));
  // the second chart can leave terms with a negative direction exponent;
  // genuine members expand regularly at every stage, so those slots cancel
  // identically and carry no condition
  auto regular_below = [](const LaurentBi& f, int m) {
    LaurentBi r;
    for (auto& [ab, c] : f.t)
      if (ab.second >= 0 && ab.first + ab.second < m) r.add(ab.first, ab.second, c);
    return r;
  };
  std::function<void(int, const LaurentBi&, int)> emit = [&](int ni, const LaurentBi& lb,
                                                             int col) {
    const CNode& nd = plan.nodes[ni];
    for (auto& [key, cf] : regular_below(lb, nd.emitb).t)
      a.at(nd.rowbase + row_offset(nd, key.first, key.second), col) = cf;
    for (int ki : nd.kids) {
      const CNode& ch = plan.nodes[ki];
      LaurentBi down =
          ch.vertical ? lb_blowup_vertical(lb, nd.mult) : lb_blowup_main(lb, ch.v0, nd.mult);
      emit(ki, regular_below(down, ch.tbound), col);
    }
  };
  auto fill = [&](int lo, int hi) {
    for (int c = lo; c < hi; ++c)
      for (auto& [ni, anchor] : plan.roots)
        emit(ni, truncated_local(m, monos[c], anchor, plan.nodes[ni].tbound), c);
  };

  int ncols = static_cast<int>(monos.size());
  int w = std::min(worker_count(), ncols);
  if (w <= 1) {
    fill(0, ncols);
  } else {
    std::vector<std::future<void>> tasks;
    int chunk = (ncols + w - 1) / w;
    for (int lo = 0; lo < ncols; lo += chunk)
      tasks.push_back(
          std::async(std::launch::async, fill, lo, std::min(lo + chunk, ncols)));
    for (auto& f : tasks) f.get();
  }
  return ncols - rank_for_oracle(a);
}

// ------------------------------------------------------- splitting process

std::vector<SplitCandidate> splitting_candidates(const Triple& t) {
  const Model& m = t.model;
  const PicLattice lat = m.lattice();
  std::vector<SplitCandidate> out;
  std::set<std::string> seen;
  auto push = [&](int id, std::string name, const DivisorClass& cls) {
    if (!seen.insert(class_key(cls)).second) return;
    out.push_back({id, std::move(name), cls});
  };

  std::vector<const TrackedCurve*> tracked;
  for (auto* list : {&t.boundary, &t.aux})
    for (auto& cv : *list)
      if (cv.strict && cv.cls.is_integral() && !cv.cls.is_zero()) tracked.push_back(&cv);
  std::sort(tracked.begin(), tracked.end(),
            [](const TrackedCurve* x, const TrackedCurve* y) { return x->id < y->id; });
  int next_id = 0;
  for (auto* cv : tracked) {
    push(cv->id, cv->name.empty() ? "curve" + std::to_string(cv->id) : cv->name, cv->cls);
    next_id = std::max(next_id, cv->id + 1);
  }

  for (PointId q : m.blown())
    push(next_id++, "E_" + std::to_string(q), m.strict_exceptional(q));

  if (m.mother() != MotherKind::Plane) return out;

  std::vector<std::pair<PointId, std::vector<Rat>>> props;
  for (PointId q : m.blown())
    if (auto* pp = std::get_if<PosProper>(&m.tree().node(q).pos))
      props.push_back({q, norm_anchor(m, pp->coords)});

  auto honest_class = [&](const Poly& geom, int deg) -> std::optional<DivisorClass> {
    TrackedCurve probe{-1, "", lat.zero(), geom, std::nullopt, true};
    std::vector<std::pair<PointId, Rat>> mu;
    try {
      for (PointId q : m.blown()) {
        int v = curve_mult_at(t, probe, q);
        if (v != 0) mu.push_back({q, Rat(v)});
      }
    } catch (const std::invalid_argument&) {
      return std::nullopt;  // a direction in the way is not pinned down
    }
    return total_vs_proper(m, {Rat(deg)}, mu);
  };

  for (size_t i = 0; i < props.size(); ++i)
    for (size_t j = i + 1; j < props.size(); ++j) {
      Poly l = line_through_pts(props[i].second, props[j].second);
      if (l.is_zero()) continue;
      if (auto cls = honest_class(l, 1))
        push(next_id++,
             "line(" + std::to_string(props[i].first) + "," + std::to_string(props[j].first) + ")",
             *cls);
    }

  // conics through five of the points, while the subset count stays sane
  size_t np = props.size();
  if (np >= 5) {
    long count = 1;
    for (int k = 0; k < 5; ++k) count = count * static_cast<long>(np - k) / (k + 1);
    if (count <= 3000) {
      const std::vector<Expo> q2 = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                    {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
      std::vector<size_t> pick(5);
      std::function<void(size_t, size_t)> rec = [&](size_t from, size_t got) {
        if (got == 5) {
          MatQ rows(5, 6);
          for (int r = 0; r < 5; ++r) {
            const auto& p = props[pick[r]].second;
            for (int c = 0; c < 6; ++c)
              rows.at(r, c) = rpow(p[0], q2[c][0]) * rpow(p[1], q2[c][1]) * rpow(p[2], q2[c][2]);
          }
          auto ker = kernel_exact(rows);
          if (ker.size() != 1) return;
          Poly conic(3);
          for (int c = 0; c < 6; ++c)
            if (ker[0][c] != 0) conic.add_term(q2[c], ker[0][c]);
          // a reducible conic has singular symmetric matrix
          MatQ sym(3, 3);
          auto cf = [&](int c) { return conic.coeff(q2[c]); };
          sym.at(0, 0) = cf(0);
          sym.at(1, 1) = cf(3);
          sym.at(2, 2) = cf(5);
          sym.at(0, 1) = sym.at(1, 0) = cf(1) / 2;
          sym.at(0, 2) = sym.at(2, 0) = cf(2) / 2;
          sym.at(1, 2) = sym.at(2, 1) = cf(4) / 2;
          if (det_exact(sym) == 0) return;
          if (auto cls = honest_class(conic, 2)) {
            std::string nm = "conic(";
            for (int r = 0; r < 5; ++r)
              nm += (r ? "," : "") + std::to_string(props[pick[r]].first);
            push(next_id++, nm + ")", *cls);
          }
          return;
        }
        for (size_t x = from; x + (4 - got) < np; ++x) {
          pick[got] = x;
          rec(x + 1, got + 1);
        }
      };
      rec(0, 0);
    }
  }
  return out;
}

namespace {

Int forced_multiplicity(const PicLattice& lat, const DivisorClass& spec,
                        const DivisorClass& cls, const Rat& pairing) {
  Rat cc = lat.self(cls);
  if (!(cc < 0)) return Int(1);
  Rat ratio = pairing / cc;  // both negative, so positive
  Int k;
  mpz_cdiv_q(k.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
  (void)spec;
  return k;
}

}  // namespace

std::optional<SplitStep> split_once(const PicLattice& lat, const DivisorClass& spec,
                                    const std::vector<SplitCandidate>& pool) {
  for (const auto& cand : pool) {
    Rat pr = lat.pair(spec, cand.cls);
    if (!(pr < 0)) continue;
    Int k = forced_multiplicity(lat, spec, cand.cls, pr);
    DivisorClass res = dc_sub(spec, dc_scale(Rat(k), cand.cls));
    return SplitStep{cand.name, cand.cls, k, pr, res};
  }
  return std::nullopt;
}

SplitCertificate splitting_certificate(const Triple& t, const DivisorClass& spec,
                                       const std::vector<SplitCandidate>& pool, int max_steps) {
  const PicLattice lat = t.model.lattice();
  SplitCertificate cert;
  cert.start = spec;
  DivisorClass cur = spec;
  auto empty_reason = [&](const DivisorClass& c) -> std::optional<std::string> {
    if (t.model.mother() == MotherKind::Plane) {
      if (c.c[0] < 0) return "the degree went negative";
      return std::nullopt;
    }
    if (c.c[0] < 0 || c.c[1] < 0) return "the class meets a nef ruling class negatively";
    return std::nullopt;
  };

  int steps = 0;
  bool capped = false;
  for (;;) {
    if (auto r = empty_reason(cur)) {
      cert.verdict = SplitVerdict::Empty;
      cert.reason = *r;
      break;
    }
    if (capped) {
      cert.verdict = SplitVerdict::Inconclusive;
      break;
    }
    // everything forced against the residual at the start of this round
    // splits in this round, with the multiplicity it is forced at here
    DivisorClass snap = cur;
    std::vector<std::pair<size_t, Int>> round;
    for (size_t i = 0; i < pool.size(); ++i) {
      Rat pr = lat.pair(snap, pool[i].cls);
      if (pr < 0) round.push_back({i, forced_multiplicity(lat, snap, pool[i].cls, pr)});
    }
    if (round.empty()) {
      cert.verdict = SplitVerdict::Residual;
      break;
    }
    // an irreducible class with non-negative self-intersection meets every
    // effective class non-negatively, so being forced settles emptiness
    bool moving = false;
    for (auto& [ci, kcap] : round) {
      (void)kcap;
      if (!(lat.self(pool[ci].cls) < 0)) {
        cert.verdict = SplitVerdict::Empty;
        cert.reason = "the class " + pool[ci].name +
                      " moves and meets the residual system negatively";
        moving = true;
        break;
      }
    }
    if (moving) break;
    for (auto& [ci, kcap] : round) {
      const SplitCandidate& cand = pool[ci];
      Rat prc = lat.pair(cur, cand.cls);
      if (!(prc < 0)) continue;  // an earlier split this round already covered it
      Int k = forced_multiplicity(lat, cur, cand.cls, prc);
      if (k > kcap) k = kcap;
      cur = dc_sub(cur, dc_scale(Rat(k), cand.cls));
      cert.steps.push_back({cand.name, cand.cls, k, prc, cur});
      if (++steps >= max_steps) {
        capped = true;
        break;
      }
    }
  }
  cert.residual = cur;
  return cert;
}

int plurigenus(const Triple& t, int m) {
  need(m >= 1, "plurigenera start at m = 1");
  const PicLattice lat = t.model.lattice();
  DivisorClass spec = dc_scale(Rat(m), dc_add(lat.canonical(), t.divisor()));
  return h0_oracle(t, spec);
}

KodVerdict kod_estimate(const Triple& t, int mmax) {
  need(mmax >= 1, "the plurigenus bound must be positive");
  const PicLattice lat = t.model.lattice();
  DivisorClass adj = dc_add(lat.canonical(), t.divisor());
  auto pool = splitting_candidates(t);
  KodVerdict v;
  for (int m = 1; m <= mmax; ++m) {
    DivisorClass spec = dc_scale(Rat(m), adj);
    SplitCertificate cert = splitting_certificate(t, spec, pool);
    bool empty = cert.verdict == SplitVerdict::Empty;
    v.certificates.push_back(std::move(cert));
    if (empty) continue;
    int h = h0_oracle(t, spec);
    if (h > 0) {
      v.minus_infinity = false;
      v.bound = m;
      v.witness = h;
      return v;
    }
  }
  v.minus_infinity = true;
  v.bound = mmax;
  v.witness = 0;
  return v;
}

}  // namespace logsurf
