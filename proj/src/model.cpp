#include "logsurf/model.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <string>

#include "logsurf/errors.hpp"
#include "logsurf/linalg.hpp"

namespace logsurf {

namespace {

void need(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void must(bool ok, const std::string& msg) {
  if (!ok) throw InternalError(msg);
}

int coord_count(const Model& m) { return m.mother() == MotherKind::Plane ? 3 : 4; }

std::vector<std::pair<int, int>> coord_groups(const Model& m) {
  if (m.mother() == MotherKind::Plane) return {{0, 3}};
  return {{0, 2}, {2, 4}};
}

void normalize_group(std::vector<Rat>& v, int lo, int hi) {
  int piv = -1;
  for (int i = lo; i < hi; ++i)
    if (v[i] != 0) {
      piv = i;
      break;
    }
  if (piv < 0) throw std::invalid_argument("anchor has an all-zero coordinate group");
  Rat d = v[piv];
  for (int i = lo; i < hi; ++i) v[i] /= d;
}

std::vector<Rat> normalized_anchor(const Model& m, std::vector<Rat> v) {
  need(static_cast<int>(v.size()) == coord_count(m),
       "anchor length does not fit the mother surface");
  for (auto [lo, hi] : coord_groups(m)) normalize_group(v, lo, hi);
  return v;
}

const PosProper* as_proper(const Position& p) { return std::get_if<PosProper>(&p); }

bool is_default_pos(const Position& p) {
  auto* pp = std::get_if<PosProper>(&p);
  return pp && pp->coords.empty();
}

int rat_to_int(const Rat& r, const char* what) {
  must(r.get_den() == 1, std::string(what) + " must be an integer");
  return static_cast<int>(to_long(r.get_num()));
}

int lb_order(const LaurentBi& f) {
  must(!f.is_zero(), "curve vanishes identically in a local chart");
  int best = INT_MAX;
  for (auto& [e, c] : f.t) best = std::min(best, e.first + e.second);
  return best;
}

void lb_check_regular(const LaurentBi& f, const char* what) {
  for (auto& [e, c] : f.t)
    must(e.first >= 0 && e.second >= 0, std::string(what) + ": local expansion has poles");
}

Rat binom(int n, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) r = r * Rat(n - i) / Rat(i + 1);
  return r;
}

Rat rpow(const Rat& x, int e) {
  Rat r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::vector<Rat> eval_map(const std::vector<Poly>& images, const std::vector<Rat>& p) {
  std::vector<Rat> r;
  r.reserve(images.size());
  for (auto& im : images) r.push_back(im.eval(p));
  return r;
}

// 2x2 derivative of a coordinate-wise polynomial map between the affine
// charts picked by first-nonzero pivots (one pivot per homogeneous group)
MatQ jac2_map(const std::vector<Poly>& images, const std::vector<Rat>& src_raw,
              const std::vector<std::pair<int, int>>& sgroups,
              const std::vector<std::pair<int, int>>& dgroups) {
  std::vector<Rat> src = src_raw;
  for (auto [lo, hi] : sgroups) normalize_group(src, lo, hi);
  std::vector<int> freev;
  for (auto [lo, hi] : sgroups) {
    int piv = -1;
    for (int i = lo; i < hi; ++i)
      if (src[i] != 0) {
        piv = i;
        break;
      }
    for (int i = lo; i < hi; ++i)
      if (i != piv) freev.push_back(i);
  }
  must(freev.size() == 2, "source chart needs exactly two free directions");
  std::vector<Rat> val = eval_map(images, src);
  std::vector<std::pair<int, int>> rows;  // (coordinate, its group pivot)
  for (auto [lo, hi] : dgroups) {
    int piv = -1;
    for (int j = lo; j < hi; ++j)
      if (val[j] != 0) {
        piv = j;
        break;
      }
    must(piv >= 0, "map image has an all-zero coordinate group");
    for (int j = lo; j < hi; ++j)
      if (j != piv) rows.push_back({j, piv});
  }
  must(rows.size() == 2, "target chart needs exactly two free directions");
  MatQ jac(2, 2);
  for (int cc = 0; cc < 2; ++cc) {
    std::vector<Rat> dv;
    dv.reserve(images.size());
    for (auto& im : images) dv.push_back(im.derivative(freev[cc]).eval(src));
    for (int rr = 0; rr < 2; ++rr) {
      auto [j, piv] = rows[rr];
      jac.at(rr, cc) = (dv[j] * val[piv] - val[j] * dv[piv]) / (val[piv] * val[piv]);
    }
  }
  return jac;
}

Rat det2(const MatQ& j) { return j.at(0, 0) * j.at(1, 1) - j.at(0, 1) * j.at(1, 0); }

bool has_explicit_child(const PointTree& tree, PointId r) {
  for (PointId ch : tree.children(r)) {
    const Position& pos = tree.node(ch).pos;
    if (std::holds_alternative<PosDirection>(pos)) return true;
    if (auto* g = std::get_if<PosGeneric>(&pos); g && g->drawn) return true;
  }
  return false;
}

// push the children of a root through the derivative of a coordinate
// change; carrier positions and undrawn generic points ride along on
// their own and stay untouched
void transport_children_linear(PointTree& tree, PointId root, const MatQ& jac) {
  for (PointId ch : tree.children(root)) {
    const Position& pos = tree.node(ch).pos;
    if (auto* d = std::get_if<PosDirection>(&pos)) {
      Rat a2 = jac.at(0, 0) * d->alpha + jac.at(0, 1) * d->beta;
      Rat b2 = jac.at(1, 0) * d->alpha + jac.at(1, 1) * d->beta;
      must(!(a2 == 0 && b2 == 0), "direction collapsed under a coordinate change");
      tree.set_position(ch, PosDirection{root, a2, b2});
    } else if (auto* g = std::get_if<PosGeneric>(&pos)) {
      if (!g->drawn) continue;
      Rat a2 = jac.at(0, 0) + jac.at(0, 1) * (*g->drawn);
      Rat b2 = jac.at(1, 0) + jac.at(1, 1) * (*g->drawn);
      if (a2 == 0)
        tree.set_position(ch, PosDirection{root, Rat(0), Rat(1)});
      else
        tree.set_position(ch, PosGeneric{root, Rat(b2 / a2)});
    }
  }
}

// Directions two or more levels below a root transform through higher jets
// of a coordinate change. The toolkit keeps such points symbolic (carrier
// or undrawn generic) and refuses everything else rather than transporting
// them wrongly.
void refuse_deep_explicit(const PointTree& tree, const char* what) {
  for (PointId w : tree.all()) {
    if (tree.depth(w) < 2) continue;
    const Position& pos = tree.node(w).pos;
    bool expl = std::holds_alternative<PosDirection>(pos);
    if (auto* g = std::get_if<PosGeneric>(&pos)) expl = g->drawn.has_value();
    need(!expl, std::string(what) +
                    ": explicit directions deeper than one level cannot cross a "
                    "coordinate change; keep them symbolic or re-anchor the subtree");
  }
}

bool check_bidegree(const Poly& g, int n, int alpha, int beta) {
  if (g.is_zero()) return false;
  for (auto& [e, c] : g.terms()) {
    if (e[2] + e[3] != alpha) return false;
    if (e[0] + e[1] + n * e[2] != beta) return false;
  }
  return true;
}

void validate_triple(const Triple& t, const char* what) {
  PicLattice lat = t.model.lattice();
  auto check = [&](const TrackedCurve& cv, bool is_boundary) {
    must(static_cast<int>(cv.cls.c.size()) == lat.rank(),
         std::string(what) + ": class length drifted on " + cv.name);
    if (is_boundary)
      must(cv.cls.is_integral(), std::string(what) + ": boundary class fractional on " + cv.name);
    if (!cv.strict || !cv.geom) return;
    if (t.model.mother() == MotherKind::Plane) {
      int d = rat_to_int(cv.cls.c[0], "degree");
      must(is_homogeneous(*cv.geom, d),
           std::string(what) + ": equation degree drifted from the class on " + cv.name);
    } else {
      int alpha = rat_to_int(cv.cls.c[0], "class coefficient");
      int beta = rat_to_int(cv.cls.c[1], "class coefficient");
      must(check_bidegree(*cv.geom, t.model.fn(), alpha, beta),
           std::string(what) + ": equation bidegree drifted from the class on " + cv.name);
    }
  };
  for (auto& b : t.boundary) check(b, true);
  for (auto& a : t.aux) check(a, false);
}

LaurentBi local_strict_lb(const Triple& t, const TrackedCurve& cv, PointId q) {
  need(cv.geom.has_value(), "curve " + cv.name + " carries no equation");
  const PointTree& tree = t.model.tree();
  auto chain = tree.chain_from_root(q);
  auto* root = as_proper(tree.node(chain[0]).pos);
  need(root != nullptr, "point chain does not start at a proper point");
  Poly loc = localize_at_proper(t.model, *cv.geom, root->coords);
  LaurentBi f = lb_from_poly(loc);
  for (size_t i = 1; i < chain.size(); ++i) {
    int m = lb_order(f);
    auto [al, be] = resolve_direction(t, chain[i]);
    f = (al == 0) ? lb_blowup_vertical(f, m) : lb_blowup_main(f, be / al, m);
    lb_check_regular(f, "strict transform");
  }
  return f;
}

}  // namespace

// ------------------------------------------------------------------- model

Model Model::plane() { return Model(MotherKind::Plane, 0); }

Model Model::hirzebruch(int n) {
  if (n < 0) throw std::invalid_argument("negative Hirzebruch degree");
  return Model(MotherKind::Hirzebruch, n);
}

int Model::fn() const {
  if (kind_ != MotherKind::Hirzebruch) throw std::logic_error("fn() asked of a plane model");
  return n_;
}

bool Model::is_blown(PointId q) const {
  return std::find(blown_.begin(), blown_.end(), q) != blown_.end();
}

std::optional<int> Model::slot_of(PointId q) const {
  auto it = std::find(blown_.begin(), blown_.end(), q);
  if (it == blown_.end()) return std::nullopt;
  return static_cast<int>(it - blown_.begin());
}

PicLattice Model::lattice() const {
  int k = static_cast<int>(blown_.size());
  return kind_ == MotherKind::Plane ? PicLattice::plane(k) : PicLattice::hirzebruch(n_, k);
}

DivisorClass Model::e_of(PointId q) const {
  auto s = slot_of(q);
  if (!s) throw std::invalid_argument("point is not blown up");
  return lattice().e(*s);
}

DivisorClass Model::strict_exceptional(PointId q) const {
  DivisorClass r = e_of(q);
  for (PointId w : blown_)
    if (w != q && proximate(w, q)) r = dc_sub(r, e_of(w));
  return r;
}

bool Model::proximate(PointId p, PointId q) const {
  if (!tree_.contains(p) || !tree_.contains(q)) return false;
  auto par = tree_.parent(p);
  if (par && *par == q) return true;
  if (auto* d = std::get_if<PosDirection>(&tree_.node(p).pos)) {
    if (d->alpha == 0 && par) {
      auto gp = tree_.parent(*par);
      if (gp && *gp == q) return true;
    }
  }
  return false;
}

bool Model::on_surface(PointId q) const {
  if (!tree_.contains(q) || is_blown(q) || is_retired(q)) return false;
  auto chain = tree_.chain_from_root(q);
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    if (!is_blown(chain[i])) return false;
  return true;
}

bool Model::is_retired(PointId q) const { return retired_.count(q) != 0; }

void Model::retire(PointId q) { retired_.insert(q); }

void Model::append_blown(PointId q) {
  if (!tree_.contains(q)) throw std::invalid_argument("unknown point");
  if (is_blown(q)) throw std::invalid_argument("point is already blown up");
  blown_.push_back(q);
}

void Model::remove_blown(PointId q) {
  auto it = std::find(blown_.begin(), blown_.end(), q);
  if (it == blown_.end()) throw std::invalid_argument("point is not blown up");
  blown_.erase(it);
}

void Model::set_mother(MotherKind kind, int n) {
  kind_ = kind;
  n_ = n;
}

// ------------------------------------------------------------------ triple

DivisorClass Triple::divisor() const {
  DivisorClass d = model.lattice().zero();
  for (auto& b : boundary) d = dc_add(d, b.cls);
  return d;
}

const TrackedCurve* Triple::find(int id) const {
  for (auto& b : boundary)
    if (b.id == id) return &b;
  for (auto& a : aux)
    if (a.id == id) return &a;
  return nullptr;
}

const TrackedCurve* Triple::find_by_name(const std::string& name) const {
  for (auto& b : boundary)
    if (b.name == name) return &b;
  for (auto& a : aux)
    if (a.name == name) return &a;
  return nullptr;
}

TrackedCurve* Triple::find(int id) {
  return const_cast<TrackedCurve*>(static_cast<const Triple*>(this)->find(id));
}

int Triple::fresh_curve_id() const {
  int m = 0;
  for (auto& b : boundary) m = std::max(m, b.id + 1);
  for (auto& a : aux) m = std::max(m, a.id + 1);
  return m;
}

DualGraph config_of(const Triple& t) {
  std::vector<GraphComponent> comps;
  comps.reserve(t.boundary.size());
  for (auto& b : t.boundary) comps.push_back({b.id, b.name, b.cls});
  std::sort(comps.begin(), comps.end(),
            [](const GraphComponent& x, const GraphComponent& y) { return x.id < y.id; });
  return DualGraph(t.model.lattice(), comps);
}

// ---------------------------------------------------------- local geometry

Poly localize_at_proper(const Model& m, const Poly& geom, const std::vector<Rat>& anchor) {
  need(geom.nvars() == coord_count(m), "equation does not fit the mother surface");
  auto a = normalized_anchor(m, anchor);
  std::vector<int> pivots;
  for (auto [lo, hi] : coord_groups(m))
    for (int i = lo; i < hi; ++i)
      if (a[i] != 0) {
        pivots.push_back(i);
        break;
      }
  std::vector<Poly> images;
  images.reserve(a.size());
  int freevar = 0;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (std::find(pivots.begin(), pivots.end(), i) != pivots.end()) {
      images.push_back(Poly::constant(2, a[i]));
    } else {
      images.push_back(Poly::constant(2, a[i]) + Poly::variable(2, freevar));
      ++freevar;
    }
  }
  must(freevar == 2, "local chart needs exactly two free directions");
  return geom.subst(images);
}

std::pair<Rat, Rat> resolve_direction(const Triple& t, PointId q) {
  const PointTree& tree = t.model.tree();
  need(tree.contains(q), "unknown point");
  const Position& pos = tree.node(q).pos;
  if (auto* d = std::get_if<PosDirection>(&pos)) {
    need(!(d->alpha == 0 && d->beta == 0), "zero direction");
    return {d->alpha, d->beta};
  }
  if (auto* g = std::get_if<PosGeneric>(&pos)) {
    need(g->drawn.has_value(), "generic point has not been drawn yet");
    return {Rat(1), *g->drawn};
  }
  auto* oc = std::get_if<PosOnCarrier>(&pos);
  need(oc != nullptr, "a proper point has no direction");
  const TrackedCurve* cv = t.find(oc->carrier);
  need(cv != nullptr && cv->strict && cv->geom.has_value(),
       "carrier curve is not available with an equation");
  LaurentBi f = local_strict_lb(t, *cv, oc->parent);
  int m = lb_order(f);
  need(m >= 1, "carrier does not pass through the parent point");
  // the tangent cone decides where the carrier meets the new exceptional
  std::vector<Rat> cb(m + 1, Rat(0));
  for (auto& [e, co] : f.t)
    if (e.first + e.second == m) cb[e.second] = co;
  if (cb[m] == 0) {
    bool pure = cb[0] != 0;
    for (int b = 1; b <= m && pure; ++b)
      if (cb[b] != 0) pure = false;
    need(pure,
         "carrier meets the exceptional curve in more than one point; record "
         "directions explicitly");
    need(tree.depth(oc->parent) == 0,
         "carrier resolves to a satellite position; record the direction explicitly");
    return {Rat(0), Rat(1)};
  }
  Rat v0 = -cb[m - 1] / (Rat(m) * cb[m]);
  for (int b = 0; b <= m; ++b) {
    Rat expect = binom(m, b) * rpow(-v0, m - b) * cb[m];
    need(cb[b] == expect,
         "carrier meets the exceptional curve in more than one point; record "
         "directions explicitly");
  }
  return {Rat(1), v0};
}

int curve_mult_at(const Triple& t, const TrackedCurve& c, PointId q) {
  need(c.geom.has_value(), "multiplicity needs an equation");
  need(t.model.tree().contains(q), "unknown point");
  const Position& pos = t.model.tree().node(q).pos;
  // an undrawn generic point misses every tracked curve by fiat
  if (auto* g = std::get_if<PosGeneric>(&pos); g && !g->drawn) return 0;
  LaurentBi f = local_strict_lb(t, c, q);
  return lb_order(f);
}

int exceptional_mult_at(const Model& m, PointId w, PointId q) {
  need(m.is_blown(w), "exceptional curve of a point that is not blown up");
  need(m.tree().contains(q), "unknown point");
  return m.proximate(q, w) ? 1 : 0;
}

// ----------------------------------------------------------- marked pairs

bool blows_up_cluster(const std::vector<BirationalStep>& steps, const Cluster& k) {
  for (auto& s : steps) {
    if (auto* b = std::get_if<StepBlowUp>(&s)) {
      if (k.count(b->point)) return true;
    } else if (auto* e = std::get_if<StepElementary>(&s)) {
      if (k.count(e->point)) return true;
    }
  }
  return false;
}

DivisorClass total_vs_proper(const Model& m, const std::vector<Rat>& mother_coeffs,
                             const std::vector<std::pair<PointId, Rat>>& mults) {
  PicLattice lat = m.lattice();
  std::vector<Rat> vm(lat.points(), Rat(0));
  for (auto& [p, mu] : mults) {
    auto s = m.slot_of(p);
    need(s.has_value(), "multiplicity at a point that is not blown up");
    vm[*s] += mu;
  }
  return lat.from_mults(mother_coeffs, vm);
}

// ------------------------------------------------------------------- steps

std::string step_name(const BirationalStep& s) {
  if (std::holds_alternative<StepBlowUp>(s)) return "blow_up";
  if (std::holds_alternative<StepContractLeaf>(s)) return "contract_leaf";
  if (std::holds_alternative<StepQuadratic>(s)) return "quadratic";
  if (std::holds_alternative<StepElementary>(s)) return "elementary";
  if (std::holds_alternative<StepSwitchToPlane>(s)) return "switch_to_plane";
  return "switch_to_f1";
}

bool position_eq(const Position& a, const Position& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<PosProper>(&a)) return x->coords == std::get<PosProper>(b).coords;
  if (auto* x = std::get_if<PosOnCarrier>(&a)) {
    auto& y = std::get<PosOnCarrier>(b);
    return x->parent == y.parent && x->carrier == y.carrier;
  }
  if (auto* x = std::get_if<PosDirection>(&a)) {
    auto& y = std::get<PosDirection>(b);
    return x->parent == y.parent && x->alpha == y.alpha && x->beta == y.beta;
  }
  auto& x = std::get<PosGeneric>(a);
  auto& y = std::get<PosGeneric>(b);
  return x.parent == y.parent && x.drawn == y.drawn;
}

namespace {

// register (or verify) the point a step carries; a replay may refine an
// undrawn generic position with the drawn value recorded in the log
void register_step_point(PointTree& tree, PointId q, const Position& pos, const char* what) {
  need(q >= 0, std::string(what) + " needs a point id");
  if (!tree.contains(q)) {
    need(!is_default_pos(pos), std::string(what) + " of an unknown point needs its position");
    tree.add_with_id(q, pos);
    return;
  }
  if (is_default_pos(pos) || position_eq(tree.node(q).pos, pos)) return;
  auto* live = std::get_if<PosGeneric>(&tree.node(q).pos);
  bool refines = live && !live->drawn && position_parent(pos).has_value() &&
                 *position_parent(pos) == live->parent;
  need(refines, std::string(what) + ": recorded position disagrees with the tree");
  tree.set_position(q, pos);
}

Triple apply_blow_up(const Triple& tin, const StepBlowUp& st) {
  Triple out = tin;
  Model& m = out.model;
  register_step_point(m.tree(), st.point, st.pos, "blow-up");
  PointId q = st.point;
  need(!m.is_retired(q), "point no longer denotes a surface point");
  need(!m.is_blown(q), "point is already blown up");
  need(m.on_surface(q), "point is not on the current surface");
  if (auto* pp = as_proper(m.tree().node(q).pos)) {
    auto a = normalized_anchor(m, pp->coords);
    for (PointId r : m.tree().roots()) {
      if (r == q || m.is_retired(r)) continue;
      if (auto* rp = as_proper(m.tree().node(r).pos))
        need(normalized_anchor(m, rp->coords) != a, "two tree points share a location");
    }
  }
  auto mult_of = [&](const TrackedCurve& cv) -> int {
    if (!cv.strict) return 0;
    if (cv.geom) return curve_mult_at(out, cv, q);
    for (PointId w : m.blown())
      if (cv.cls == m.strict_exceptional(w)) return exceptional_mult_at(m, w, q);
    throw std::invalid_argument("curve " + cv.name +
                                " has no equation and is not an exceptional curve; it "
                                "cannot be carried through a blow-up");
  };
  std::vector<int> mb, ma;
  for (auto& b : out.boundary) mb.push_back(mult_of(b));
  for (auto& a : out.aux) ma.push_back(mult_of(a));
  m.append_blown(q);
  for (size_t i = 0; i < out.boundary.size(); ++i) out.boundary[i].cls.c.push_back(Rat(-mb[i]));
  for (size_t i = 0; i < out.aux.size(); ++i) out.aux[i].cls.c.push_back(Rat(-ma[i]));
  validate_triple(out, "blow_up");
  return out;
}

Triple apply_contract_leaf(const Triple& tin, const StepContractLeaf& st) {
  Triple out = tin;
  Model& m = out.model;
  PointId q = st.point;
  need(m.tree().contains(q), "unknown point");
  need(m.is_blown(q), "contract_leaf needs a blown point");
  for (PointId w : m.blown())
    need(w == q || !m.proximate(w, q),
         "exceptional curve is not contractible: another blown point rides on it");
  DivisorClass eq = m.e_of(q);
  int base = m.mother() == MotherKind::Plane ? 1 : 2;
  int slot = *m.slot_of(q);
  bool boundary_died = false;
  auto sweep = [&](std::vector<TrackedCurve>& list, bool is_boundary) {
    for (auto it = list.begin(); it != list.end();) {
      if (it->cls == eq) {
        if (is_boundary) boundary_died = true;
        it = list.erase(it);
      } else {
        ++it;
      }
    }
  };
  sweep(out.boundary, true);
  sweep(out.aux, false);
  if (boundary_died) out.protect.insert(q);
  for (auto& b : out.boundary) b.cls.c.erase(b.cls.c.begin() + base + slot);
  for (auto& a : out.aux) a.cls.c.erase(a.cls.c.begin() + base + slot);
  m.remove_blown(q);
  validate_triple(out, "contract_leaf");
  return out;
}

// --------------------------------------------------------------- quadratic

Poly line_through(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<Rat> n = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0]};
  Poly r(3);
  for (int i = 0; i < 3; ++i) {
    if (n[i] == 0) continue;
    Expo e(3, 0);
    e[i] = 1;
    r.add_term(e, n[i]);
  }
  must(!r.is_zero(), "joining line through coincident points");
  return r;
}

const std::vector<Expo>& deg2_monos() {
  static const std::vector<Expo> monos = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                          {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  return monos;
}

std::vector<Poly> conics_through(const std::vector<Rat>& a, const std::vector<Rat>& b,
                                 const std::vector<Rat>& c) {
  const auto& monos = deg2_monos();
  const std::vector<const std::vector<Rat>*> pts = {&a, &b, &c};
  MatQ m(3, 6);
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 6; ++col)
      m.at(r, col) = Poly::monomial(3, monos[col], Rat(1)).eval(*pts[r]);
  auto ker = kernel_exact(m);
  must(ker.size() == 3, "conic net has the wrong dimension");
  std::vector<Poly> net;
  for (auto& k : ker) {
    Poly p(3);
    for (int col = 0; col < 6; ++col)
      if (k[col] != 0) p.add_term(monos[col], k[col]);
    net.push_back(p);
  }
  return net;
}

Triple apply_quadratic(const Triple& tin, const StepQuadratic& st) {
  const Model& m0 = tin.model;
  need(m0.mother() == MotherKind::Plane, "quadratic rebase needs a plane model");
  PointId a = st.a, b = st.b, c = st.c;
  need(a != b && a != c && b != c, "base points must be distinct");
  for (PointId x : {a, b, c}) {
    need(m0.tree().contains(x), "unknown base point");
    need(m0.is_blown(x), "base points must be blown up");
    need(as_proper(m0.tree().node(x).pos) != nullptr, "base points must be proper");
    for (PointId w : m0.tree().subtree(x))
      need(w == x || !m0.is_blown(w), "base point carries deeper blow-ups");
  }
  refuse_deep_explicit(m0.tree(), "quadratic");
  // marks hanging under a base ride its exceptional curve, which the rebase
  // turns into the line joining the other two image points; pin each mark's
  // direction now, while the carriers still have their current equations
  struct BaseRider {
    PointId id;
    PointId base;
    Rat al, be;
  };
  std::vector<BaseRider> riders;
  for (PointId x : {a, b, c})
    for (PointId ch : m0.tree().children(x)) {
      auto [al, be] = resolve_direction(tin, ch);
      for (auto& rd : riders)
        need(rd.base != x || rd.al * be != rd.be * al,
             "two marks under a base point share a direction");
      riders.push_back({ch, x, al, be});
    }
  auto anchor_of = [&](PointId x) {
    return normalized_anchor(m0, as_proper(m0.tree().node(x).pos)->coords);
  };
  auto pa = anchor_of(a), pb = anchor_of(b), pc = anchor_of(c);
  {
    MatQ d3(3, 3);
    for (int j = 0; j < 3; ++j) {
      d3.at(0, j) = pa[j];
      d3.at(1, j) = pb[j];
      d3.at(2, j) = pc[j];
    }
    need(det_exact(d3) != 0, "base points are collinear");
  }
  Poly la = line_through(pb, pc), lb = line_through(pa, pc), lc = line_through(pa, pb);
  std::vector<PointId> forget;
  for (PointId r : m0.tree().roots()) {
    if (r == a || r == b || r == c || m0.is_retired(r)) continue;
    auto* rp = as_proper(m0.tree().node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    auto p = normalized_anchor(m0, rp->coords);
    if (la.eval(p) != 0 && lb.eval(p) != 0 && lc.eval(p) != 0) continue;
    // the lines through the bases get contracted; a bare unreferenced mark on
    // one of them is simply forgotten, anything still referenced is an error
    need(!m0.is_blown(r), "a blown-up point sits on a line the rebase contracts");
    need(m0.tree().children(r).empty() && tin.protect.count(r) == 0,
         "a marked point sits on a line the rebase contracts");
    forget.push_back(r);
  }
  auto net = conics_through(pa, pb, pc);
  auto image_of_line = [&](const std::vector<Rat>& p, const std::vector<Rat>& q) {
    auto at = [&](const Rat& lam) {
      std::vector<Rat> s(3);
      for (int i = 0; i < 3; ++i) s[i] = p[i] + lam * q[i];
      return eval_map(net, s);
    };
    auto v1 = at(Rat(1)), v2 = at(Rat(2));
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        must(v1[i] * v2[j] == v1[j] * v2[i], "contracted line has a moving image");
    normalize_group(v1, 0, 3);
    return v1;
  };
  auto pa2 = image_of_line(pb, pc);
  auto pb2 = image_of_line(pa, pc);
  auto pc2 = image_of_line(pa, pb);
  {
    MatQ d3(3, 3);
    for (int j = 0; j < 3; ++j) {
      d3.at(0, j) = pa2[j];
      d3.at(1, j) = pb2[j];
      d3.at(2, j) = pc2[j];
    }
    must(det_exact(d3) != 0, "images of the contracted lines are collinear");
  }
  auto rnet = conics_through(pa2, pb2, pc2);
  Poly tcub = la * lb * lc;
  MatQ lam(3, 3);
  for (int i = 0; i < 3; ++i) {
    Poly li = poly_div_exact(rnet[i].subst(net), tcub);
    must(is_homogeneous(li, 1), "inverse net correction is not linear");
    for (int k = 0; k < 3; ++k) {
      Expo e(3, 0);
      e[k] = 1;
      lam.at(i, k) = li.coeff(e);
    }
  }
  std::vector<std::vector<Rat>> invcols;
  for (int k = 0; k < 3; ++k) {
    std::vector<Rat> unit(3, Rat(0));
    unit[k] = 1;
    auto sol = solve_exact(lam, unit);
    must(sol.has_value(), "inverse net correction is singular");
    invcols.push_back(*sol);
  }
  std::vector<Poly> psi(3, Poly(3));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) psi[j] = psi[j] + rnet[i].scaled(invcols[i][j]);
  for (int j = 0; j < 3; ++j) {
    Poly back = psi[j].subst(net) - tcub * Poly::variable(3, j);
    must(back.is_zero(), "rebase maps fail the involution identity");
  }
  Poly l2a = line_through(pb2, pc2), l2b = line_through(pa2, pc2), l2c = line_through(pa2, pb2);

  Triple out = tin;
  Model& m = out.model;
  for (PointId r : forget) m.tree().remove_leaf(r);
  int sa = *m.slot_of(a), sb = *m.slot_of(b), sc = *m.slot_of(c);
  const PicLattice lat = m.lattice();
  auto txcurve = [&](TrackedCurve& cv) {
    bool was_ea = cv.strict && cv.cls == lat.e(sa);
    bool was_eb = cv.strict && cv.cls == lat.e(sb);
    bool was_ec = cv.strict && cv.cls == lat.e(sc);
    Rat d = cv.cls.c[0];
    Rat ca = cv.cls.c[1 + sa], cbv = cv.cls.c[1 + sb], ccv = cv.cls.c[1 + sc];
    cv.cls.c[0] = 2 * d + ca + cbv + ccv;
    cv.cls.c[1 + sa] = -d - cbv - ccv;
    cv.cls.c[1 + sb] = -d - ca - ccv;
    cv.cls.c[1 + sc] = -d - ca - cbv;
    cv.param.reset();
    if (!cv.geom) {
      // a base's exceptional maps onto the line joining the other two bases,
      // so its equation can be restored (no deeper blow-ups ride on a base)
      if (was_ea)
        cv.geom = l2a;
      else if (was_eb)
        cv.geom = l2b;
      else if (was_ec)
        cv.geom = l2c;
      return;
    }
    int ma = rat_to_int(-ca, "multiplicity");
    int mbv = rat_to_int(-cbv, "multiplicity");
    int mcv = rat_to_int(-ccv, "multiplicity");
    must(ma >= 0 && mbv >= 0 && mcv >= 0, "strict curve with a negative base multiplicity");
    int d2 = rat_to_int(cv.cls.c[0], "degree");
    if (d2 == 0) {
      // the curve became exceptional, so no mother equation is left
      cv.geom.reset();
      return;
    }
    Poly raw = cv.geom->subst(psi);
    Poly den = poly_pow(l2a, ma) * poly_pow(l2b, mbv) * poly_pow(l2c, mcv);
    Poly g2 = poly_div_exact(raw, den);
    must(is_homogeneous(g2, d2), "transported equation has the wrong degree");
    cv.geom = g2;
  };
  for (auto& bl : out.boundary) txcurve(bl);
  for (auto& ax : out.aux) txcurve(ax);
  PointTree& tree = m.tree();
  for (PointId r : tree.roots()) {
    if (m.is_retired(r)) continue;
    if (r == a) {
      tree.set_position(r, PosProper{pa2});
      continue;
    }
    if (r == b) {
      tree.set_position(r, PosProper{pb2});
      continue;
    }
    if (r == c) {
      tree.set_position(r, PosProper{pc2});
      continue;
    }
    auto p = normalized_anchor(m, as_proper(tree.node(r).pos)->coords);
    if (has_explicit_child(tree, r)) {
      MatQ jac = jac2_map(net, p, {{0, 3}}, {{0, 3}});
      must(det2(jac) != 0, "rebase is singular at a tracked point");
      transport_children_linear(tree, r, jac);
    }
    auto p2 = eval_map(net, p);
    normalize_group(p2, 0, 3);
    tree.set_position(r, PosProper{p2});
  }
  // a mark that rode a base's exceptional lands on the matching joining line;
  // the limit of the net along its direction is the gradient at the base
  // applied to the chart lift of that direction
  for (auto& rd : riders) {
    const std::vector<Rat>& px = rd.base == a ? pa : rd.base == b ? pb : pc;
    int piv = 0;
    while (px[piv] == 0) ++piv;
    std::vector<Rat> v(3, Rat(0));
    for (int i = 0, k = 0; i < 3; ++i) {
      if (i == piv) continue;
      v[i] = k++ == 0 ? rd.al : rd.be;
    }
    std::vector<Rat> img(3, Rat(0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (v[j] != 0) img[i] += net[i].derivative(j).eval(px) * v[j];
    must(!(img[0] == 0 && img[1] == 0 && img[2] == 0),
         "rebase degenerates at a marked direction");
    normalize_group(img, 0, 3);
    PointId near_base = img == pa2 ? a : img == pb2 ? b : img == pc2 ? c : -1;
    if (near_base < 0) {
      tree.set_position(rd.id, PosProper{img});
      continue;
    }
    // pointing along a contracted line: the mark ends up infinitely near the
    // base that line turns into, where the joining line crosses the fresh
    // exceptional curve
    must(near_base != rd.base, "mark collided with its own base image");
    const Poly& ln = rd.base == a ? l2a : rd.base == b ? l2b : l2c;
    int piv2 = 0;
    while (img[piv2] == 0) ++piv2;
    std::vector<Rat> lam(3);
    for (int k = 0; k < 3; ++k) {
      Expo e(3, 0);
      e[k] = 1;
      lam[k] = ln.coeff(e);
    }
    int f1 = -1, f2 = -1;
    for (int i = 0; i < 3; ++i) {
      if (i == piv2) continue;
      (f1 < 0 ? f1 : f2) = i;
    }
    Rat al2 = lam[f2], be2 = -lam[f1];
    must(al2 != 0 || be2 != 0, "joining line is degenerate at a base image");
    tree.set_position(rd.id, PosDirection{near_base, al2, be2});
  }
  validate_triple(out, "quadratic");
  return out;
}

// -------------------------------------------------------------- elementary

// exchange the two rulings of F_0: (s,t,x,y) -> (x,y,s,t)
Triple swap_rulings(const Triple& tin) {
  must(tin.model.mother() == MotherKind::Hirzebruch && tin.model.fn() == 0,
       "ruling swap away from F_0");
  refuse_deep_explicit(tin.model.tree(), "ruling swap");
  Triple out = tin;
  Model& m = out.model;
  std::vector<Poly> perm = {Poly::variable(4, 2), Poly::variable(4, 3), Poly::variable(4, 0),
                            Poly::variable(4, 1)};
  auto tx = [&](TrackedCurve& cv) {
    std::swap(cv.cls.c[0], cv.cls.c[1]);
    if (cv.geom) cv.geom = cv.geom->subst(perm);
    if (cv.param) {
      std::vector<Poly> np = {(*cv.param)[2], (*cv.param)[3], (*cv.param)[0], (*cv.param)[1]};
      cv.param = np;
    }
  };
  for (auto& b : out.boundary) tx(b);
  for (auto& a : out.aux) tx(a);
  MatQ jswap(2, 2);
  jswap.at(0, 1) = 1;
  jswap.at(1, 0) = 1;
  PointTree& tree = m.tree();
  for (PointId r : tree.roots()) {
    if (m.is_retired(r)) continue;
    auto* rp = as_proper(tree.node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    std::vector<Rat> v = rp->coords;
    must(v.size() == 4, "anchor length drifted");
    std::vector<Rat> w = {v[2], v[3], v[0], v[1]};
    transport_children_linear(tree, r, jswap);
    tree.set_position(r, PosProper{w});
  }
  return out;
}

Triple apply_blow_up_step(const Triple& tin, PointId q, const Position& pos) {
  StepBlowUp st;
  st.point = q;
  st.pos = pos;
  return apply_blow_up(tin, st);
}

Triple apply_elementary(const Triple& tin, const StepElementary& st) {
  need(tin.model.mother() == MotherKind::Hirzebruch,
       "elementary transformation needs a ruled model");
  need(st.image >= 0, "elementary transformation needs a fresh id for the image point");
  need(!tin.model.tree().contains(st.image), "image id is already in use");
  need(!st.second_ruling || tin.model.fn() == 0, "the second ruling only exists on F_0");
  Triple work = tin;
  register_step_point(work.model.tree(), st.point, st.pos, "elementary transformation");
  if (st.second_ruling) work = swap_rulings(work);
  PointId p = st.point;
  {
    const Model& wm = work.model;
    auto* pp = as_proper(wm.tree().node(p).pos);
    need(pp != nullptr, "elementary transformations are based at proper points");
    need(!wm.is_blown(p), "base point is already blown up");
    need(!wm.is_retired(p), "base point no longer denotes a surface point");
    refuse_deep_explicit(wm.tree(), "elementary");
  }
  // marks hanging under the base ride its exceptional curve, which becomes
  // the fresh fibre; pin their directions before any chart changes
  struct BaseRider {
    PointId id;
    Rat al, be;
  };
  std::vector<BaseRider> riders;
  for (PointId ch : work.model.tree().children(p)) {
    auto [al, be] = resolve_direction(work, ch);
    need(al != 0, "a marked direction points along the fibre being contracted");
    for (auto& rd : riders)
      need(rd.al * be != rd.be * al, "two marks under the base share a direction");
    riders.push_back({ch, al, be});
  }
  int n = work.model.fn();
  auto pnorm = normalized_anchor(work.model, as_proper(work.model.tree().node(p).pos)->coords);
  Rat s0 = pnorm[0], t0 = pnorm[1], x0 = pnorm[2], y0 = pnorm[3];
  Poly ell(4);
  if (t0 != 0) ell.add_term({1, 0, 0, 0}, t0);
  if (s0 != 0) ell.add_term({0, 1, 0, 0}, -s0);
  {
    std::vector<PointId> forget;
    for (PointId r : work.model.tree().roots()) {
      if (r == p || work.model.is_retired(r)) continue;
      auto* rp = as_proper(work.model.tree().node(r).pos);
      must(rp != nullptr, "tree root without proper coordinates");
      if (ell.eval(rp->coords) != 0) continue;
      // the fibre through the base collapses to the image point; a bare
      // unreferenced mark on it is simply forgotten, the rest is an error
      need(!work.model.is_blown(r), "a blown-up point sits on the fibre being contracted");
      need(work.model.tree().children(r).empty() && work.protect.count(r) == 0,
           "a marked point sits on the fibre being contracted");
      forget.push_back(r);
    }
    for (PointId r : forget) work.model.tree().remove_leaf(r);
  }
  bool case_drop = n >= 1 && y0 != 0;  // contracting towards the negative section
  Triple out = apply_blow_up_step(work, p, PosProper{});  // already registered above
  Model& m = out.model;
  int slot = *m.slot_of(p);
  DivisorClass fib = dc_sub(m.lattice().F(), m.lattice().e(slot));
  int n2 = case_drop ? n - 1 : n + 1;
  std::vector<Poly> fwd, inv;
  {
    Poly vs = Poly::variable(4, 0), vt = Poly::variable(4, 1);
    Poly vx = Poly::variable(4, 2), vy = Poly::variable(4, 3);
    if (case_drop) {
      Poly g(4);
      if (s0 != 0)
        g.add_term({n, 0, 0, 0}, x0 / (y0 * rpow(s0, n)));
      else
        g.add_term({0, n, 0, 0}, x0 / (y0 * rpow(t0, n)));
      fwd = {vs, vt, vx - vy * g, vy * ell};
      inv = {vs, vt, vx * ell + vy * g, vy};
    } else if (y0 != 0) {
      // raising from F_0 at a base off {y=0}: shear so the ruling section
      // through the base becomes the new negative section, otherwise the
      // chart would pin its fundamental point at the wrong spot
      Rat cq = x0 / y0;
      fwd = {vs, vt, vy * ell, vx - vy.scaled(cq)};
      inv = {vs, vt, vy * ell + vx.scaled(cq), vx};
    } else {
      fwd = {vs, vt, vx * ell, vy};
      inv = {vs, vt, vx, vy * ell};
    }
  }
  std::vector<Rat> pimg = case_drop ? std::vector<Rat>{s0, t0, Rat(1), Rat(0)}
                                    : std::vector<Rat>{s0, t0, Rat(0), Rat(1)};
  bool boundary_died = false;
  auto sweep = [&](std::vector<TrackedCurve>& list, bool is_boundary) {
    for (auto it = list.begin(); it != list.end();) {
      if (it->cls == fib) {
        if (is_boundary) boundary_died = true;
        it = list.erase(it);
      } else {
        ++it;
      }
    }
  };
  sweep(out.boundary, true);
  sweep(out.aux, false);
  if (boundary_died) out.protect.insert(st.image);
  std::vector<std::pair<int, int>> expect_mult;  // (curve id, image multiplicity)
  auto tx = [&](TrackedCurve& cv) {
    Rat alpha = cv.cls.c[0], beta = cv.cls.c[1], gamma = cv.cls.c[2 + slot];
    std::optional<Poly> g2;
    if (cv.geom) {
      int mp = rat_to_int(-gamma, "multiplicity");
      must(mp >= 0, "strict curve with a negative base multiplicity");
      Poly raw = cv.geom->subst(inv);
      g2 = poly_div_exact(raw, poly_pow(ell, mp));
      expect_mult.push_back({cv.id, rat_to_int(alpha + gamma, "image multiplicity")});
    }
    cv.cls.c[1] = case_drop ? Rat(beta + gamma) : Rat(beta + alpha + gamma);
    cv.cls.c.erase(cv.cls.c.begin() + 2 + slot);
    if (cv.cls.c[0] == 0 && cv.cls.c[1] == 0)
      cv.geom.reset();
    else
      cv.geom = g2;
    cv.param.reset();
  };
  for (auto& b : out.boundary) tx(b);
  for (auto& a : out.aux) tx(a);
  m.remove_blown(p);
  m.retire(p);
  m.set_mother(MotherKind::Hirzebruch, n2);
  m.tree().add_with_id(st.image, PosProper{pimg});
  PointTree& tree = m.tree();
  for (PointId r : tree.roots()) {
    if (r == p || r == st.image || m.is_retired(r)) continue;
    auto* rp = as_proper(tree.node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    std::vector<Rat> pold = rp->coords;
    if (has_explicit_child(tree, r)) {
      MatQ jac = jac2_map(fwd, pold, {{0, 2}, {2, 4}}, {{0, 2}, {2, 4}});
      must(det2(jac) != 0, "transformation is singular at a tracked point");
      transport_children_linear(tree, r, jac);
    }
    auto p2 = eval_map(fwd, pold);
    normalize_group(p2, 0, 2);
    normalize_group(p2, 2, 4);
    tree.set_position(r, PosProper{p2});
  }
  // marks that rode the base's exceptional land on the fresh fibre; in the
  // base chart ell is lin * u, and each branch of the map sends a direction
  // (al : be) there to an explicit point of that fibre
  Rat lin = s0 != 0 ? Rat(-s0) : t0;
  for (auto& rd : riders) {
    Rat xi, yi;
    if (case_drop) {
      if (x0 != 0) {
        xi = -rd.be / y0;
        yi = y0 * lin * rd.al;
      } else {
        xi = rd.be;
        yi = lin * rd.al;
      }
    } else if (y0 != 0) {
      if (x0 != 0) {
        xi = y0 * lin * rd.al;
        yi = -rd.be / y0;
      } else {
        xi = lin * rd.al;
        yi = rd.be;
      }
    } else {
      xi = lin * rd.al;
      yi = rd.be;
    }
    std::vector<Rat> q2 = {s0, t0, xi, yi};
    normalize_group(q2, 2, 4);
    tree.set_position(rd.id, PosProper{q2});
  }
  for (auto [id, mexp] : expect_mult) {
    const TrackedCurve* cv = out.find(id);
    if (!cv || !cv->geom) continue;
    must(curve_mult_at(out, *cv, st.image) == mexp,
         "image multiplicity disagrees with the class bookkeeping");
  }
  validate_triple(out, "elementary");
  return out;
}

// ---------------------------------------------------------------- switches

Triple apply_switch_to_f1(const Triple& tin, const StepSwitchToF1& st) {
  need(tin.model.mother() == MotherKind::Plane, "switch_to_f1 needs a plane model");
  PointId z = st.z;
  const Model& m0 = tin.model;
  need(m0.tree().contains(z), "unknown point");
  need(m0.is_blown(z), "the switch centre must be blown up");
  auto* zp = as_proper(m0.tree().node(z).pos);
  need(zp != nullptr, "the switch centre must be a proper point");
  refuse_deep_explicit(m0.tree(), "switch_to_f1");
  auto z0 = normalized_anchor(m0, zp->coords);

  // a projectivity taking the centre to (1:0:0), so the charts line up
  int piv = -1;
  for (int i = 0; i < 3; ++i)
    if (z0[i] != 0) {
      piv = i;
      break;
    }
  std::vector<int> rest;
  for (int i = 0; i < 3; ++i)
    if (i != piv) rest.push_back(i);
  MatQ mm(3, 3);
  mm.at(0, piv) = 1;
  for (int r = 1; r <= 2; ++r) {
    mm.at(r, rest[r - 1]) = 1;
    mm.at(r, piv) = -z0[rest[r - 1]];
  }
  std::vector<std::vector<Rat>> invcols;
  for (int k = 0; k < 3; ++k) {
    std::vector<Rat> unit(3, Rat(0));
    unit[k] = 1;
    auto sol = solve_exact(mm, unit);
    must(sol.has_value(), "recentred frame is singular");
    invcols.push_back(*sol);
  }
  std::vector<Poly> mimg(3, Poly(3)), minv(3, Poly(3));
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j) {
      if (mm.at(r, j) != 0) mimg[r] = mimg[r] + Poly::variable(3, j).scaled(mm.at(r, j));
      if (invcols[j][r] != 0) minv[r] = minv[r] + Poly::variable(3, j).scaled(invcols[j][r]);
    }

  Triple out = tin;
  Model& m = out.model;
  PointTree& tree = m.tree();
  for (auto* list : {&out.boundary, &out.aux})
    for (auto& cv : *list) {
      if (cv.geom) cv.geom = cv.geom->subst(minv);
      cv.param.reset();
    }
  for (PointId r : tree.roots()) {
    if (m.is_retired(r)) continue;
    auto* rp = as_proper(tree.node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    std::vector<Rat> pold = rp->coords;
    if (has_explicit_child(tree, r)) {
      MatQ jac = jac2_map(mimg, pold, {{0, 3}}, {{0, 3}});
      must(det2(jac) != 0, "recentred frame is singular at a tracked point");
      transport_children_linear(tree, r, jac);
    }
    auto p2 = eval_map(mimg, pold);
    normalize_group(p2, 0, 3);
    tree.set_position(r, PosProper{p2});
  }
  {
    auto zn = normalized_anchor(m, as_proper(tree.node(z).pos)->coords);
    must(zn[0] == 1 && zn[1] == 0 && zn[2] == 0, "recentred frame missed the switch centre");
  }

  // pin down the children of the centre before the charts change under them
  std::vector<std::pair<PointId, std::vector<Rat>>> newprops;
  for (PointId ch : tree.children(z)) {
    for (PointId gc : tree.subtree(ch)) {
      if (gc == ch) continue;
      const Position& gpos = tree.node(gc).pos;
      bool expl = std::holds_alternative<PosDirection>(gpos);
      if (auto* g = std::get_if<PosGeneric>(&gpos)) expl = g->drawn.has_value();
      need(!expl,
           "switch_to_f1: explicit directions below the centre's children cannot "
           "cross the switch; keep them symbolic");
    }
    auto [alf, bet] = resolve_direction(out, ch);
    newprops.push_back({ch, {alf, bet, Rat(1), Rat(0)}});
  }

  int sz = *m.slot_of(z);
  DivisorClass se_z = m.strict_exceptional(z);
  std::vector<Poly> images_g = {Poly::variable(4, 2), Poly::variable(4, 0) * Poly::variable(4, 3),
                                Poly::variable(4, 1) * Poly::variable(4, 3)};
  for (auto* list : {&out.boundary, &out.aux})
    for (auto& cv : *list) {
      bool was_exc_z = cv.cls == se_z;
      Rat d = cv.cls.c[0], cz = cv.cls.c[1 + sz];
      if (cv.geom) {
        int mz = rat_to_int(-cz, "multiplicity");
        must(mz >= 0, "strict curve with a negative multiplicity at the centre");
        Poly g4 = cv.geom->subst(images_g);
        cv.geom = poly_div_var_pow(g4, 3, mz);
      }
      std::vector<Rat> nc;
      nc.reserve(cv.cls.c.size() + 1);
      nc.push_back(d + cz);
      nc.push_back(d);
      for (int i = 0; i + 1 < static_cast<int>(cv.cls.c.size()); ++i)
        if (i != sz) nc.push_back(cv.cls.c[1 + i]);
      cv.cls.c = nc;
      if (was_exc_z && !cv.geom && cv.strict) {
        // the centre's exceptional curve becomes the negative section {y=0}
        Poly y(4);
        y.add_term({0, 0, 0, 1}, Rat(1));
        cv.geom = y;
      }
    }
  std::vector<Poly> images_pt = {Poly::variable(3, 1), Poly::variable(3, 2),
                                 Poly::variable(3, 0), Poly::constant(3, Rat(1))};
  std::vector<PointId> roots_now = tree.roots();
  for (PointId r : roots_now) {
    if (r == z || m.is_retired(r)) continue;
    auto* rp = as_proper(tree.node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    std::vector<Rat> pold = rp->coords;
    if (has_explicit_child(tree, r)) {
      MatQ jac = jac2_map(images_pt, pold, {{0, 3}}, {{0, 2}, {2, 4}});
      must(det2(jac) != 0, "switch is singular at a tracked point");
      transport_children_linear(tree, r, jac);
    }
    auto p2 = eval_map(images_pt, pold);
    normalize_group(p2, 0, 2);
    normalize_group(p2, 2, 4);
    tree.set_position(r, PosProper{p2});
  }
  for (auto& [ch, coords] : newprops) tree.set_position(ch, PosProper{coords});
  m.remove_blown(z);
  m.retire(z);
  m.set_mother(MotherKind::Hirzebruch, 1);
  validate_triple(out, "switch_to_f1");
  return out;
}

Triple apply_switch_to_plane(const Triple& tin, const StepSwitchToPlane& st) {
  need(tin.model.mother() == MotherKind::Hirzebruch, "switch_to_plane needs a ruled model");
  need(tin.model.fn() == 1, "switch_to_plane needs F_1");
  PointId z = st.z;
  need(z >= 0, "switch_to_plane needs a fresh node id");
  need(!tin.model.tree().contains(z), "the new centre id is already in use");
  refuse_deep_explicit(tin.model.tree(), "switch_to_plane");

  Triple out = tin;
  Model& m = out.model;
  PointTree& tree = m.tree();
  std::vector<std::pair<PointId, std::vector<Rat>>> on_e;  // roots on the negative section
  std::vector<PointId> off_e;
  for (PointId r : tree.roots()) {
    if (m.is_retired(r)) continue;
    auto* rp = as_proper(tree.node(r).pos);
    must(rp != nullptr, "tree root without proper coordinates");
    auto a = normalized_anchor(m, rp->coords);
    if (a[3] == 0)
      on_e.push_back({r, a});
    else
      off_e.push_back(r);
  }

  std::vector<Poly> images_g = {Poly::variable(3, 1), Poly::variable(3, 2),
                                Poly::variable(3, 0), Poly::constant(3, Rat(1))};
  for (auto* list : {&out.boundary, &out.aux})
    for (auto& cv : *list) {
      Rat alpha = cv.cls.c[0], beta = cv.cls.c[1];
      bool was_section = alpha == 1 && beta == 0;
      if (cv.geom) {
        if (was_section)
          cv.geom.reset();  // the negative section becomes the centre's exceptional
        else
          cv.geom = cv.geom->subst(images_g);
      }
      std::vector<Rat> nc;
      nc.reserve(cv.cls.c.size());
      nc.push_back(beta);
      for (size_t i = 2; i < cv.cls.c.size(); ++i) nc.push_back(cv.cls.c[i]);
      nc.push_back(alpha - beta);
      cv.cls.c = nc;
      cv.param.reset();
      if (cv.geom) {
        int d2 = rat_to_int(cv.cls.c[0], "degree");
        if (d2 == 0)
          cv.geom.reset();
        else
          must(is_homogeneous(*cv.geom, d2), "transported equation has the wrong degree");
      }
    }

  tree.add_with_id(z, PosProper{{Rat(1), Rat(0), Rat(0)}});
  m.set_mother(MotherKind::Plane, 0);
  m.append_blown(z);

  std::vector<Poly> images_pt = {Poly::variable(4, 2), Poly::variable(4, 0) * Poly::variable(4, 3),
                                 Poly::variable(4, 1) * Poly::variable(4, 3)};
  for (PointId r : off_e) {
    auto* rp = as_proper(tree.node(r).pos);
    std::vector<Rat> pold = rp->coords;
    if (has_explicit_child(tree, r)) {
      MatQ jac = jac2_map(images_pt, pold, {{0, 2}, {2, 4}}, {{0, 3}});
      must(det2(jac) != 0, "switch is singular at a tracked point");
      transport_children_linear(tree, r, jac);
    }
    auto p2 = eval_map(images_pt, pold);
    normalize_group(p2, 0, 3);
    tree.set_position(r, PosProper{p2});
  }
  // roots on the negative section become first neighbours of the new centre;
  // the blow-up chart swaps the roles of the two local coordinates there
  MatQ jswap(2, 2);
  jswap.at(0, 1) = 1;
  jswap.at(1, 0) = 1;
  for (auto& [r, a] : on_e) {
    transport_children_linear(tree, r, jswap);
    tree.set_position(r, PosDirection{z, a[0], a[1]});
  }
  validate_triple(out, "switch_to_plane");
  return out;
}

}  // namespace

Triple apply_step(const Triple& t, const BirationalStep& s) {
  if (auto* b = std::get_if<StepBlowUp>(&s)) return apply_blow_up(t, *b);
  if (auto* cl = std::get_if<StepContractLeaf>(&s)) return apply_contract_leaf(t, *cl);
  if (auto* q = std::get_if<StepQuadratic>(&s)) return apply_quadratic(t, *q);
  if (auto* e = std::get_if<StepElementary>(&s)) return apply_elementary(t, *e);
  if (auto* s1 = std::get_if<StepSwitchToF1>(&s)) return apply_switch_to_f1(t, *s1);
  if (auto* s2 = std::get_if<StepSwitchToPlane>(&s)) return apply_switch_to_plane(t, *s2);
  throw std::logic_error("unhandled step kind");
}

}  // namespace logsurf
