#include "logsurf/peeling.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {

DivisorClass config_divisor(const DualGraph& g) {
  DivisorClass d{std::vector<Rat>(g.lattice().rank(), Rat(0))};
  for (int i = 0; i < g.n(); ++i) d = dc_add(d, g.comp(i).cls);
  return d;
}

MatQ gram_at(const DualGraph& g, const std::vector<int>& verts) {
  std::vector<DivisorClass> cls;
  cls.reserve(verts.size());
  for (int v : verts) cls.push_back(g.comp(v).cls);
  return g.lattice().gram_of(cls);
}

}  // namespace

std::optional<Rat> Bark::gamma_at(int vert) const {
  for (const auto& grp : groups)
    for (size_t i = 0; i < grp.verts.size(); ++i)
      if (grp.verts[i] == vert) return grp.gamma[i];
  return std::nullopt;
}

std::vector<Rat> bark_of_group(const DualGraph& g, const std::vector<int>& group,
                               BarkKind kind) {
  if (group.empty()) throw std::invalid_argument("empty bark group");
  if (!g.group_is_admissible(group))
    throw std::invalid_argument("bark group has a curve above -2");
  MatQ m = gram_at(g, group);
  if (definiteness(m) != Definiteness::NegativeDefinite)
    throw std::invalid_argument("bark group is not negative definite");

  const PicLattice& lat = g.lattice();
  const DivisorClass dk = dc_add(config_divisor(g), lat.canonical());
  const int s = static_cast<int>(group.size());
  std::vector<Rat> rhs(s);
  for (int i = 0; i < s; ++i) rhs[i] = lat.pair(dk, g.comp(group[i]).cls);

  auto sol = solve_exact(m, rhs);
  if (!sol) throw InternalError("bark system singular on a definite group");
  const std::vector<Rat>& gamma = *sol;

  // the solve is exact, but the residual is part of the contract
  for (int i = 0; i < s; ++i) {
    Rat acc(0);
    for (int j = 0; j < s; ++j) acc += m.at(i, j) * gamma[j];
    if (acc != rhs[i]) throw InternalError("bark residual nonzero");
  }

  bool any_one = false;
  for (const Rat& x : gamma) {
    if (sgn(x) <= 0 || x > 1) throw InternalError("bark coefficient outside (0,1]");
    if (x == 1) any_one = true;
  }
  bool all_minus_two = true;
  for (int v : group)
    if (g.self(v) != Rat(-2)) all_minus_two = false;
  if (kind == BarkKind::Twig) {
    if (any_one) throw InternalError("twig coefficient reached 1");
  } else if (all_minus_two) {
    for (const Rat& x : gamma)
      if (x != 1) throw InternalError("(-2) rod or fork with coefficient below 1");
  } else if (any_one) {
    throw InternalError("coefficient 1 outside a (-2) rod or fork");
  }
  return gamma;
}

Bark bark(const DualGraph& g) {
  Bark out;
  const PicLattice& lat = g.lattice();
  out.total = DivisorClass{std::vector<Rat>(lat.rank(), Rat(0))};

  for (const auto& grp : g.connected_groups()) {
    if (g.group_peels_whole(grp)) {
      if (auto chain = g.chain_order(grp)) {
        out.groups.push_back(
            {BarkKind::Rod, *chain, bark_of_group(g, *chain, BarkKind::Rod)});
      } else {
        std::vector<int> verts;
        for (const auto& arm : g.fork_arms(grp))
          verts.insert(verts.end(), arm.begin(), arm.end());
        verts.push_back(g.fork_center(grp));
        out.groups.push_back(
            {BarkKind::Fork, verts, bark_of_group(g, verts, BarkKind::Fork)});
      }
      continue;
    }
    for (const auto& t : g.twigs_of_group(grp, true))
      out.groups.push_back({BarkKind::Twig, t, bark_of_group(g, t, BarkKind::Twig)});
  }

  std::set<int> seen;
  for (const auto& grp : out.groups) {
    for (size_t i = 0; i < grp.verts.size(); ++i) {
      if (!seen.insert(grp.verts[i]).second)
        throw InternalError("bark groups overlap");
      out.total = dc_add(out.total, dc_scale(grp.gamma[i], g.comp(grp.verts[i]).cls));
    }
  }
  out.support.assign(seen.begin(), seen.end());
  out.d_sharp = dc_sub(config_divisor(g), out.total);

  if (!out.support.empty()) {
    if (definiteness(gram_at(g, out.support)) != Definiteness::NegativeDefinite)
      throw InternalError("bark pairing matrix is not negative definite");
    const DivisorClass kd = dc_add(out.d_sharp, lat.canonical());
    for (int v : out.support)
      if (lat.pair(kd, g.comp(v).cls) != 0)
        throw InternalError("peeled divisor still meets the bark");
  }
  return out;
}

std::optional<Offender> almost_minimal_offender(const DualGraph& g, const Bark& bk,
                                                const std::vector<TrackedClass>& extra) {
  const PicLattice& lat = g.lattice();
  const DivisorClass dk = dc_add(bk.d_sharp, lat.canonical());
  std::vector<DivisorClass> supp_cls;
  supp_cls.reserve(bk.support.size());
  for (int v : bk.support) supp_cls.push_back(g.comp(v).cls);

  auto contracts = [&](const DivisorClass& c) {
    if (!c.is_integral() || c.is_zero()) return false;
    if (lat.self(c) != Rat(-1) || lat.genus(c) != Rat(0)) return false;
    if (sgn(lat.pair(dk, c)) >= 0) return false;
    std::vector<DivisorClass> all{c};
    all.insert(all.end(), supp_cls.begin(), supp_cls.end());
    return definiteness(lat.gram_of(all)) == Definiteness::NegativeDefinite;
  };

  std::vector<int> order(g.n());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.comp(a).id < g.comp(b).id; });
  for (int i : order)
    if (contracts(g.comp(i).cls)) return Offender{g.comp(i).name, g.comp(i).cls, i};
  for (const auto& t : extra)
    if (contracts(t.cls)) return Offender{t.name, t.cls, std::nullopt};
  return std::nullopt;
}

std::string obstruction_name(Obstruction o) {
  switch (o) {
    case Obstruction::PencilReduction: return "PencilReduction";
    case Obstruction::DelPezzoRank1Shrinkable: return "DelPezzoRank1Shrinkable";
    case Obstruction::NonAdmissibleFork: return "NonAdmissibleFork";
    case Obstruction::DriverContractible: return "DriverContractible";
    case Obstruction::Unknown: return "Unknown";
  }
  return "Unknown";
}

ObstructionReport classify_obstruction(const DualGraph& g, const Bark& bk,
                                       const std::vector<TrackedClass>& tracked,
                                       bool driver_recognizes) {
  if (auto off = almost_minimal_offender(g, bk, tracked))
    throw std::invalid_argument("pair is not almost minimal: " + off->name +
                                " still contracts");
  ObstructionReport rep;

  if (!bk.support.empty() && static_cast<int>(bk.support.size()) == g.n()) {
    rep.kind = Obstruction::DelPezzoRank1Shrinkable;
    return rep;
  }

  std::vector<int> bad_fork_centers;
  for (const auto& grp : g.connected_groups())
    if (g.shape(grp) == GroupShape::Fork && !g.group_is_admissible(grp))
      bad_fork_centers.push_back(g.fork_center(grp));
  if (bad_fork_centers.size() == 1) {
    rep.kind = Obstruction::NonAdmissibleFork;
    rep.fork_component = g.comp(bad_fork_centers[0]).id;
    return rep;
  }

  const PicLattice& lat = g.lattice();
  const DivisorClass d = dc_add(bk.total, bk.d_sharp);
  std::vector<DivisorClass> supp_cls;
  for (int v : bk.support) supp_cls.push_back(g.comp(v).cls);
  std::vector<TrackedClass> pool;
  for (int i = 0; i < g.n(); ++i) pool.push_back({g.comp(i).name, g.comp(i).cls});
  pool.insert(pool.end(), tracked.begin(), tracked.end());
  for (const auto& f : pool) {
    if (!f.cls.is_integral() || f.cls.is_zero()) continue;
    if (lat.self(f.cls) != 0) continue;
    if (lat.pair(f.cls, d) > 1) continue;
    std::vector<DivisorClass> all{f.cls};
    all.insert(all.end(), supp_cls.begin(), supp_cls.end());
    if (definiteness(lat.gram_of(all)) != Definiteness::NegativeSemidefiniteNotDefinite)
      continue;
    rep.kind = Obstruction::PencilReduction;
    rep.pencil = f;
    return rep;
  }

  rep.kind = driver_recognizes ? Obstruction::DriverContractible : Obstruction::Unknown;
  return rep;
}

}  // namespace logsurf
