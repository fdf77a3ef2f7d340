#include "logsurf/curvegraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "logsurf/errors.hpp"

namespace logsurf {

DualGraph::DualGraph(PicLattice lat, std::vector<GraphComponent> comps)
    : lat_(std::move(lat)), comps_(std::move(comps)), w_(0, 0) {
  int m = n();
  w_ = MatQ(m, m);
  for (int i = 0; i < m; ++i) {
    if (lat_.genus(comps_[i].cls) != 0)
      throw std::invalid_argument("component " + comps_[i].name +
                                  " is not a rational curve");
    for (int j = i; j < m; ++j) {
      Rat v = lat_.pair(comps_[i].cls, comps_[j].cls);
      if (v.get_den() != 1)
        throw std::invalid_argument("fractional intersection number");
      if (i != j && sgn(v) < 0)
        throw std::invalid_argument("components " + comps_[i].name + " and " +
                                    comps_[j].name + " pair negatively");
      w_.at(i, j) = v;
      w_.at(j, i) = v;
    }
  }
}

int DualGraph::index_of_id(int component_id) const {
  for (int i = 0; i < n(); ++i)
    if (comps_[i].id == component_id) return i;
  throw std::out_of_range("no component with that id");
}

const Rat& DualGraph::weight(int i, int j) const { return w_.at(i, j); }

const Rat& DualGraph::self(int i) const { return w_.at(i, i); }

Rat DualGraph::valency(int i) const {
  Rat v(0);
  for (int j = 0; j < n(); ++j)
    if (j != i) v += w_.at(i, j);
  return v;
}

std::vector<std::vector<int>> DualGraph::connected_groups() const {
  std::vector<int> label(n(), -1);
  int next = 0;
  for (int s = 0; s < n(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int j = 0; j < n(); ++j)
        if (j != v && label[j] < 0 && sgn(w_.at(v, j)) > 0) {
          label[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  std::vector<std::vector<int>> out(next);
  for (int i = 0; i < n(); ++i) out[label[i]].push_back(i);
  return out;
}

bool DualGraph::group_is_tree(const std::vector<int>& g) const {
  // connected with edge multiplicities summing to |g| - 1
  Rat edges(0);
  for (size_t a = 0; a < g.size(); ++a)
    for (size_t b = a + 1; b < g.size(); ++b) edges += w_.at(g[a], g[b]);
  if (edges != Rat(static_cast<long>(g.size()) - 1)) return false;
  // connectivity inside the group
  std::set<int> seen{g[0]};
  std::vector<int> stack{g[0]};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g)
      if (!seen.count(u) && sgn(w_.at(v, u)) > 0) {
        seen.insert(u);
        stack.push_back(u);
      }
  }
  return seen.size() == g.size();
}

namespace {
Rat valency_within(const MatQ& w, const std::vector<int>& g, int v) {
  Rat s(0);
  for (int u : g)
    if (u != v) s += w.at(v, u);
  return s;
}
}  // namespace

std::optional<std::vector<int>> DualGraph::chain_order(const std::vector<int>& g) const {
  if (g.empty()) return std::nullopt;
  if (g.size() == 1) return g;
  if (!group_is_tree(g)) return std::nullopt;
  int start = -1;
  for (int v : g) {
    Rat val = valency_within(w_, g, v);
    if (val > 2) return std::nullopt;
    if (val == 1 && start < 0) start = v;
  }
  if (start < 0) return std::nullopt;
  std::vector<int> order{start};
  std::set<int> used{start};
  while (order.size() < g.size()) {
    int cur = order.back();
    int next = -1;
    for (int u : g)
      if (u != cur && !used.count(u) && sgn(w_.at(cur, u)) > 0) {
        if (next >= 0) return std::nullopt;
        next = u;
      }
    if (next < 0) return std::nullopt;
    order.push_back(next);
    used.insert(next);
  }
  return order;
}

GroupShape DualGraph::shape(const std::vector<int>& g) const {
  if (chain_order(g)) return GroupShape::Rod;
  if (!group_is_tree(g)) return GroupShape::Other;
  int branch = 0;
  bool exactly3 = false;
  for (int v : g) {
    Rat val = valency_within(w_, g, v);
    if (val >= 3) {
      ++branch;
      exactly3 = val == 3;
    }
  }
  return branch == 1 && exactly3 ? GroupShape::Fork : GroupShape::Other;
}

int DualGraph::fork_center(const std::vector<int>& g) const {
  if (shape(g) != GroupShape::Fork) throw std::logic_error("group is not a fork");
  for (int v : g)
    if (valency_within(w_, g, v) == 3) return v;
  throw std::logic_error("fork without center");
}

std::vector<std::vector<int>> DualGraph::fork_arms(const std::vector<int>& g) const {
  int c = fork_center(g);
  std::vector<std::vector<int>> arms;
  for (int u : g) {
    if (u == c || sgn(w_.at(c, u)) == 0) continue;
    // walk outward from the neighbor u away from the center
    std::vector<int> arm{u};
    int prev = c, cur = u;
    for (;;) {
      int next = -1;
      for (int v : g)
        if (v != prev && v != cur && sgn(w_.at(cur, v)) > 0) next = v;
      if (next < 0) break;
      arm.push_back(next);
      prev = cur;
      cur = next;
    }
    std::reverse(arm.begin(), arm.end());  // tip first
    arms.push_back(arm);
  }
  return arms;
}

bool DualGraph::group_is_admissible(const std::vector<int>& g) const {
  for (int v : g)
    if (self(v) > -2) return false;
  return true;
}

std::vector<int> DualGraph::tips_of_group(const std::vector<int>& g) const {
  std::vector<int> tips;
  for (int v : g)
    if (valency_within(w_, g, v) == 1) tips.push_back(v);
  return tips;
}

std::vector<std::vector<int>> DualGraph::twigs_of_group(const std::vector<int>& g,
                                                        bool admissible_only) const {
  std::vector<std::vector<int>> out;
  for (int tip : tips_of_group(g)) {
    std::vector<int> twig;
    int prev = -1, cur = tip;
    for (;;) {
      if (valency_within(w_, g, cur) > 2) break;   // reached the branch
      if (admissible_only && self(cur) > -2) break;
      twig.push_back(cur);
      int next = -1;
      for (int v : g)
        if (v != prev && v != cur && sgn(w_.at(cur, v)) > 0) next = v;
      if (next < 0) break;
      prev = cur;
      cur = next;
    }
    if (!twig.empty()) out.push_back(twig);
  }
  return out;
}

std::vector<std::vector<int>> DualGraph::maximal_twigs() const {
  std::vector<std::vector<int>> out;
  for (auto& g : connected_groups()) {
    if (chain_order(g)) continue;  // in a bare chain every vertex is twig-like
    for (auto& t : twigs_of_group(g, false)) out.push_back(std::move(t));
  }
  return out;
}

bool DualGraph::group_peels_whole(const std::vector<int>& g) const {
  if (!group_is_admissible(g)) return false;
  if (chain_order(g)) return true;  // rods are always negative definite
  if (shape(g) != GroupShape::Fork) return false;
  // beyond the (-2) bound, a fork only contracts to a quotient point when
  // the arm determinants p, q, r satisfy 1/p + 1/q + 1/r > 1; outside that
  // range the branch coefficient would drop to 0 or below and the star
  // peels through its arms instead
  Rat recip(0);
  for (const auto& arm : fork_arms(g)) {
    std::vector<DivisorClass> cls;
    for (int v : arm) cls.push_back(comps_[v].cls);
    Rat d = det_exact(lat_.gram_of(cls));
    if (sgn(d) < 0) d = -d;
    recip += Rat(1) / d;
  }
  if (recip <= 1) return false;
  // implied by the arm condition, but cheap enough to keep as a hard check
  std::vector<DivisorClass> cls;
  for (int v : g) cls.push_back(comps_[v].cls);
  return classify_negativity(lat_.gram_of(cls)) == Definiteness::NegativeDefinite;
}

std::vector<std::vector<int>> DualGraph::maximal_admissible_twigs() const {
  std::vector<std::vector<int>> out;
  for (auto& g : connected_groups()) {
    if (group_peels_whole(g)) continue;
    for (auto& t : twigs_of_group(g, true)) out.push_back(std::move(t));
  }
  return out;
}

DivisorClass DualGraph::group_sum(const std::vector<int>& g) const {
  DivisorClass s = lat_.zero();
  for (int v : g) s = dc_add(s, comps_[v].cls);
  return s;
}

Rat DualGraph::group_pa(const std::vector<int>& g) const { return lat_.genus(group_sum(g)); }

Rat DualGraph::branching_of(const std::vector<int>& sub) const {
  std::vector<char> in(n(), 0);
  for (int v : sub) in.at(v) = 1;
  Rat b(0);
  for (int i : sub)
    for (int j = 0; j < n(); ++j)
      if (!in[j]) b += w_.at(i, j);
  return b;
}

RRBound rr_bound(const DualGraph& g) {
  const PicLattice& lat = g.lattice();
  auto groups = g.connected_groups();
  for (auto& grp : groups)
    if (g.group_pa(grp) != 0)
      throw std::invalid_argument("rr_bound needs every connected group to be a rational tree");
  Rat h(static_cast<long>(groups.size()));
  DivisorClass d = lat.zero();
  for (int i = 0; i < g.n(); ++i) d = dc_add(d, g.comp(i).cls);
  DivisorClass k = lat.canonical();
  DivisorClass dk = dc_add(d, k);
  if (lat.pair(d, dk) != Rat(-2) * h)
    throw InternalError("D.(D+K) != -2h on a rational tree configuration");
  RRBound out;
  out.two_k_plus_d = dc_add(k, dc_add(k, d));
  out.minus_k_minus_d = dc_sub(lat.zero(), dk);
  out.rhs = lat.pair(k, dk) - h + 1;
  return out;
}

bool DualGraph::is_one_connected() const {
  if (n() > 20) throw std::invalid_argument("too many components to enumerate");
  if (n() < 2) return n() == 1;
  // precompute pairings; check every proper bipartition
  for (unsigned mask = 1; mask + 1 < (1u << n()); ++mask) {
    Rat cross(0);
    for (int i = 0; i < n(); ++i) {
      if (!(mask & (1u << i))) continue;
      for (int j = 0; j < n(); ++j)
        if (!(mask & (1u << j))) cross += w_.at(i, j);
    }
    if (cross < 1) return false;
  }
  return true;
}

std::string DualGraph::canonical_key() const {
  if (n() > 8) throw std::invalid_argument("canonical form capped at 8 vertices");
  std::vector<int> perm(n());
  for (int i = 0; i < n(); ++i) perm[i] = i;
  std::string best;
  do {
    std::ostringstream os;
    for (int i = 0; i < n(); ++i) os << rat_str(self(perm[i])) << ";";
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j) os << rat_str(w_.at(perm[i], perm[j])) << ",";
    std::string key = os.str();
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace logsurf
