#include "logsurf/point_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace logsurf {

std::optional<PointId> position_parent(const Position& p) {
  if (auto* oc = std::get_if<PosOnCarrier>(&p)) return oc->parent;
  if (auto* d = std::get_if<PosDirection>(&p)) return d->parent;
  if (auto* g = std::get_if<PosGeneric>(&p)) return g->parent;
  return std::nullopt;
}

PointId PointTree::add(Position pos) {
  PointId id = next_;
  add_with_id(id, std::move(pos));
  return id;
}

void PointTree::add_with_id(PointId id, Position pos) {
  if (id < 0) throw std::invalid_argument("point ids are non-negative");
  if (nodes_.count(id)) throw std::invalid_argument("point id already used");
  if (auto p = position_parent(pos); p && !nodes_.count(*p))
    throw std::invalid_argument("parent point does not exist");
  nodes_.emplace(id, PointNode{id, std::move(pos)});
  next_ = std::max(next_, id + 1);
}

void PointTree::remove_leaf(PointId id) {
  if (!is_leaf(id)) throw std::logic_error("point still has points above it");
  nodes_.erase(id);
}

void PointTree::set_position(PointId id, Position pos) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("no such point");
  if (auto p = position_parent(pos)) {
    if (!nodes_.count(*p)) throw std::invalid_argument("parent point does not exist");
    // guard against cycles: the new parent must not sit below id
    for (PointId q : subtree(id))
      if (q == *p) throw std::invalid_argument("position would create a cycle");
  }
  it->second.pos = std::move(pos);
}

const PointNode& PointTree::node(PointId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("no such point");
  return it->second;
}

std::optional<PointId> PointTree::parent(PointId id) const {
  return position_parent(node(id).pos);
}

std::vector<PointId> PointTree::children(PointId id) const {
  std::vector<PointId> out;
  for (auto& [pid, n] : nodes_)
    if (auto p = position_parent(n.pos); p && *p == id) out.push_back(pid);
  return out;  // map order is ascending already
}

std::vector<PointId> PointTree::roots() const {
  std::vector<PointId> out;
  for (auto& [pid, n] : nodes_)
    if (!position_parent(n.pos)) out.push_back(pid);
  return out;
}

std::vector<PointId> PointTree::all() const {
  std::vector<PointId> out;
  out.reserve(nodes_.size());
  for (auto& [pid, n] : nodes_) out.push_back(pid);
  return out;
}

std::vector<PointId> PointTree::subtree(PointId id) const {
  std::vector<PointId> out{id};
  for (size_t i = 0; i < out.size(); ++i)
    for (PointId c : children(out[i])) out.push_back(c);
  return out;
}

std::vector<PointId> PointTree::chain_from_root(PointId id) const {
  std::vector<PointId> rev{id};
  while (auto p = parent(rev.back())) rev.push_back(*p);
  std::reverse(rev.begin(), rev.end());
  return rev;
}

int PointTree::depth(PointId id) const {
  return static_cast<int>(chain_from_root(id).size()) - 1;
}

bool PointTree::is_leaf(PointId id) const {
  node(id);  // existence check
  for (auto& [pid, n] : nodes_)
    if (auto p = position_parent(n.pos); p && *p == id) return false;
  return true;
}

bool cluster_is_closed(const PointTree& tree, const Cluster& c) {
  for (PointId q : c) {
    if (!tree.contains(q)) return false;
    if (auto p = tree.parent(q); p && !c.count(*p)) return false;
  }
  return true;
}

int cluster_depth_below(const PointTree& tree, const Cluster& c, PointId q) {
  int best = 0;
  for (PointId child : tree.children(q))
    if (c.count(child)) best = std::max(best, 1 + cluster_depth_below(tree, c, child));
  return best;
}

}  // namespace logsurf
