#include "beldi/topology.hpp"

#include <numeric>
#include <queue>

#include "beldi/errors.hpp"

namespace beldi {

const char* topology_name(TopologyClass c) {
  switch (c) {
    case TopologyClass::forest: return "forest";
    case TopologyClass::polytree_not_forest: return "polytree";
    case TopologyClass::multiply_connected: return "multiply-connected";
  }
  return "?";
}

std::vector<NodeId> ordered_list(const BeliefDiagram& d) {
  int n = d.node_count();
  std::vector<int> pending(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<NodeId>> children(static_cast<std::size_t>(n));
  for (const NodeRecord& rec : d.nodes()) {
    pending[static_cast<std::size_t>(rec.id)] = static_cast<int>(rec.parents.size());
    for (NodeId p : rec.parents) {
      children[static_cast<std::size_t>(p)].push_back(rec.id);
    }
  }

  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
  for (NodeId i = 0; i < n; ++i) {
    if (pending[static_cast<std::size_t>(i)] == 0) ready.push(i);
  }

  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    NodeId cur = ready.top();
    ready.pop();
    out.push_back(cur);
    for (NodeId c : children[static_cast<std::size_t>(cur)]) {
      if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(out.size()) != n) {
    fail(Errc::cycle_detected, "diagram contains a directed cycle");
  }
  return out;
}

bool has_directed_path(const BeliefDiagram& d, NodeId from, NodeId to) {
  return has_directed_path(d, from, to, Arc{kNoNode, kNoNode});
}

bool has_directed_path(const BeliefDiagram& d, NodeId from, NodeId to, Arc excluding) {
  if (from == to) return true;
  std::vector<std::vector<NodeId>> children(static_cast<std::size_t>(d.node_count()));
  for (const NodeRecord& rec : d.nodes()) {
    for (NodeId p : rec.parents) {
      if (p == excluding.from && rec.id == excluding.to) continue;
      children[static_cast<std::size_t>(p)].push_back(rec.id);
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(d.node_count()), false);
  std::vector<NodeId> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    for (NodeId c : children[static_cast<std::size_t>(cur)]) {
      if (c == to) return true;
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
    }
  }
  return false;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // false if already joined (an undirected cycle closes)
  bool join(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
    return true;
  }
};

}  // namespace

TopologyClass classify_topology(const BeliefDiagram& d) {
  bool forest = true;
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.parents.size() > 1) forest = false;
  }
  if (forest) return TopologyClass::forest;

  UnionFind uf(d.node_count());
  for (const NodeRecord& rec : d.nodes()) {
    for (NodeId p : rec.parents) {
      if (!uf.join(p, rec.id)) return TopologyClass::multiply_connected;
    }
  }
  return TopologyClass::polytree_not_forest;
}

}  // namespace beldi
