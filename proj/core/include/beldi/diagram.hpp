#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "beldi/table.hpp"

namespace beldi {

struct Observation {
  int outcome = 0;
  // Once absorbed the node's table has lost its own outcome axis and holds a
  // likelihood over the remaining parent configurations.
  bool absorbed = false;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct NodeRecord {
  NodeId id = kNoNode;
  std::string name;
  std::vector<std::string> outcomes;
  std::vector<NodeId> parents;
  PotentialTable table;
  std::optional<Observation> observed;

  int cardinality() const { return static_cast<int>(outcomes.size()); }
  bool is_unobserved() const { return !observed.has_value(); }
  bool is_absorbed() const { return observed && observed->absorbed; }
};

struct Arc {
  NodeId from = kNoNode;
  NodeId to = kNoNode;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend bool operator<(const Arc& a, const Arc& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  }
};

struct Diagnostic {
  NodeId node = kNoNode;  // kNoNode for diagram-wide findings
  std::string invariant;
  std::string message;
};

// Directed acyclic diagram of discrete variables. Node ids are insertion
// indices and never change; all iteration respects them, which is what makes
// every downstream tie-break deterministic. Mutation requires exclusive
// access; const members are safe to call from concurrent readers.
class BeliefDiagram {
 public:
  // Permissive builder surface: structural mistakes are reported by
  // validate() rather than rejected here, except for plainly broken
  // arguments (duplicate name, id out of range).
  NodeId add_node(std::string name, std::vector<std::string> outcomes);
  void set_parents(NodeId node, std::vector<NodeId> parents);
  void set_table(NodeId node, PotentialTable table);
  void set_observed(NodeId node, std::optional<Observation> obs);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  bool has_node(NodeId id) const { return id >= 0 && id < node_count(); }
  const NodeRecord& node(NodeId id) const;
  NodeRecord& node(NodeId id);
  const std::vector<NodeRecord>& nodes() const { return nodes_; }

  NodeId find(const std::string& name) const;  // kNoNode if absent
  int outcome_index(NodeId node, const std::string& label) const;  // -1 if absent

  bool has_arc(NodeId from, NodeId to) const;
  std::vector<NodeId> children_of(NodeId node) const;
  std::vector<Arc> arcs() const;  // sorted
  int in_degree(NodeId id) const { return static_cast<int>(node(id).parents.size()); }

  // Proper ancestors (parents, their parents, ...), ascending by id.
  std::vector<NodeId> ancestors_of(NodeId node) const;

  // Upper bound on outcome count per node enforced by validate(); keeps the
  // enumeration oracle's state space bounded. Not a semantic limit.
  int max_outcomes_per_node() const { return max_outcomes_; }
  void set_max_outcomes_per_node(int cap) { max_outcomes_ = cap; }

  std::vector<Diagnostic> validate() const;

 private:
  std::vector<NodeRecord> nodes_;
  std::unordered_map<std::string, NodeId> by_name_;
  int max_outcomes_ = 64;
};

// Expected table axes for a node given its current status and parents:
// [self, parents...] while the own axis is present, [parents...] once
// absorbed.
std::vector<TableAxis> expected_axes(const BeliefDiagram& d, NodeId node);

}  // namespace beldi
