#include "beldi/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "beldi/errors.hpp"
#include "beldi/topology.hpp"

namespace beldi {

NodeId BeliefDiagram::add_node(std::string name, std::vector<std::string> outcomes) {
  if (by_name_.count(name)) {
    throw std::invalid_argument("duplicate node name: " + name);
  }
  NodeId id = static_cast<NodeId>(nodes_.size());
  NodeRecord rec;
  rec.id = id;
  rec.name = std::move(name);
  rec.outcomes = std::move(outcomes);
  by_name_.emplace(rec.name, id);
  nodes_.push_back(std::move(rec));
  return id;
}

void BeliefDiagram::set_parents(NodeId node, std::vector<NodeId> parents) {
  this->node(node).parents = std::move(parents);
}

void BeliefDiagram::set_table(NodeId node, PotentialTable table) {
  this->node(node).table = std::move(table);
}

void BeliefDiagram::set_observed(NodeId node, std::optional<Observation> obs) {
  this->node(node).observed = std::move(obs);
}

const NodeRecord& BeliefDiagram::node(NodeId id) const {
  if (!has_node(id)) throw std::out_of_range("no such node id");
  return nodes_[static_cast<std::size_t>(id)];
}

NodeRecord& BeliefDiagram::node(NodeId id) {
  if (!has_node(id)) throw std::out_of_range("no such node id");
  return nodes_[static_cast<std::size_t>(id)];
}

NodeId BeliefDiagram::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoNode : it->second;
}

int BeliefDiagram::outcome_index(NodeId node, const std::string& label) const {
  const NodeRecord& rec = this->node(node);
  for (int i = 0; i < rec.cardinality(); ++i) {
    if (rec.outcomes[static_cast<std::size_t>(i)] == label) return i;
  }
  return -1;
}

bool BeliefDiagram::has_arc(NodeId from, NodeId to) const {
  const NodeRecord& rec = node(to);
  return std::find(rec.parents.begin(), rec.parents.end(), from) != rec.parents.end();
}

std::vector<NodeId> BeliefDiagram::children_of(NodeId node) const {
  std::vector<NodeId> out;
  for (const NodeRecord& rec : nodes_) {
    if (std::find(rec.parents.begin(), rec.parents.end(), node) != rec.parents.end()) {
      out.push_back(rec.id);
    }
  }
  return out;
}

std::vector<Arc> BeliefDiagram::arcs() const {
  std::vector<Arc> out;
  for (const NodeRecord& rec : nodes_) {
    for (NodeId p : rec.parents) out.push_back({p, rec.id});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> BeliefDiagram::ancestors_of(NodeId node) const {
  std::vector<bool> seen(static_cast<std::size_t>(node_count()), false);
  std::vector<NodeId> stack{node};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    for (NodeId p : this->node(cur).parents) {
      if (has_node(p) && !seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId i = 0; i < node_count(); ++i) {
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

std::vector<TableAxis> expected_axes(const BeliefDiagram& d, NodeId node) {
  const NodeRecord& rec = d.node(node);
  std::vector<TableAxis> axes;
  if (!rec.is_absorbed()) axes.push_back({rec.id, rec.cardinality()});
  for (NodeId p : rec.parents) {
    axes.push_back({p, d.has_node(p) ? d.node(p).cardinality() : 0});
  }
  return axes;
}

namespace {

void add(std::vector<Diagnostic>& out, NodeId node, const char* invariant, std::string msg) {
  out.push_back(Diagnostic{node, invariant, std::move(msg)});
}

}  // namespace

std::vector<Diagnostic> BeliefDiagram::validate() const {
  std::vector<Diagnostic> out;

  for (const NodeRecord& rec : nodes_) {
    if (rec.outcomes.empty()) {
      add(out, rec.id, "outcomes", "node '" + rec.name + "' declares no outcomes");
    }
    if (rec.cardinality() > max_outcomes_) {
      std::ostringstream os;
      os << "node '" << rec.name << "' has " << rec.cardinality()
         << " outcomes, cap is " << max_outcomes_;
      add(out, rec.id, "outcome-cap", os.str());
    }
    std::set<std::string> labels(rec.outcomes.begin(), rec.outcomes.end());
    if (labels.size() != rec.outcomes.size()) {
      add(out, rec.id, "outcomes", "node '" + rec.name + "' repeats an outcome label");
    }

    std::set<NodeId> seen_parents;
    for (NodeId p : rec.parents) {
      if (!has_node(p)) {
        add(out, rec.id, "parents", "node '" + rec.name + "' references an unknown parent id");
      } else if (p == rec.id) {
        add(out, rec.id, "parents", "node '" + rec.name + "' lists itself as a parent");
      } else if (!seen_parents.insert(p).second) {
        add(out, rec.id, "parents", "node '" + rec.name + "' repeats parent '" + node(p).name + "'");
      }
    }

    if (rec.observed) {
      if (rec.observed->outcome < 0 || rec.observed->outcome >= rec.cardinality()) {
        add(out, rec.id, "observation", "node '" + rec.name + "' observes an out-of-range outcome");
      }
      if (rec.is_absorbed() && !children_of(rec.id).empty()) {
        add(out, rec.id, "evidence-children",
            "absorbed evidence node '" + rec.name + "' still has children");
      }
    }
  }

  // Structural checks below assume resolvable parents.
  bool parents_ok = out.empty();
  if (parents_ok) {
    try {
      ordered_list(*this);
    } catch (const DiagramError&) {
      add(out, kNoNode, "acyclicity", "diagram contains a directed cycle");
    }
  }

  for (const NodeRecord& rec : nodes_) {
    if (!parents_ok) break;
    std::vector<TableAxis> want = expected_axes(*this, rec.id);
    if (rec.table.axes() != want) {
      std::ostringstream os;
      os << "node '" << rec.name << "' table has " << rec.table.size()
         << " entries and axes that do not match [";
      os << (rec.is_absorbed() ? "" : "self");
      for (std::size_t i = 0; i < rec.parents.size(); ++i) {
        if (!rec.is_absorbed() || i > 0) os << ' ';
        os << node(rec.parents[i]).name;
      }
      os << "], expected " << axes_volume(want) << " entries";
      add(out, rec.id, "dimensions", os.str());
      continue;
    }

    bool bad_value = false;
    for (double v : rec.table.entries()) {
      if (!(v >= 0.0) || !std::isfinite(v)) bad_value = true;
    }
    if (bad_value) {
      add(out, rec.id, "nonnegativity",
          "node '" + rec.name + "' table holds a negative or non-finite entry");
      continue;
    }

    if (!rec.is_absorbed()) {
      // Every parent configuration must leave the node a normalizable column.
      std::size_t card = static_cast<std::size_t>(rec.cardinality());
      if (card > 0 && rec.table.size() >= card) {
        std::size_t block = rec.table.size() / card;
        for (std::size_t rest = 0; rest < block; ++rest) {
          double colsum = 0.0;
          for (std::size_t v = 0; v < card; ++v) colsum += rec.table.entries()[v * block + rest];
          if (colsum == 0.0) {
            add(out, rec.id, "zero-column",
                "node '" + rec.name + "' has an all-zero column for some parent configuration");
            break;
          }
        }
      }
    }
  }

  return out;
}

}  // namespace beldi
