#include "beldi/transform.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "beldi/errors.hpp"
#include "beldi/topology.hpp"

namespace beldi {

namespace {

bool contains(const std::vector<NodeId>& v, NodeId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<TableAxis> axes_for(const BeliefDiagram& d, NodeId own,
                                const std::vector<NodeId>& parents) {
  std::vector<TableAxis> axes;
  if (own != kNoNode) axes.push_back({own, d.node(own).cardinality()});
  for (NodeId p : parents) axes.push_back({p, d.node(p).cardinality()});
  return axes;
}

}  // namespace

ReversalFrame reversal_frame(const BeliefDiagram& d, NodeId tail, NodeId head) {
  const NodeRecord& ti = d.node(tail);
  const NodeRecord& hj = d.node(head);

  ReversalFrame f;
  f.tail = tail;
  f.head = head;
  for (NodeId p : ti.parents) {
    if (contains(hj.parents, p)) {
      f.shared.push_back(p);
    } else {
      f.tail_only.push_back(p);
    }
  }
  for (NodeId p : hj.parents) {
    if (p != tail && !contains(ti.parents, p)) f.head_only.push_back(p);
  }

  f.tail_new_parents = ti.parents;
  for (NodeId p : f.head_only) f.tail_new_parents.push_back(p);

  for (NodeId p : hj.parents) {
    if (p != tail) f.head_new_parents.push_back(p);
  }
  for (NodeId p : f.tail_only) f.head_new_parents.push_back(p);
  return f;
}

TransformTrace absorb_evidence(BeliefDiagram& d, const EvidenceAssertion& e) {
  if (!d.has_node(e.node)) fail(Errc::unknown_node, "evidence references an unknown node");
  NodeRecord& rec = d.node(e.node);
  if (!rec.is_unobserved()) {
    fail(Errc::already_observed, "node '" + rec.name + "' already carries evidence");
  }
  if (e.outcome < 0 || e.outcome >= rec.cardinality()) {
    std::ostringstream os;
    os << "outcome index " << e.outcome << " out of range for node '" << rec.name << "'";
    fail(Errc::outcome_out_of_range, os.str());
  }

  TransformTrace trace;
  trace.absorb(e.node, e.outcome);

  // Own table keeps only the observed slice: the likelihood this outcome
  // lends to each parent configuration.
  rec.table = rec.table.slice(e.node, e.outcome);
  rec.table.rescale_unit_max();
  rec.observed = Observation{e.outcome, true};

  for (NodeId c : d.children_of(e.node)) {
    NodeRecord& child = d.node(c);
    child.table = child.table.slice(e.node, e.outcome);
    child.table.rescale_unit_max();
    std::erase(child.parents, e.node);
    trace.arc_deleted(e.node, c);
  }

  if (d.node(e.node).table.all_zero()) {
    fail(Errc::impossible_evidence,
         "observed outcome '" + rec.outcomes[static_cast<std::size_t>(e.outcome)] +
             "' of node '" + rec.name + "' has zero probability");
  }
  return trace;
}

TransformTrace evidence_reverse(BeliefDiagram& d, NodeId tail, NodeId head) {
  if (!d.has_node(tail) || !d.has_node(head)) {
    fail(Errc::unknown_node, "reversal endpoint is not a node");
  }
  if (!d.node(head).is_absorbed()) {
    fail(Errc::not_an_evidence_arc, "reversal head '" + d.node(head).name +
                                        "' is not an absorbed evidence node");
  }
  if (!d.node(tail).is_unobserved()) {
    fail(Errc::not_an_evidence_arc,
         "reversal tail '" + d.node(tail).name + "' is not unobserved");
  }
  if (!d.has_arc(tail, head)) {
    fail(Errc::not_an_evidence_arc, "no arc " + d.node(tail).name + " -> " + d.node(head).name);
  }
  if (has_directed_path(d, tail, head, Arc{tail, head})) {
    // A second route means reversing this arc would close a directed cycle.
    fail(Errc::precondition_path_exists,
         "another directed path " + d.node(tail).name + " ~> " + d.node(head).name + " exists");
  }

  ReversalFrame f = reversal_frame(d, tail, head);
  NodeRecord& ti = d.node(tail);
  NodeRecord& hj = d.node(head);
  int tail_card = ti.cardinality();

  // Joint slice over the tail and the merged parent set; exact product, so
  // the diagram-wide factorization is preserved step by step.
  PotentialTable joint_tail_order = PotentialTable::product(
      axes_for(d, tail, f.tail_new_parents), ti.table, hj.table);
  PotentialTable joint_head_order = PotentialTable::product(
      axes_for(d, tail, f.head_new_parents), ti.table, hj.table);

  // New head likelihood: tail summed out.
  PotentialTable head_new = joint_head_order.sum_out(tail);

  // New tail conditional: joint divided by the summed likelihood, column by
  // column. Configurations with zero likelihood get the uniform column; any
  // choice there multiplies a zero factor, uniform keeps columns normalizable.
  PotentialTable tail_new = std::move(joint_tail_order);
  tail_new.divide_by(head_new, 1.0 / static_cast<double>(tail_card));

  TransformTrace trace;
  trace.reverse(tail, head);
  for (NodeId q : f.head_only) trace.arc_added(q, tail);

  ti.parents = f.tail_new_parents;
  ti.table = std::move(tail_new);
  ti.table.rescale_unit_max();
  hj.parents = f.head_new_parents;
  hj.table = std::move(head_new);
  hj.table.rescale_unit_max();

  if (d.node(head).table.all_zero()) {
    fail(Errc::impossible_evidence,
         "evidence at node '" + hj.name + "' is impossible under every configuration");
  }
  return trace;
}

TransformTrace propagate_evidence(BeliefDiagram& d, NodeId node,
                                  std::optional<std::vector<NodeId>> ordering) {
  if (!d.has_node(node)) fail(Errc::unknown_node, "propagation target is not a node");
  if (!d.node(node).is_absorbed()) {
    fail(Errc::not_absorbed, "node '" + d.node(node).name + "' has no absorbed evidence");
  }

  std::vector<NodeId> predecessors = d.ancestors_of(node);
  std::vector<NodeId> order;
  if (ordering) {
    order = *ordering;
    std::set<NodeId> given(order.begin(), order.end());
    std::set<NodeId> want(predecessors.begin(), predecessors.end());
    if (given != want || order.size() != given.size()) {
      fail(Errc::invalid_ordering,
           "ordering must list each indirect predecessor of '" + d.node(node).name +
               "' exactly once");
    }
    std::vector<int> pos(static_cast<std::size_t>(d.node_count()), -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    }
    for (NodeId p : predecessors) {
      for (NodeId q : d.node(p).parents) {
        if (pos[static_cast<std::size_t>(q)] > pos[static_cast<std::size_t>(p)]) {
          fail(Errc::invalid_ordering, "ordering lists '" + d.node(p).name +
                                           "' before its parent '" + d.node(q).name + "'");
        }
      }
    }
  } else {
    for (NodeId id : ordered_list(d)) {
      if (std::find(predecessors.begin(), predecessors.end(), id) != predecessors.end()) {
        order.push_back(id);
      }
    }
  }

  std::vector<int> pos(static_cast<std::size_t>(d.node_count()), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }

  // Reversing against the latest-ordered remaining parent keeps the "no other
  // path" precondition holding by construction: any second route would pass
  // through a later-ordered parent, which would have been chosen instead.
  TransformTrace trace;
  while (!d.node(node).parents.empty()) {
    NodeId pick = kNoNode;
    int best = -1;
    for (NodeId p : d.node(node).parents) {
      if (pos[static_cast<std::size_t>(p)] > best) {
        best = pos[static_cast<std::size_t>(p)];
        pick = p;
      }
    }
    trace.append(evidence_reverse(d, pick, node));
  }
  return trace;
}

TransformTrace propagate_all_evidence(BeliefDiagram& d) {
  TransformTrace trace;
  for (NodeId id = 0; id < d.node_count(); ++id) {
    if (d.node(id).is_absorbed() && !d.node(id).parents.empty()) {
      trace.append(propagate_evidence(d, id));
    }
  }
  return trace;
}

}  // namespace beldi
