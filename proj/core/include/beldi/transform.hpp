#pragma once

#include <optional>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/trace.hpp"

namespace beldi {

struct EvidenceAssertion {
  NodeId node = kNoNode;
  int outcome = 0;

  friend bool operator==(const EvidenceAssertion&, const EvidenceAssertion&) = default;
};

// Parent-set bookkeeping for reversing the arc tail -> head, where head is an
// absorbed evidence node. Both endpoints end up conditioned on the merged
// set; the head additionally loses the tail.
struct ReversalFrame {
  NodeId tail = kNoNode;
  NodeId head = kNoNode;
  std::vector<NodeId> tail_only;        // parents of tail not conditioning head
  std::vector<NodeId> head_only;        // parents of head (minus tail) not conditioning tail
  std::vector<NodeId> shared;           // common parents
  std::vector<NodeId> tail_new_parents; // old tail parents, then head_only
  std::vector<NodeId> head_new_parents; // old head parents minus tail, then tail_only
};

ReversalFrame reversal_frame(const BeliefDiagram& d, NodeId tail, NodeId head);

// Records node = outcome: the node's own axis collapses to the observed
// slice (a likelihood over its parents), every child's table is sliced at the
// outcome and the arc to it deleted. Throws already-observed,
// outcome-out-of-range, impossible-evidence.
TransformTrace absorb_evidence(BeliefDiagram& d, const EvidenceAssertion& e);

// Bayes-reverses tail -> head per the frame: the head's likelihood sums the
// tail out, the tail's table becomes the posterior conditional given the
// merged parents. Requires head absorbed, tail unobserved, the arc present,
// and no other directed path tail ~> head (that path would close a cycle).
TransformTrace evidence_reverse(BeliefDiagram& d, NodeId tail, NodeId head);

// Repeatedly reverses the arc from the latest-ordered remaining parent into
// `node` until it is disconnected. `ordering`, when given, must list exactly
// the node's indirect predecessors in a topologically consistent order;
// default is ordered_list restricted to them.
TransformTrace propagate_evidence(BeliefDiagram& d, NodeId node,
                                  std::optional<std::vector<NodeId>> ordering = std::nullopt);

// Propagates every absorbed-but-connected evidence node, ascending id order.
TransformTrace propagate_all_evidence(BeliefDiagram& d);

}  // namespace beldi
