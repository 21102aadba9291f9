#pragma once

#include <set>
#include <string>
#include <vector>

#include "beldi/diagram.hpp"

namespace beldi {

// One structural event. Arc bookkeeping convention: `reverse` itself deletes
// the arc (i, j) and re-parents the evidence node j onto i's remaining
// parents (the likelihood grows those axes no matter what), so replay derives
// that migration from the step. Explicit arc_added records are reserved for
// arcs grafted onto the unobserved node i - the fill-ins that can destroy
// single-connectedness - and explicit arc_deleted records for absorption's
// child detachments.
struct TraceStep {
  enum class Kind { absorb, reverse, arc_added, arc_deleted };
  Kind kind;
  NodeId a = kNoNode;  // absorb: node; reverse: i; arcs: tail
  NodeId b = kNoNode;  // reverse: j; arcs: head
  int outcome = -1;    // absorb only

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct TransformTrace {
  std::vector<TraceStep> steps;
  int reversal_count = 0;
  int fillin_count = 0;

  void absorb(NodeId node, int outcome) {
    steps.push_back({TraceStep::Kind::absorb, node, kNoNode, outcome});
  }
  void reverse(NodeId i, NodeId j) {
    steps.push_back({TraceStep::Kind::reverse, i, j, -1});
    ++reversal_count;
  }
  void arc_added(NodeId from, NodeId to) {
    steps.push_back({TraceStep::Kind::arc_added, from, to, -1});
    ++fillin_count;
  }
  void arc_deleted(NodeId from, NodeId to) {
    steps.push_back({TraceStep::Kind::arc_deleted, from, to, -1});
  }
  void append(const TransformTrace& other);
};

// Applies the steps to an arc set; the result must equal the transformed
// diagram's arcs. Checked by tests, usable for post-mortems.
std::set<Arc> replay_arcs(std::set<Arc> initial, const std::vector<TraceStep>& steps);

// Line-per-step rendering (ABSORB / REVERSE / ARC+ / ARC-), names resolved
// against the diagram the trace was produced from.
std::string format_trace(const BeliefDiagram& d, const TransformTrace& trace);

}  // namespace beldi
