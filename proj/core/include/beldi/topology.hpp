#pragma once

#include <vector>

#include "beldi/diagram.hpp"

namespace beldi {

enum class TopologyClass {
  forest,                // every node has at most one parent
  polytree_not_forest,   // undirected skeleton acyclic, some in-degree > 1
  multiply_connected,    // undirected cycle present
};

const char* topology_name(TopologyClass c);

// Deterministic topological order: repeatedly emit the lowest-id node whose
// parents are all emitted. Throws Errc::cycle_detected.
std::vector<NodeId> ordered_list(const BeliefDiagram& d);

// True when a directed path from -> to exists. `excluding` removes one arc
// from consideration, which is how the reversal precondition ("no other
// directed path from i to j") is phrased.
bool has_directed_path(const BeliefDiagram& d, NodeId from, NodeId to);
bool has_directed_path(const BeliefDiagram& d, NodeId from, NodeId to, Arc excluding);

// Classifies the diagram over unobserved nodes and still-connected evidence
// nodes; fully disconnected evidence nodes cannot affect the class.
TopologyClass classify_topology(const BeliefDiagram& d);

}  // namespace beldi
