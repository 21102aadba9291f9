#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/oracle.hpp"
#include "beldi/topology.hpp"

namespace beldi {

struct PosteriorReport {
  enum class Method { propagation, oracle_fallback };

  // Normalized marginal per unobserved node, ascending id.
  std::map<NodeId, std::vector<double>> marginals;
  Method method = Method::propagation;
  TopologyClass topology = TopologyClass::forest;
  int reversal_count = 0;
  int fillin_count = 0;
  // Times an absorption detached children (the case where batch and
  // message-passing traces legitimately diverge).
  int disconnected_child_events = 0;
};

// Copy of the diagram restricted to `targets` and their ancestors; everything
// else cannot influence the targets' marginals once evidence is propagated.
// Node ids are reassigned densely, names survive.
BeliefDiagram prune_barren(const BeliefDiagram& d, const std::vector<NodeId>& targets);

// Sweep passes over unobserved nodes: pass k holds the nodes whose parents
// were all computed in earlier passes.
std::vector<std::vector<NodeId>> sweep_schedule(const BeliefDiagram& d);

// Computes every unobserved node's marginal on a singly-connected diagram
// with all evidence propagated: parentless nodes normalize their own table,
// others combine the parents' marginals through the (column-normalized)
// conditional. Parents on a singly-connected diagram are independent, which
// is what licenses the product of their marginals.
PosteriorReport propagate_probabilities(const BeliefDiagram& d);

// propagate_probabilities when singly connected; otherwise the enumeration
// fallback over the transformed diagram when `allow_fallback`, else
// not-singly-connected.
PosteriorReport posterior_marginals(const BeliefDiagram& d, bool allow_fallback,
                                    std::size_t joint_cap = kDefaultJointCap);

// node <TAB> outcome <TAB> probability, six decimals, nodes ascending by id,
// outcomes in declaration order. The strategy-equivalence checks compare
// these bytes, so the formatting is part of the contract.
std::string format_report_tsv(const BeliefDiagram& d, const PosteriorReport& r);

}  // namespace beldi
