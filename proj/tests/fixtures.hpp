// Hand-checkable diagrams and small helpers shared by the suites. The frozen
// numbers quoted in comments were derived by hand from the tables below and
// are asserted verbatim in the tests.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/oracle.hpp"
#include "beldi/transform.hpp"

namespace fixtures {

using beldi::BeliefDiagram;
using beldi::EvidenceAssertion;
using beldi::NodeId;
using beldi::PotentialTable;
using beldi::TableAxis;

// Adds a node with its conditional table in one go. Entries are row-major
// with the node's own axis first (slowest), parents after in list order.
inline NodeId add(BeliefDiagram& d, const std::string& name,
                  std::vector<std::string> outcomes, std::vector<NodeId> parents,
                  std::vector<double> entries) {
  NodeId id = d.add_node(name, std::move(outcomes));
  std::vector<TableAxis> axes{{id, d.node(id).cardinality()}};
  for (NodeId p : parents) axes.push_back({p, d.node(p).cardinality()});
  d.set_parents(id, std::move(parents));
  d.set_table(id, PotentialTable(std::move(axes), std::move(entries)));
  return id;
}

// X1 -> X2. Joint: (a,t)=0.14 (a,f)=0.06 (b,t)=0.24 (b,f)=0.56, so
// P(X2=t)=0.38 and P(X1=a | X2=t) = 0.14/0.38 = 7/19.
inline BeliefDiagram chain2() {
  BeliefDiagram d;
  NodeId x1 = add(d, "X1", {"a", "b"}, {}, {0.2, 0.8});
  add(d, "X2", {"t", "f"}, {x1}, {0.7, 0.3, 0.3, 0.7});
  return d;
}

// 1 -> 2 -> 3: observing the middle node detaches 3 during absorption and
// leaves one reversal against the root.
inline BeliefDiagram chain3() {
  BeliefDiagram d;
  NodeId n1 = add(d, "1", {"a", "b"}, {}, {0.3, 0.7});
  NodeId n2 = add(d, "2", {"a", "b"}, {n1}, {0.6, 0.2, 0.4, 0.8});
  add(d, "3", {"a", "b"}, {n2}, {0.9, 0.4, 0.1, 0.6});
  return d;
}

// 1 -> 2 -> 4: observing the leaf pulls evidence to the root in exactly two
// reversals with no fill-in arcs.
inline BeliefDiagram chain124() {
  BeliefDiagram d;
  NodeId n1 = add(d, "1", {"a", "b"}, {}, {0.25, 0.75});
  NodeId n2 = add(d, "2", {"a", "b"}, {n1}, {0.55, 0.15, 0.45, 0.85});
  add(d, "4", {"a", "b"}, {n2}, {0.7, 0.35, 0.3, 0.65});
  return d;
}

// Two root-to-sink paths: 1->3->5, 2->4->5, 5->6. Propagating evidence from
// 6 reverses five arcs and grafts fill-ins between the paths, leaving the
// diagram multiply connected.
inline BeliefDiagram twopath6() {
  BeliefDiagram d;
  NodeId n1 = add(d, "1", {"a", "b"}, {}, {0.35, 0.65});
  NodeId n2 = add(d, "2", {"a", "b"}, {}, {0.6, 0.4});
  NodeId n3 = add(d, "3", {"a", "b"}, {n1}, {0.8, 0.3, 0.2, 0.7});
  NodeId n4 = add(d, "4", {"a", "b"}, {n2}, {0.45, 0.1, 0.55, 0.9});
  NodeId n5 = add(d, "5", {"a", "b"}, {n3, n4},
                  {0.9, 0.6, 0.5, 0.05, 0.1, 0.4, 0.5, 0.95});
  add(d, "6", {"a", "b"}, {n5}, {0.75, 0.2, 0.25, 0.8});
  return d;
}

// Ten-node polytree, three roots (1, 2, 5), four leaves (6, 7, 8, 9); node 9
// has two parents so this is not a forest. Sweep passes: {1,2,5}, {3,4,10},
// {6,7,8,9}.
inline BeliefDiagram poly10() {
  BeliefDiagram d;
  NodeId n1 = add(d, "1", {"a", "b"}, {}, {0.4, 0.6});
  NodeId n2 = add(d, "2", {"a", "b"}, {}, {0.55, 0.45});
  NodeId n3 = add(d, "3", {"a", "b"}, {n1, n2},
                  {0.9, 0.5, 0.35, 0.1, 0.1, 0.5, 0.65, 0.9});
  NodeId n4 = add(d, "4", {"a", "b"}, {n2}, {0.7, 0.2, 0.3, 0.8});
  NodeId n5 = add(d, "5", {"a", "b"}, {}, {0.3, 0.7});
  NodeId n10 = add(d, "10", {"a", "b"}, {n5}, {0.6, 0.25, 0.4, 0.75});
  add(d, "6", {"a", "b"}, {n3}, {0.8, 0.3, 0.2, 0.7});
  add(d, "7", {"a", "b"}, {n3}, {0.15, 0.65, 0.85, 0.35});
  add(d, "8", {"a", "b"}, {n4}, {0.5, 0.05, 0.5, 0.95});
  add(d, "9", {"a", "b"}, {n4, n10}, {0.2, 0.4, 0.6, 0.8, 0.8, 0.6, 0.4, 0.2});
  return d;
}

// P(Rain=yes | Grass=wet) = 0.18/0.34 = 0.529412 at six decimals.
inline const char* rain_text() {
  return
      "# rain and what it does to the lawn\n"
      "node Rain : yes no\n"
      "node Grass : wet dry\n"
      "cpt Rain { [] : 0.2 0.8 ; }\n"
      "cpt Grass | Rain {\n"
      "  [yes] : 0.9 0.1 ;\n"
      "  [no]  : 0.2 0.8 ;\n"
      "}\n";
}

inline EvidenceAssertion ev(const BeliefDiagram& d, const std::string& node,
                            const std::string& outcome) {
  NodeId id = d.find(node);
  return {id, d.outcome_index(id, outcome)};
}

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

inline std::vector<double> normalized_copy(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return v;
}

// Posterior marginal straight from the brute-force joint of `d` conditioned
// on `evidence`; the reference the engines are measured against.
inline std::vector<double> oracle_posterior(const BeliefDiagram& d,
                                            const std::vector<EvidenceAssertion>& evidence,
                                            NodeId target) {
  beldi::JointTable joint = beldi::enumerate_joint(d);
  for (const EvidenceAssertion& e : evidence) {
    beldi::condition_joint(joint, e.node, e.outcome);
  }
  return beldi::marginal_from_joint(joint, target);
}

// Largest deviation between any unobserved node's marginal computed from the
// current (possibly transformed) diagram and from a reference joint.
inline double max_marginal_gap(const BeliefDiagram& current, const beldi::JointTable& reference) {
  beldi::JointTable now = beldi::enumerate_joint(current);
  double worst = 0.0;
  for (const beldi::NodeRecord& rec : current.nodes()) {
    if (!rec.is_unobserved()) continue;
    worst = std::max(worst, linf(beldi::marginal_from_joint(now, rec.id),
                                 beldi::marginal_from_joint(reference, rec.id)));
  }
  return worst;
}

}  // namespace fixtures
