#pragma once

#include <cstddef>
#include <vector>

#include "beldi/diagram.hpp"

namespace beldi {

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 22;

// Brute-force joint over every node that still owns an outcome axis, laid out
// over those nodes in ascending id order. Deliberately the dumbest correct
// machine in the repo: a plain product of tables, used to cross-check the
// propagation engines. Keep it independent of the transform module.
struct JointTable {
  std::vector<NodeId> order;  // ascending ids, aligned with table axes
  PotentialTable table;

  bool covers(NodeId node) const { return table.has_axis(node); }
};

// Multiplies every node's table into the full outcome grid. Tables of
// absorbed evidence nodes enter as likelihood factors over their parent axes.
// Throws state-space-too-large above `cap` joint states and
// impossible-evidence when the product is identically zero.
JointTable enumerate_joint(const BeliefDiagram& d, std::size_t cap = kDefaultJointCap);

// Zeroes every entry inconsistent with node = outcome. Idempotent. Throws
// unknown-node if the joint does not range over `node`, outcome-out-of-range,
// and impossible-evidence if nothing consistent remains.
void condition_joint(JointTable& joint, NodeId node, int outcome);

// Normalized marginal vector for one covered node (sums to 1).
std::vector<double> marginal_from_joint(const JointTable& joint, NodeId node);

}  // namespace beldi
