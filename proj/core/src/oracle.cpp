#include "beldi/oracle.hpp"

#include <sstream>

#include "beldi/errors.hpp"

namespace beldi {

JointTable enumerate_joint(const BeliefDiagram& d, std::size_t cap) {
  JointTable joint;
  std::vector<TableAxis> axes;
  std::size_t states = 1;
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.is_absorbed()) continue;
    std::size_t card = static_cast<std::size_t>(rec.cardinality());
    if (card == 0 || states > cap / card) {
      std::ostringstream os;
      os << "joint state space exceeds cap of " << cap;
      fail(Errc::state_space_too_large, os.str());
    }
    states *= card;
    joint.order.push_back(rec.id);
    axes.push_back({rec.id, rec.cardinality()});
  }

  joint.table = PotentialTable(std::move(axes), std::vector<double>(states, 1.0));
  for (const NodeRecord& rec : d.nodes()) {
    joint.table.multiply_by(rec.table);
  }
  if (joint.table.all_zero()) {
    fail(Errc::impossible_evidence, "joint distribution has no mass");
  }
  return joint;
}

void condition_joint(JointTable& joint, NodeId node, int outcome) {
  int ax = joint.table.axis_of(node);
  if (ax < 0) {
    fail(Errc::unknown_node, "conditioning on a node the joint does not cover");
  }
  int card = joint.table.axes()[static_cast<std::size_t>(ax)].cardinality;
  if (outcome < 0 || outcome >= card) {
    fail(Errc::outcome_out_of_range, "conditioning outcome out of range");
  }

  const std::vector<TableAxis>& axes = joint.table.axes();
  std::vector<double>& entries = joint.table.entries();
  MultiIndex mi(axes);
  std::size_t i = 0;
  do {
    if (mi.digit(ax) != outcome) entries[i] = 0.0;
    ++i;
  } while (mi.next());

  if (joint.table.all_zero()) {
    fail(Errc::impossible_evidence, "evidence assigns zero probability to every configuration");
  }
}

std::vector<double> marginal_from_joint(const JointTable& joint, NodeId node) {
  int ax = joint.table.axis_of(node);
  if (ax < 0) {
    fail(Errc::unknown_node, "marginal requested for a node the joint does not cover");
  }
  int card = joint.table.axes()[static_cast<std::size_t>(ax)].cardinality;

  // Fixed accumulation order: ascending flat index.
  std::vector<long double> acc(static_cast<std::size_t>(card), 0.0L);
  const std::vector<double>& entries = joint.table.entries();
  MultiIndex mi(joint.table.axes());
  std::size_t i = 0;
  do {
    acc[static_cast<std::size_t>(mi.digit(ax))] += entries[i];
    ++i;
  } while (mi.next());

  long double total = 0.0L;
  for (long double v : acc) total += v;
  if (total <= 0.0L) {
    fail(Errc::impossible_evidence, "marginal has no mass");
  }
  std::vector<double> out(static_cast<std::size_t>(card));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<double>(acc[k] / total);
  }
  return out;
}

}  // namespace beldi
