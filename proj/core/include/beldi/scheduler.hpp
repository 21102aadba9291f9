#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "beldi/marginals.hpp"
#include "beldi/trace.hpp"
#include "beldi/transform.hpp"

namespace beldi {

struct PropagationMessage {
  enum class Kind {
    likelihood_up,  // payload: likelihood over the target's outcomes
    marginal_down,  // payload: normalized marginal over the origin's outcomes
  };
  Kind kind;
  NodeId origin = kNoNode;
  NodeId target = kNoNode;
  std::vector<double> payload;
  std::uint64_t sequence = 0;
};

struct SchedulerStep {
  enum class Kind { absorbed, processed_up, processed_down };
  Kind kind;
  NodeId origin = kNoNode;
  NodeId target = kNoNode;
  int outcome = -1;        // absorbed only
  bool detached_children = false;  // absorbed only: children were cut loose
};

// Work queue for message-passing propagation. Pop order: evidence first,
// then likelihoods climbing toward roots (posting order), then marginals
// flowing down in graph order; a pending downward message is replaced by a
// newer one for the same origin/target pair. Also accumulates the marginals
// computed so far - the queue plus the diagram is the whole run state.
class PriorityQueueState {
 public:
  explicit PriorityQueueState(const BeliefDiagram& d);

  void post_evidence(const EvidenceAssertion& e);
  void post_upward(NodeId origin, NodeId target, std::vector<double> payload);
  void post_downward(NodeId origin, NodeId target, std::vector<double> payload);

  bool empty() const;
  std::size_t size() const;

  std::map<NodeId, std::vector<double>>& marginals() { return marginals_; }
  const std::map<NodeId, std::vector<double>>& marginals() const { return marginals_; }

  // Position in the initial diagram's ordered list; absorption only deletes
  // arcs, so the order stays topologically valid for the whole run.
  int graph_position(NodeId id) const { return positions_[static_cast<std::size_t>(id)]; }

  friend SchedulerStep scheduler_step(PriorityQueueState& q, BeliefDiagram& d);

 private:
  std::deque<EvidenceAssertion> evidence_;
  std::deque<PropagationMessage> upward_;
  std::map<std::pair<int, int>, PropagationMessage> downward_;
  std::map<NodeId, std::vector<double>> marginals_;
  std::vector<int> positions_;
  std::uint64_t next_sequence_ = 0;
};

// Applies the highest-priority pending item and returns what happened.
// Throws empty-queue when nothing is pending.
SchedulerStep scheduler_step(PriorityQueueState& q, BeliefDiagram& d);

// Absorb everything, pull evidence out through reversals, then sweep
// marginals (enumeration fallback when the posterior diagram is multiply
// connected and `allow_fallback` is set).
PosteriorReport run_batch(BeliefDiagram& d, const std::vector<EvidenceAssertion>& evidence,
                          bool allow_fallback = false, TransformTrace* trace_out = nullptr,
                          std::size_t joint_cap = kDefaultJointCap);

// Forest-only propagation that never reverses an arc: likelihood messages
// climb, marginal messages descend, orderly per the queue rules. `waves`
// drains the queue after each assertion (evidence arriving one piece at a
// time); otherwise all assertions are posted up front.
PosteriorReport run_message_passing(BeliefDiagram& d,
                                    const std::vector<EvidenceAssertion>& evidence,
                                    bool waves = false,
                                    std::vector<SchedulerStep>* steps_out = nullptr);

std::string format_steps(const BeliefDiagram& d, const std::vector<SchedulerStep>& steps);

}  // namespace beldi
