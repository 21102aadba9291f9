#include "beldi/scheduler.hpp"

#include <algorithm>
#include <sstream>

#include "beldi/errors.hpp"

namespace beldi {

PriorityQueueState::PriorityQueueState(const BeliefDiagram& d)
    : positions_(static_cast<std::size_t>(d.node_count()), -1) {
  std::vector<NodeId> order = ordered_list(d);
  for (std::size_t i = 0; i < order.size(); ++i) {
    positions_[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }
}

void PriorityQueueState::post_evidence(const EvidenceAssertion& e) {
  evidence_.push_back(e);
}

void PriorityQueueState::post_upward(NodeId origin, NodeId target, std::vector<double> payload) {
  upward_.push_back({PropagationMessage::Kind::likelihood_up, origin, target,
                     std::move(payload), next_sequence_++});
}

void PriorityQueueState::post_downward(NodeId origin, NodeId target, std::vector<double> payload) {
  PropagationMessage msg{PropagationMessage::Kind::marginal_down, origin, target,
                         std::move(payload), next_sequence_++};
  // A newer marginal for the same pair supersedes the pending one.
  downward_.insert_or_assign({graph_position(origin), graph_position(target)}, std::move(msg));
}

bool PriorityQueueState::empty() const {
  return evidence_.empty() && upward_.empty() && downward_.empty();
}

std::size_t PriorityQueueState::size() const {
  return evidence_.size() + upward_.size() + downward_.size();
}

namespace {

// The updated node has a fresh marginal; let its unobserved children know.
void flood_children(PriorityQueueState& q, const BeliefDiagram& d, NodeId node) {
  for (NodeId c : d.children_of(node)) {
    if (d.node(c).is_unobserved()) {
      q.post_downward(node, c, q.marginals().at(node));
    }
  }
}

// Root-style update: the node's table is its own (sub)posterior now.
void set_root_marginal(PriorityQueueState& q, const BeliefDiagram& d, NodeId node) {
  const PotentialTable& t = d.node(node).table;
  double total = t.sum();
  if (total <= 0.0) {
    fail(Errc::impossible_evidence,
         "evidence leaves node '" + d.node(node).name + "' without mass");
  }
  std::vector<double> m(t.entries());
  for (double& v : m) v /= total;
  q.marginals()[node] = std::move(m);
  flood_children(q, d, node);
}

SchedulerStep apply_evidence(PriorityQueueState& q, BeliefDiagram& d,
                             const EvidenceAssertion& e) {
  std::vector<NodeId> children = d.children_of(e.node);
  std::optional<NodeId> parent;
  if (!d.node(e.node).parents.empty()) parent = d.node(e.node).parents.front();

  absorb_evidence(d, e);

  SchedulerStep step{SchedulerStep::Kind::absorbed, kNoNode, e.node, e.outcome,
                     !children.empty()};

  if (parent) {
    // Ship the absorbed likelihood upward; the node itself keeps the
    // uninformative likelihood so the arc can stay in place untouched.
    NodeRecord& rec = d.node(e.node);
    q.post_upward(e.node, *parent, rec.table.entries());
    rec.table = PotentialTable(rec.table.axes(),
                               std::vector<double>(rec.table.size(), 1.0));
  }

  // Children lost their parent arc at absorption; each is a root of its own
  // subtree now and its sliced table is already its conditioned marginal.
  for (NodeId c : children) {
    if (d.node(c).is_unobserved()) set_root_marginal(q, d, c);
  }
  return step;
}

SchedulerStep apply_upward(PriorityQueueState& q, BeliefDiagram& d,
                           const PropagationMessage& msg) {
  SchedulerStep step{SchedulerStep::Kind::processed_up, msg.origin, msg.target, -1, false};
  NodeRecord& rec = d.node(msg.target);

  if (!rec.is_unobserved()) {
    // The target was observed in the meantime: the likelihood collapses to a
    // constant at the observed outcome. Only a zero is informative.
    if (msg.payload[static_cast<std::size_t>(rec.observed->outcome)] == 0.0) {
      fail(Errc::impossible_evidence,
           "likelihood message contradicts evidence at node '" + rec.name + "'");
    }
    return step;
  }

  PotentialTable like({{msg.target, rec.cardinality()}}, msg.payload);
  rec.table.multiply_by(like);

  if (rec.parents.empty()) {
    set_root_marginal(q, d, msg.target);
    return step;
  }

  // Pass the summed likelihood on; keep the local table a proper conditional
  // per parent value so later marginal steps can use it directly.
  NodeId parent = rec.parents.front();
  PotentialTable up = rec.table.sum_out(msg.target);
  rec.table.divide_by(up, 1.0 / static_cast<double>(rec.cardinality()));
  if (up.all_zero()) {
    fail(Errc::impossible_evidence,
         "evidence is impossible under every value of node '" + d.node(parent).name + "'");
  }
  up.rescale_unit_max();
  q.post_upward(msg.target, parent, up.entries());
  return step;
}

SchedulerStep apply_downward(PriorityQueueState& q, BeliefDiagram& d,
                             const PropagationMessage& msg) {
  SchedulerStep step{SchedulerStep::Kind::processed_down, msg.origin, msg.target, -1, false};
  NodeRecord& rec = d.node(msg.target);
  if (!rec.is_unobserved()) return step;  // observed since enqueue: stale
  if (rec.parents.empty() || rec.parents.front() != msg.origin) {
    // The arc from the origin was cut by a later absorption, which also gave
    // this node a fresh root marginal; the pending payload no longer matches
    // the sliced table.
    return step;
  }

  PotentialTable cond = rec.table.normalized_first_axis();
  std::size_t card = static_cast<std::size_t>(rec.cardinality());
  std::size_t pcard = msg.payload.size();
  std::vector<long double> acc(card, 0.0L);
  for (std::size_t v = 0; v < card; ++v) {
    for (std::size_t pv = 0; pv < pcard; ++pv) {
      acc[v] += static_cast<long double>(cond.entries()[v * pcard + pv]) * msg.payload[pv];
    }
  }
  long double total = 0.0L;
  for (long double v : acc) total += v;
  if (total <= 0.0L) {
    fail(Errc::impossible_evidence,
         "marginal update leaves node '" + rec.name + "' without mass");
  }
  std::vector<double> m(card);
  for (std::size_t v = 0; v < card; ++v) m[v] = static_cast<double>(acc[v] / total);
  q.marginals()[msg.target] = std::move(m);
  flood_children(q, d, msg.target);
  return step;
}

}  // namespace

SchedulerStep scheduler_step(PriorityQueueState& q, BeliefDiagram& d) {
  if (!q.evidence_.empty()) {
    EvidenceAssertion e = q.evidence_.front();
    q.evidence_.pop_front();
    return apply_evidence(q, d, e);
  }
  if (!q.upward_.empty()) {
    PropagationMessage msg = std::move(q.upward_.front());
    q.upward_.pop_front();
    return apply_upward(q, d, msg);
  }
  if (!q.downward_.empty()) {
    auto it = q.downward_.begin();
    PropagationMessage msg = std::move(it->second);
    q.downward_.erase(it);
    return apply_downward(q, d, msg);
  }
  fail(Errc::empty_queue, "scheduler_step on an empty queue");
}

PosteriorReport run_batch(BeliefDiagram& d, const std::vector<EvidenceAssertion>& evidence,
                          bool allow_fallback, TransformTrace* trace_out,
                          std::size_t joint_cap) {
  TransformTrace trace;
  int detaching_absorptions = 0;
  for (const EvidenceAssertion& e : evidence) {
    bool had_children = !d.children_of(e.node).empty();
    trace.append(absorb_evidence(d, e));
    if (had_children) ++detaching_absorptions;
  }
  trace.append(propagate_all_evidence(d));

  PosteriorReport report = posterior_marginals(d, allow_fallback, joint_cap);
  report.reversal_count = trace.reversal_count;
  report.fillin_count = trace.fillin_count;
  report.disconnected_child_events = detaching_absorptions;
  if (trace_out) *trace_out = std::move(trace);
  return report;
}

PosteriorReport run_message_passing(BeliefDiagram& d,
                                    const std::vector<EvidenceAssertion>& evidence,
                                    bool waves,
                                    std::vector<SchedulerStep>* steps_out) {
  if (classify_topology(d) != TopologyClass::forest) {
    fail(Errc::not_a_forest, "message passing requires a forest");
  }

  PriorityQueueState q(d);
  std::vector<SchedulerStep> steps;
  int detaching_absorptions = 0;

  auto drain = [&] {
    while (!q.empty()) {
      SchedulerStep s = scheduler_step(q, d);
      if (s.kind == SchedulerStep::Kind::absorbed && s.detached_children) {
        ++detaching_absorptions;
      }
      steps.push_back(s);
    }
  };

  if (waves) {
    for (const EvidenceAssertion& e : evidence) {
      q.post_evidence(e);
      drain();
    }
  } else {
    for (const EvidenceAssertion& e : evidence) q.post_evidence(e);
    drain();
  }

  // Nodes no message reached sit in evidence-free subtrees; sweep them from
  // their current (prior) tables. Their parents were never updated either,
  // so pass order is enough.
  for (const std::vector<NodeId>& pass : sweep_schedule(d)) {
    for (NodeId id : pass) {
      if (q.marginals().count(id)) continue;
      const NodeRecord& rec = d.node(id);
      std::size_t card = static_cast<std::size_t>(rec.cardinality());
      std::vector<double> m(card, 0.0);
      if (rec.parents.empty()) {
        double total = rec.table.sum();
        if (total <= 0.0) fail(Errc::impossible_evidence, "prior has no mass");
        for (std::size_t v = 0; v < card; ++v) m[v] = rec.table.entries()[v] / total;
      } else {
        const std::vector<double>& pm = q.marginals().at(rec.parents.front());
        PotentialTable cond = rec.table.normalized_first_axis();
        std::size_t pcard = pm.size();
        std::vector<long double> acc(card, 0.0L);
        for (std::size_t v = 0; v < card; ++v) {
          for (std::size_t pv = 0; pv < pcard; ++pv) {
            acc[v] += static_cast<long double>(cond.entries()[v * pcard + pv]) * pm[pv];
          }
        }
        long double total = 0.0L;
        for (long double v : acc) total += v;
        if (total <= 0.0L) fail(Errc::impossible_evidence, "marginal has no mass");
        for (std::size_t v = 0; v < card; ++v) m[v] = static_cast<double>(acc[v] / total);
      }
      q.marginals()[id] = std::move(m);
    }
  }

  PosteriorReport report;
  report.method = PosteriorReport::Method::propagation;
  report.topology = classify_topology(d);
  report.disconnected_child_events = detaching_absorptions;
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.is_unobserved()) report.marginals[rec.id] = q.marginals().at(rec.id);
  }
  if (steps_out) *steps_out = std::move(steps);
  return report;
}

std::string format_steps(const BeliefDiagram& d, const std::vector<SchedulerStep>& steps) {
  std::ostringstream os;
  for (const SchedulerStep& s : steps) {
    switch (s.kind) {
      case SchedulerStep::Kind::absorbed:
        os << "ABSORB node=" << d.node(s.target).name << " outcome="
           << d.node(s.target).outcomes[static_cast<std::size_t>(s.outcome)];
        if (s.detached_children) os << " detached-children=1";
        os << '\n';
        break;
      case SchedulerStep::Kind::processed_up:
        os << "MSG kind=likelihood-up from=" << d.node(s.origin).name
           << " to=" << d.node(s.target).name << '\n';
        break;
      case SchedulerStep::Kind::processed_down:
        os << "MSG kind=marginal-down from=" << d.node(s.origin).name
           << " to=" << d.node(s.target).name << '\n';
        break;
    }
  }
  return os.str();
}

}  // namespace beldi
