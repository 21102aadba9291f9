#include "beldi/trace.hpp"

#include <sstream>

namespace beldi {

void TransformTrace::append(const TransformTrace& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  reversal_count += other.reversal_count;
  fillin_count += other.fillin_count;
}

std::set<Arc> replay_arcs(std::set<Arc> arcs, const std::vector<TraceStep>& steps) {
  for (const TraceStep& s : steps) {
    switch (s.kind) {
      case TraceStep::Kind::absorb:
        break;
      case TraceStep::Kind::arc_added:
        arcs.insert({s.a, s.b});
        break;
      case TraceStep::Kind::arc_deleted:
        arcs.erase({s.a, s.b});
        break;
      case TraceStep::Kind::reverse: {
        // Delete (i, j); the evidence node inherits i's current parents.
        arcs.erase({s.a, s.b});
        std::vector<NodeId> parents_of_i;
        for (const Arc& a : arcs) {
          if (a.to == s.a) parents_of_i.push_back(a.from);
        }
        for (NodeId p : parents_of_i) arcs.insert({p, s.b});
        break;
      }
    }
  }
  return arcs;
}

std::string format_trace(const BeliefDiagram& d, const TransformTrace& trace) {
  std::ostringstream os;
  auto name = [&d](NodeId id) { return d.node(id).name; };
  for (const TraceStep& s : trace.steps) {
    switch (s.kind) {
      case TraceStep::Kind::absorb:
        os << "ABSORB node=" << name(s.a) << " outcome="
           << d.node(s.a).outcomes[static_cast<std::size_t>(s.outcome)] << '\n';
        break;
      case TraceStep::Kind::reverse:
        os << "REVERSE i=" << name(s.a) << " j=" << name(s.b) << '\n';
        break;
      case TraceStep::Kind::arc_added:
        os << "ARC+ " << name(s.a) << "->" << name(s.b) << '\n';
        break;
      case TraceStep::Kind::arc_deleted:
        os << "ARC- " << name(s.a) << "->" << name(s.b) << '\n';
        break;
    }
  }
  return os.str();
}

}  // namespace beldi
