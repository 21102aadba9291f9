#include "beldi/errors.hpp"

namespace beldi {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::cycle_detected: return "cycle-detected";
    case Errc::unknown_node: return "unknown-node";
    case Errc::unknown_outcome: return "unknown-outcome";
    case Errc::already_observed: return "already-observed";
    case Errc::outcome_out_of_range: return "outcome-out-of-range";
    case Errc::not_an_evidence_arc: return "not-an-evidence-arc";
    case Errc::precondition_path_exists: return "precondition-path-exists";
    case Errc::not_absorbed: return "not-absorbed";
    case Errc::invalid_ordering: return "invalid-ordering";
    case Errc::impossible_evidence: return "impossible-evidence";
    case Errc::evidence_not_propagated: return "evidence-not-propagated";
    case Errc::not_singly_connected: return "not-singly-connected";
    case Errc::not_a_forest: return "not-a-forest";
    case Errc::state_space_too_large: return "state-space-too-large";
    case Errc::unknown_target: return "unknown-target";
    case Errc::duplicate_assertion: return "duplicate-assertion";
    case Errc::empty_queue: return "empty-queue";
    case Errc::invalid_diagram: return "invalid-diagram";
    case Errc::contradictory_constraints: return "contradictory-constraints";
  }
  return "?";
}

}  // namespace beldi
