#pragma once

#include <stdexcept>
#include <string>

namespace beldi {

// Domain failure categories. The CLI maps these to exit code 1; anything
// filesystem/usage shaped exits 2.
enum class Errc {
  cycle_detected,
  unknown_node,
  unknown_outcome,
  already_observed,
  outcome_out_of_range,
  not_an_evidence_arc,
  precondition_path_exists,
  not_absorbed,
  invalid_ordering,
  impossible_evidence,
  evidence_not_propagated,
  not_singly_connected,
  not_a_forest,
  state_space_too_large,
  unknown_target,
  duplicate_assertion,
  empty_queue,
  invalid_diagram,
  contradictory_constraints,
};

const char* errc_name(Errc code);

class DiagramError : public std::runtime_error {
 public:
  DiagramError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw DiagramError(code, what);
}

}  // namespace beldi
