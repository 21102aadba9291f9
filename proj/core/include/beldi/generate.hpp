#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/transform.hpp"

namespace beldi {

// Seeded random diagram factory used by the CLI and the randomized suites.
// Same options, same bytes: all randomness comes from one mt19937_64 stream
// and none of it passes through distribution objects.
struct GeneratorOptions {
  enum class Topology { forest, polytree, dag };

  std::uint64_t seed = 0;
  Topology topology = Topology::forest;
  int nodes = 5;
  int max_outcomes = 3;   // outcome counts drawn from [2, max_outcomes]
  int max_in_degree = 0;  // 0 = default for the topology (forest 1, else 3)
  int evidence_count = 0;
};

struct GeneratedNetwork {
  BeliefDiagram diagram;
  std::vector<EvidenceAssertion> evidence;
};

// Throws contradictory-constraints on unsatisfiable options (a forest with
// max in-degree above 1, more evidence than nodes, ...).
GeneratedNetwork generate_network(const GeneratorOptions& options);

}  // namespace beldi
