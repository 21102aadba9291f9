#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/transform.hpp"

namespace beldi {

// Text form of a diagram:
//
//   # comment
//   node Rain : yes no
//   node Grass : wet dry
//   cpt Rain { [] : 0.2 0.8 ; }
//   cpt Grass | Rain { [yes] : 0.9 0.1 ; [no] : 0.2 0.8 ; }
//   evidence { Grass = wet ; }
//
// Sections in that order. Rows cover every parent configuration exactly once,
// labels in parent-list order, numbers over the child's outcomes. A node
// whose evidence was already absorbed round-trips as
// `node N : a b observed a` and its cpt rows carry a single likelihood value
// per configuration. `node`, `cpt`, `evidence` and `observed` are reserved
// words. Entries are nonnegative; scaling is free, rows need not sum to 1.

struct NodeDecl {
  std::string name;
  std::vector<std::string> outcomes;
  std::optional<std::string> observed_outcome;
  int line = 0, col = 0;
};

struct TableRow {
  std::vector<std::string> config;
  std::vector<double> values;
  int line = 0, col = 0;
};

struct TableDecl {
  std::string child;
  std::vector<std::string> parents;
  std::vector<TableRow> rows;
  int line = 0, col = 0;
};

struct EvidenceDecl {
  std::string node;
  std::string outcome;
  int line = 0, col = 0;
};

struct NetworkDocument {
  std::vector<NodeDecl> nodes;
  std::vector<TableDecl> tables;
  std::vector<EvidenceDecl> evidence;
};

struct ParseDiagnostic {
  int line = 0, col = 0;
  std::string message;
};

struct NetworkParse {
  std::optional<NetworkDocument> document;  // engaged iff diagnostics empty
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

// Total: any input yields a document or positioned diagnostics, never a
// throw. All name/shape resolution happens here; a returned document always
// builds.
NetworkParse parse_network(const std::string& text);

// `Node = outcome` per line, # comments allowed. Names resolved against d.
struct EvidenceParse {
  std::vector<EvidenceAssertion> assertions;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};
EvidenceParse parse_evidence(const std::string& text, const BeliefDiagram& d);

// Document plus the assertions of its evidence block.
struct BuiltNetwork {
  BeliefDiagram diagram;
  std::vector<EvidenceAssertion> evidence;
};
BuiltNetwork diagram_from_document(const NetworkDocument& doc);

// Canonical text: nodes then tables in id order, entries rescaled to unit
// maximum and printed with 17 significant digits, so write-parse-write is a
// fixpoint after one cycle.
std::string write_network(const BeliefDiagram& d);

// Same, followed by an evidence block for pending (unabsorbed) assertions.
std::string write_network(const BeliefDiagram& d,
                          const std::vector<EvidenceAssertion>& evidence);

// Graphviz rendering; evidence nodes are filled.
std::string export_dot(const BeliefDiagram& d);

}  // namespace beldi
