// Command line front end: validate / query / trace / export / generate.
// Exit codes: 0 success, 1 domain failure (bad diagram, impossible evidence,
// oracle mismatch, ...), 2 usage or I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "beldi/diagram.hpp"
#include "beldi/errors.hpp"
#include "beldi/generate.hpp"
#include "beldi/marginals.hpp"
#include "beldi/netio.hpp"
#include "beldi/oracle.hpp"
#include "beldi/scheduler.hpp"
#include "beldi/topology.hpp"
#include "beldi/trace.hpp"
#include "beldi/transform.hpp"

namespace {

using beldi::BeliefDiagram;
using beldi::EvidenceAssertion;
using beldi::NodeId;
using beldi::PosteriorReport;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

struct Loaded {
  BeliefDiagram diagram;
  std::vector<EvidenceAssertion> evidence;  // pending assertions from the file
};

// Parses `path`, optionally runs the semantic validator. On failure prints
// positioned diagnostics to stderr and reports the exit code through `rc`.
std::optional<Loaded> load_network(const std::string& path, bool check, int& rc) {
  std::optional<std::string> text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    rc = 2;
    return std::nullopt;
  }
  beldi::NetworkParse parse = beldi::parse_network(*text);
  if (!parse.ok()) {
    for (const beldi::ParseDiagnostic& d : parse.diagnostics) {
      std::cerr << path << ":" << d.line << ":" << d.col << ": " << d.message << "\n";
    }
    rc = 1;
    return std::nullopt;
  }
  beldi::BuiltNetwork built = beldi::diagram_from_document(*parse.document);
  if (check) {
    std::vector<beldi::Diagnostic> diags = built.diagram.validate();
    if (!diags.empty()) {
      for (const beldi::Diagnostic& d : diags) {
        std::cerr << path << ": ";
        if (d.node != beldi::kNoNode) {
          std::cerr << "node '" << built.diagram.node(d.node).name << "': ";
        }
        std::cerr << d.invariant << ": " << d.message << "\n";
      }
      rc = 1;
      return std::nullopt;
    }
  }
  return Loaded{std::move(built.diagram), std::move(built.evidence)};
}

EvidenceAssertion parse_evidence_arg(const BeliefDiagram& d, const std::string& arg) {
  std::size_t eq = arg.find('=');
  if (eq == std::string::npos) {
    beldi::fail(beldi::Errc::unknown_outcome,
                "evidence must look like Node=outcome, got '" + arg + "'");
  }
  std::string node = trimmed(arg.substr(0, eq));
  std::string outcome = trimmed(arg.substr(eq + 1));
  NodeId id = d.find(node);
  if (id == beldi::kNoNode) {
    beldi::fail(beldi::Errc::unknown_node, "unknown node '" + node + "'");
  }
  int oi = d.outcome_index(id, outcome);
  if (oi < 0) {
    beldi::fail(beldi::Errc::unknown_outcome,
                "node '" + node + "' has no outcome '" + outcome + "'");
  }
  return {id, oi};
}

struct RunResult {
  PosteriorReport report;
  std::string trace_text;
};

std::string summary_line(const PosteriorReport& r) {
  std::ostringstream os;
  os << "SUMMARY reversals=" << r.reversal_count << " fillins=" << r.fillin_count
     << " topology=" << beldi::topology_name(r.topology) << "\n";
  return os.str();
}

RunResult run_pipeline(BeliefDiagram& d, const std::vector<EvidenceAssertion>& evidence,
                       const std::string& strategy, bool allow_fallback,
                       const std::optional<std::vector<NodeId>>& order) {
  RunResult out;
  if (strategy == "batch") {
    beldi::TransformTrace trace;
    if (order) {
      trace = beldi::absorb_evidence(d, evidence.front());
      bool detached = std::any_of(trace.steps.begin(), trace.steps.end(),
                                  [](const beldi::TraceStep& s) {
                                    return s.kind == beldi::TraceStep::Kind::arc_deleted;
                                  });
      trace.append(beldi::propagate_evidence(d, evidence.front().node, *order));
      out.report = beldi::posterior_marginals(d, allow_fallback);
      out.report.reversal_count = trace.reversal_count;
      out.report.fillin_count = trace.fillin_count;
      out.report.disconnected_child_events = detached ? 1 : 0;
    } else {
      out.report = beldi::run_batch(d, evidence, allow_fallback, &trace);
    }
    out.trace_text = beldi::format_trace(d, trace) + summary_line(out.report);
  } else {
    std::vector<beldi::SchedulerStep> steps;
    bool waves = strategy == "message";
    out.report = beldi::run_message_passing(d, evidence, waves, &steps);
    out.trace_text = beldi::format_steps(d, steps) + summary_line(out.report);
  }
  return out;
}

nlohmann::ordered_json marginals_json(const BeliefDiagram& d,
                                      const std::map<NodeId, std::vector<double>>& marginals) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [id, probs] : marginals) {
    const beldi::NodeRecord& rec = d.node(id);
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < probs.size(); ++v) row[rec.outcomes[v]] = probs[v];
    j[rec.name] = row;
  }
  return j;
}

const char* method_name(PosteriorReport::Method m) {
  return m == PosteriorReport::Method::propagation ? "propagation" : "enumeration";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"belief diagram toolkit: exact inference on discrete networks"};
  app.require_subcommand(1);

  std::string net_path;
  std::vector<std::string> ev_args;
  std::string ev_file;
  std::string strategy = "batch";
  std::string format = "tsv";
  bool with_oracle = false;
  bool allow_fallback = false;
  std::string order_arg;
  std::string trace_path;
  std::string dot_path;

  CLI::App* c_validate = app.add_subcommand("validate", "Parse a network file and check its invariants");
  c_validate->add_option("network", net_path, "Network file")->required();

  auto add_query_options = [&](CLI::App* c) {
    c->add_option("network", net_path, "Network file")->required();
    c->add_option("-e,--evidence", ev_args, "Assertion Node=outcome, repeatable");
    c->add_option("--evidence-file", ev_file, "File of 'Node = outcome' lines");
    c->add_option("--strategy", strategy, "batch, message, or priority")
        ->check(CLI::IsMember({"batch", "message", "priority"}));
    c->add_option("--order", order_arg,
                  "Comma-separated predecessor ordering (batch strategy, exactly one assertion)");
    c->add_flag("--allow-fallback", allow_fallback,
                "Enumerate the joint when reversals leave the diagram multiply connected");
  };

  CLI::App* c_query = app.add_subcommand("query", "Posterior marginals given evidence");
  add_query_options(c_query);
  c_query->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  c_query->add_flag("--oracle", with_oracle, "Cross-check against brute-force enumeration");
  c_query->add_option("--trace", trace_path, "Also write the transformation trace to this file");
  c_query->add_option("--dot", dot_path, "Also write the final diagram as graphviz to this file");

  CLI::App* c_trace = app.add_subcommand("trace", "Print the transformation trace for a query");
  add_query_options(c_trace);

  CLI::App* c_export = app.add_subcommand("export", "Rewrite a network file in canonical form");
  c_export->add_option("network", net_path, "Network file")->required();
  bool as_dot = false;
  c_export->add_flag("--dot", as_dot, "Emit graphviz instead of network text");

  CLI::App* c_generate = app.add_subcommand("generate", "Emit a seeded random network");
  std::uint64_t seed = 0;
  std::string topology = "forest";
  int nodes = 5;
  int max_outcomes = 3;
  int max_in_degree = 0;
  int evidence_count = 0;
  c_generate->add_option("--seed", seed, "Random seed");
  c_generate->add_option("--topology", topology, "forest, polytree, or dag")
      ->check(CLI::IsMember({"forest", "polytree", "dag"}));
  c_generate->add_option("--nodes", nodes, "Node count");
  c_generate->add_option("--max-outcomes", max_outcomes, "Outcomes drawn from [2, this]");
  c_generate->add_option("--max-in-degree", max_in_degree, "Parent cap (0 = topology default)");
  c_generate->add_option("--evidence-count", evidence_count, "Pending assertions to include");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_validate) {
      int rc = 0;
      std::optional<Loaded> loaded = load_network(net_path, true, rc);
      if (!loaded) return rc;
      const BeliefDiagram& d = loaded->diagram;
      std::cout << "ok: " << d.node_count() << " nodes, " << d.arcs().size()
                << " arcs, " << loaded->evidence.size() << " pending assertions, topology="
                << beldi::topology_name(beldi::classify_topology(d)) << "\n";
      return 0;
    }

    if (*c_export) {
      int rc = 0;
      std::optional<Loaded> loaded = load_network(net_path, false, rc);
      if (!loaded) return rc;
      if (as_dot) {
        std::cout << beldi::export_dot(loaded->diagram);
      } else {
        std::cout << beldi::write_network(loaded->diagram, loaded->evidence);
      }
      return 0;
    }

    if (*c_generate) {
      beldi::GeneratorOptions opt;
      opt.seed = seed;
      opt.topology = topology == "forest"  ? beldi::GeneratorOptions::Topology::forest
                     : topology == "polytree" ? beldi::GeneratorOptions::Topology::polytree
                                              : beldi::GeneratorOptions::Topology::dag;
      opt.nodes = nodes;
      opt.max_outcomes = max_outcomes;
      opt.max_in_degree = max_in_degree;
      opt.evidence_count = evidence_count;
      beldi::GeneratedNetwork g = beldi::generate_network(opt);
      std::cout << beldi::write_network(g.diagram, g.evidence);
      return 0;
    }

    // query / trace share everything up to the output.
    int rc = 0;
    std::optional<Loaded> loaded = load_network(net_path, true, rc);
    if (!loaded) return rc;
    BeliefDiagram& d = loaded->diagram;

    std::vector<EvidenceAssertion> evidence = loaded->evidence;
    if (!ev_file.empty()) {
      std::optional<std::string> text = read_file(ev_file);
      if (!text) {
        std::cerr << "error: cannot read '" << ev_file << "'\n";
        return 2;
      }
      beldi::EvidenceParse ep = beldi::parse_evidence(*text, d);
      if (!ep.ok()) {
        for (const beldi::ParseDiagnostic& pd : ep.diagnostics) {
          std::cerr << ev_file << ":" << pd.line << ":" << pd.col << ": " << pd.message << "\n";
        }
        return 1;
      }
      evidence.insert(evidence.end(), ep.assertions.begin(), ep.assertions.end());
    }
    for (const std::string& arg : ev_args) {
      evidence.push_back(parse_evidence_arg(d, arg));
    }

    std::optional<std::vector<NodeId>> order;
    if (!order_arg.empty()) {
      if (strategy != "batch") {
        std::cerr << "error: --order applies to the batch strategy only\n";
        return 2;
      }
      if (evidence.size() != 1) {
        std::cerr << "error: --order requires exactly one evidence assertion\n";
        return 2;
      }
      std::vector<NodeId> ids;
      std::stringstream ss(order_arg);
      std::string name;
      while (std::getline(ss, name, ',')) {
        name = trimmed(name);
        NodeId id = d.find(name);
        if (id == beldi::kNoNode) {
          beldi::fail(beldi::Errc::unknown_node, "unknown node '" + name + "' in --order");
        }
        ids.push_back(id);
      }
      order = std::move(ids);
    }

    BeliefDiagram original = d;  // oracle baseline, untouched by the pipeline
    RunResult run = run_pipeline(d, evidence, strategy, allow_fallback, order);

    if (*c_trace) {
      std::cout << run.trace_text;
      return 0;
    }

    if (!trace_path.empty()) {
      std::ofstream out(trace_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << trace_path << "'\n";
        return 2;
      }
      out << run.trace_text;
    }
    if (!dot_path.empty()) {
      std::ofstream out(dot_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << dot_path << "'\n";
        return 2;
      }
      out << beldi::export_dot(d);
    }

    std::map<NodeId, std::vector<double>> oracle_marginals;
    double max_diff = 0.0;
    if (with_oracle) {
      beldi::JointTable joint = beldi::enumerate_joint(original);
      for (const EvidenceAssertion& e : evidence) {
        beldi::condition_joint(joint, e.node, e.outcome);
      }
      for (const auto& [id, probs] : run.report.marginals) {
        std::vector<double> om = beldi::marginal_from_joint(joint, id);
        for (std::size_t v = 0; v < probs.size(); ++v) {
          max_diff = std::max(max_diff, std::fabs(probs[v] - om[v]));
        }
        oracle_marginals.emplace(id, std::move(om));
      }
    }

    if (format == "tsv") {
      std::cout << beldi::format_report_tsv(d, run.report);
      if (with_oracle) {
        std::string block = beldi::format_report_tsv(d, [&] {
          PosteriorReport o;
          o.marginals = oracle_marginals;
          return o;
        }());
        std::istringstream lines(block);
        std::string line;
        while (std::getline(lines, line)) std::cout << "# oracle\t" << line << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", max_diff);
        std::cout << "# max-abs-difference\t" << buf << "\n";
      }
    } else {
      nlohmann::ordered_json j;
      j["topology"] = beldi::topology_name(run.report.topology);
      j["method"] = method_name(run.report.method);
      j["reversals"] = run.report.reversal_count;
      j["fillins"] = run.report.fillin_count;
      j["marginals"] = marginals_json(d, run.report.marginals);
      if (with_oracle) {
        j["oracle"] = marginals_json(d, oracle_marginals);
        j["max_abs_difference"] = max_diff;
      }
      std::cout << j.dump(2) << "\n";
    }

    if (with_oracle && max_diff > 1e-9) {
      std::cerr << "error: marginals disagree with enumeration (max abs difference "
                << max_diff << ")\n";
      return 1;
    }
    return 0;
  } catch (const beldi::DiagramError& e) {
    std::cerr << "error: " << beldi::errc_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == beldi::Errc::contradictory_constraints ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
