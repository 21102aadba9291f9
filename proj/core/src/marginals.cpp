#include "beldi/marginals.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "beldi/errors.hpp"

namespace beldi {

namespace {

void require_propagated(const BeliefDiagram& d) {
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.is_unobserved()) continue;
    if (!rec.is_absorbed() || !rec.parents.empty()) {
      fail(Errc::evidence_not_propagated,
           "evidence node '" + rec.name + "' is still connected");
    }
  }
}

std::vector<double> normalized(std::vector<long double> acc) {
  long double total = 0.0L;
  for (long double v : acc) total += v;
  std::vector<double> out(acc.size(), 0.0);
  if (total <= 0.0L) {
    fail(Errc::impossible_evidence, "marginal has no mass");
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out[i] = static_cast<double>(acc[i] / total);
  }
  return out;
}

}  // namespace

BeliefDiagram prune_barren(const BeliefDiagram& d, const std::vector<NodeId>& targets) {
  std::vector<bool> keep(static_cast<std::size_t>(d.node_count()), false);
  for (NodeId t : targets) {
    if (!d.has_node(t) || !d.node(t).is_unobserved()) {
      fail(Errc::unknown_target, "prune target is not an unobserved node of this diagram");
    }
    keep[static_cast<std::size_t>(t)] = true;
    for (NodeId a : d.ancestors_of(t)) keep[static_cast<std::size_t>(a)] = true;
  }

  BeliefDiagram out;
  out.set_max_outcomes_per_node(d.max_outcomes_per_node());
  std::vector<NodeId> remap(static_cast<std::size_t>(d.node_count()), kNoNode);
  for (const NodeRecord& rec : d.nodes()) {
    if (!keep[static_cast<std::size_t>(rec.id)]) continue;
    NodeId nid = out.add_node(rec.name, rec.outcomes);
    remap[static_cast<std::size_t>(rec.id)] = nid;
  }
  for (const NodeRecord& rec : d.nodes()) {
    NodeId nid = remap[static_cast<std::size_t>(rec.id)];
    if (nid == kNoNode) continue;
    std::vector<NodeId> parents;
    for (NodeId p : rec.parents) {
      // Ancestor closure keeps every parent of a kept node.
      parents.push_back(remap[static_cast<std::size_t>(p)]);
    }
    out.set_parents(nid, std::move(parents));
    std::vector<TableAxis> axes = rec.table.axes();
    for (TableAxis& a : axes) a.node = remap[static_cast<std::size_t>(a.node)];
    out.set_table(nid, PotentialTable(std::move(axes), rec.table.entries()));
    out.set_observed(nid, rec.observed);
  }
  return out;
}

std::vector<std::vector<NodeId>> sweep_schedule(const BeliefDiagram& d) {
  std::vector<int> pass(static_cast<std::size_t>(d.node_count()), -1);
  std::vector<std::vector<NodeId>> out;
  bool moved = true;
  while (moved) {
    moved = false;
    std::vector<NodeId> this_pass;
    for (const NodeRecord& rec : d.nodes()) {
      if (!rec.is_unobserved() || pass[static_cast<std::size_t>(rec.id)] >= 0) continue;
      bool ready = true;
      for (NodeId p : rec.parents) {
        if (pass[static_cast<std::size_t>(p)] < 0) ready = false;
      }
      if (ready) this_pass.push_back(rec.id);
    }
    if (!this_pass.empty()) {
      for (NodeId id : this_pass) {
        pass[static_cast<std::size_t>(id)] = static_cast<int>(out.size());
      }
      out.push_back(std::move(this_pass));
      moved = true;
    }
  }
  return out;
}

PosteriorReport propagate_probabilities(const BeliefDiagram& d) {
  require_propagated(d);
  TopologyClass topo = classify_topology(d);
  if (topo == TopologyClass::multiply_connected) {
    fail(Errc::not_singly_connected,
         "probability propagation requires a singly connected diagram");
  }

  PosteriorReport report;
  report.topology = topo;

  for (const std::vector<NodeId>& pass : sweep_schedule(d)) {
    for (NodeId id : pass) {
      const NodeRecord& rec = d.node(id);
      std::size_t card = static_cast<std::size_t>(rec.cardinality());

      if (rec.parents.empty()) {
        std::vector<long double> acc(card, 0.0L);
        for (std::size_t v = 0; v < card; ++v) acc[v] = rec.table.entries()[v];
        report.marginals[id] = normalized(std::move(acc));
        continue;
      }

      // B_j(x) = sum over parent configurations of Pr{x | config} times the
      // product of the parents' marginals.
      PotentialTable cond = rec.table.normalized_first_axis();
      std::vector<TableAxis> parent_axes(cond.axes().begin() + 1, cond.axes().end());
      std::vector<const std::vector<double>*> pm;
      for (NodeId p : rec.parents) pm.push_back(&report.marginals.at(p));

      std::vector<long double> acc(card, 0.0L);
      std::size_t block = cond.size() / card;
      MultiIndex mi(parent_axes);
      std::size_t rest = 0;
      do {
        long double weight = 1.0L;
        for (std::size_t t = 0; t < parent_axes.size(); ++t) {
          weight *= (*pm[t])[static_cast<std::size_t>(mi.digit(static_cast<int>(t)))];
        }
        for (std::size_t v = 0; v < card; ++v) {
          acc[v] += weight * cond.entries()[v * block + rest];
        }
        ++rest;
      } while (mi.next());
      report.marginals[id] = normalized(std::move(acc));
    }
  }
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.is_unobserved() && !report.marginals.count(rec.id)) {
      fail(Errc::cycle_detected, "sweep never reached node '" + rec.name + "'");
    }
  }
  return report;
}

PosteriorReport posterior_marginals(const BeliefDiagram& d, bool allow_fallback,
                                    std::size_t joint_cap) {
  require_propagated(d);
  TopologyClass topo = classify_topology(d);
  if (topo != TopologyClass::multiply_connected) {
    return propagate_probabilities(d);
  }
  if (!allow_fallback) {
    fail(Errc::not_singly_connected,
         "posterior diagram is multiply connected; enumeration fallback not enabled");
  }

  PosteriorReport report;
  report.method = PosteriorReport::Method::oracle_fallback;
  report.topology = topo;
  JointTable joint = enumerate_joint(d, joint_cap);
  for (const NodeRecord& rec : d.nodes()) {
    if (rec.is_unobserved()) {
      report.marginals[rec.id] = marginal_from_joint(joint, rec.id);
    }
  }
  return report;
}

std::string format_report_tsv(const BeliefDiagram& d, const PosteriorReport& r) {
  std::string out;
  for (const auto& [id, probs] : r.marginals) {
    const NodeRecord& rec = d.node(id);
    for (std::size_t v = 0; v < probs.size(); ++v) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", probs[v]);
      out += rec.name;
      out += '\t';
      out += rec.outcomes[v];
      out += '\t';
      out += buf;
      out += '\n';
    }
  }
  return out;
}

}  // namespace beldi
