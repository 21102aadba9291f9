#include "beldi/generate.hpp"

#include <algorithm>
#include <random>

#include "beldi/errors.hpp"

namespace beldi {

namespace {

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
  return n <= 1 ? 0 : rng() % n;
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GeneratedNetwork generate_network(const GeneratorOptions& options) {
  if (options.nodes < 1) {
    fail(Errc::contradictory_constraints, "need at least one node");
  }
  if (options.max_outcomes < 2) {
    fail(Errc::contradictory_constraints, "need at least two outcomes per node");
  }
  if (options.evidence_count < 0 || options.evidence_count > options.nodes) {
    fail(Errc::contradictory_constraints, "evidence count exceeds node count");
  }
  int max_in = options.max_in_degree;
  if (max_in == 0) {
    max_in = options.topology == GeneratorOptions::Topology::forest ? 1 : 3;
  }
  if (max_in < 1) {
    fail(Errc::contradictory_constraints, "max in-degree must be positive");
  }
  if (options.topology == GeneratorOptions::Topology::forest && max_in > 1) {
    fail(Errc::contradictory_constraints, "a forest cannot have in-degree above 1");
  }

  std::mt19937_64 rng(options.seed);
  int n = options.nodes;

  GeneratedNetwork out;
  std::vector<int> cards(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cards[static_cast<std::size_t>(i)] =
        2 + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(options.max_outcomes - 1)));
    std::vector<std::string> outcomes;
    for (int v = 0; v < cards[static_cast<std::size_t>(i)]; ++v) {
      outcomes.push_back("o" + std::to_string(v));
    }
    out.diagram.add_node("n" + std::to_string(i), std::move(outcomes));
  }

  std::vector<std::vector<NodeId>> parents(static_cast<std::size_t>(n));
  switch (options.topology) {
    case GeneratorOptions::Topology::forest:
      // Each node is a fresh root or hangs off an earlier node.
      for (int i = 1; i < n; ++i) {
        std::uint64_t r = next_below(rng, static_cast<std::uint64_t>(i + 1));
        if (r < static_cast<std::uint64_t>(i)) {
          parents[static_cast<std::size_t>(i)].push_back(static_cast<NodeId>(r));
        }
      }
      break;
    case GeneratorOptions::Topology::polytree:
      // Random spanning tree skeleton, arcs oriented by coin flip; flips
      // that would breach the in-degree cap fall back to the other direction.
      for (int i = 1; i < n; ++i) {
        NodeId j = static_cast<NodeId>(next_below(rng, static_cast<std::uint64_t>(i)));
        bool down = (rng() & 1) != 0;  // j -> i
        if (!down && static_cast<int>(parents[static_cast<std::size_t>(j)].size()) >= max_in) {
          down = true;
        }
        if (down && static_cast<int>(parents[static_cast<std::size_t>(i)].size()) >= max_in) {
          down = false;
        }
        if (down) {
          parents[static_cast<std::size_t>(i)].push_back(j);
        } else {
          parents[static_cast<std::size_t>(j)].push_back(static_cast<NodeId>(i));
        }
      }
      break;
    case GeneratorOptions::Topology::dag:
      for (int i = 1; i < n; ++i) {
        int limit = std::min(i, max_in);
        int k = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(limit + 1)));
        std::vector<NodeId> pool;
        for (int j = 0; j < i; ++j) pool.push_back(static_cast<NodeId>(j));
        for (int pick = 0; pick < k; ++pick) {
          std::size_t at = static_cast<std::size_t>(
              next_below(rng, static_cast<std::uint64_t>(pool.size())));
          parents[static_cast<std::size_t>(i)].push_back(pool[at]);
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        }
        std::sort(parents[static_cast<std::size_t>(i)].begin(),
                  parents[static_cast<std::size_t>(i)].end());
      }
      break;
  }

  for (int i = 0; i < n; ++i) {
    out.diagram.set_parents(static_cast<NodeId>(i), parents[static_cast<std::size_t>(i)]);
  }

  for (int i = 0; i < n; ++i) {
    std::vector<TableAxis> axes;
    axes.push_back({static_cast<NodeId>(i), cards[static_cast<std::size_t>(i)]});
    for (NodeId p : parents[static_cast<std::size_t>(i)]) {
      axes.push_back({p, cards[static_cast<std::size_t>(p)]});
    }
    std::size_t card = static_cast<std::size_t>(cards[static_cast<std::size_t>(i)]);
    std::size_t volume = axes_volume(axes);
    std::size_t block = volume / card;
    std::vector<double> entries(volume);
    for (std::size_t cfg = 0; cfg < block; ++cfg) {
      double colsum = 0.0;
      for (std::size_t v = 0; v < card; ++v) {
        double x = 0.05 + 0.95 * next_unit(rng);
        entries[v * block + cfg] = x;
        colsum += x;
      }
      for (std::size_t v = 0; v < card; ++v) entries[v * block + cfg] /= colsum;
    }
    out.diagram.set_table(static_cast<NodeId>(i), PotentialTable(std::move(axes), std::move(entries)));
  }

  // Distinct evidence nodes via a partial shuffle.
  std::vector<NodeId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(static_cast<NodeId>(i));
  for (int pick = 0; pick < options.evidence_count; ++pick) {
    std::size_t at = static_cast<std::size_t>(pick) +
                     static_cast<std::size_t>(next_below(
                         rng, static_cast<std::uint64_t>(ids.size() - static_cast<std::size_t>(pick))));
    std::swap(ids[static_cast<std::size_t>(pick)], ids[at]);
    NodeId node = ids[static_cast<std::size_t>(pick)];
    int outcome = static_cast<int>(next_below(
        rng, static_cast<std::uint64_t>(cards[static_cast<std::size_t>(node)])));
    out.evidence.push_back({node, outcome});
  }
  return out;
}

}  // namespace beldi
