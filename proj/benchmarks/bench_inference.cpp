#include <benchmark/benchmark.h>

#include <string>

#include "beldi/generate.hpp"
#include "beldi/netio.hpp"
#include "beldi/oracle.hpp"
#include "beldi/scheduler.hpp"

namespace {

using beldi::BeliefDiagram;
using beldi::GeneratedNetwork;
using beldi::GeneratorOptions;

GeneratedNetwork make(GeneratorOptions::Topology topology, int nodes, int max_outcomes,
                      int evidence) {
  GeneratorOptions o;
  o.seed = 2024;
  o.topology = topology;
  o.nodes = nodes;
  o.max_outcomes = max_outcomes;
  o.evidence_count = evidence;
  return beldi::generate_network(o);
}

}  // namespace

static void BM_BatchForest(benchmark::State& state) {
  GeneratedNetwork g =
      make(GeneratorOptions::Topology::forest, static_cast<int>(state.range(0)), 3, 3);
  for (auto _ : state) {
    BeliefDiagram d = g.diagram;
    beldi::PosteriorReport r = beldi::run_batch(d, g.evidence, false);
    benchmark::DoNotOptimize(r.marginals);
  }
}
BENCHMARK(BM_BatchForest)->Arg(8)->Arg(32)->Arg(128);

static void BM_MessagePassingForest(benchmark::State& state) {
  GeneratedNetwork g =
      make(GeneratorOptions::Topology::forest, static_cast<int>(state.range(0)), 3, 3);
  for (auto _ : state) {
    BeliefDiagram d = g.diagram;
    beldi::PosteriorReport r = beldi::run_message_passing(d, g.evidence, false);
    benchmark::DoNotOptimize(r.marginals);
  }
}
BENCHMARK(BM_MessagePassingForest)->Arg(8)->Arg(32)->Arg(128);

static void BM_BatchPolytree(benchmark::State& state) {
  GeneratedNetwork g =
      make(GeneratorOptions::Topology::polytree, static_cast<int>(state.range(0)), 3, 2);
  for (auto _ : state) {
    BeliefDiagram d = g.diagram;
    beldi::PosteriorReport r = beldi::run_batch(d, g.evidence, true);
    benchmark::DoNotOptimize(r.marginals);
  }
}
BENCHMARK(BM_BatchPolytree)->Arg(8)->Arg(12);

static void BM_OracleEnumeration(benchmark::State& state) {
  GeneratedNetwork g =
      make(GeneratorOptions::Topology::dag, static_cast<int>(state.range(0)), 2, 0);
  for (auto _ : state) {
    beldi::JointTable joint = beldi::enumerate_joint(g.diagram);
    benchmark::DoNotOptimize(joint.table.entries());
  }
}
BENCHMARK(BM_OracleEnumeration)->Arg(8)->Arg(12)->Arg(16);

static void BM_ParseNetwork(benchmark::State& state) {
  GeneratedNetwork g =
      make(GeneratorOptions::Topology::dag, static_cast<int>(state.range(0)), 3, 4);
  std::string text = beldi::write_network(g.diagram, g.evidence);
  for (auto _ : state) {
    beldi::NetworkParse parsed = beldi::parse_network(text);
    benchmark::DoNotOptimize(parsed.document);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseNetwork)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
