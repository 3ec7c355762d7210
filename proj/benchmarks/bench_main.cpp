#include <benchmark/benchmark.h>

#include "rulegraph/graph_sampler.hpp"
#include "rulegraph/partitioning.hpp"
#include "rulegraph/resolver.hpp"
#include "rulegraph/world_graph.hpp"

using namespace rulegraph;

namespace {

struct Fixture {
  RuleSet master;
  RuleSet world;
  WorldGraph graph;
  std::vector<std::vector<RelationId>> descriptors;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture f;
    Rng rng(1);
    const auto alphabet = generate_alphabet(20, rng);
    const RuleSet rules = generate_rules(alphabet, rng);
    Partition p = partition_rules(rules, 20, 1, rng);
    f.master = p.master;
    f.world = world_rules(p.master, p.worlds.front());
    f.graph = generate_world_graph(f.world, GenConfig{}, rng).graph;
    for (const auto& occ : collect_descriptors(f.graph, 10).pairs) {
      f.descriptors.emplace_back(occ.descriptor.begin(), occ.descriptor.end());
    }
    return f;
  }();
  return f;
}

void BM_GenerateRules(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    const auto alphabet = generate_alphabet(k, rng);
    benchmark::DoNotOptimize(generate_rules(alphabet, rng));
  }
}
BENCHMARK(BM_GenerateRules)->Arg(10)->Arg(20)->Arg(40);

void BM_PartitionRules(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(partition_rules(f.master, 20, 1, rng));
  }
}
BENCHMARK(BM_PartitionRules);

void BM_ExpandWorldGraph(benchmark::State& state) {
  const Fixture& f = fixture();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(expand_world_graph(f.world, GenConfig{}, rng));
  }
}
BENCHMARK(BM_ExpandWorldGraph)->Unit(benchmark::kMillisecond);

void BM_ClosureCheck(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(closure_check(f.graph, f.world));
  state.counters["edges"] = static_cast<double>(f.graph.num_edges());
}
BENCHMARK(BM_ClosureCheck)->Unit(benchmark::kMicrosecond);

void BM_CollectDescriptors(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(collect_descriptors(f.graph, 10));
}
BENCHMARK(BM_CollectDescriptors)->Unit(benchmark::kMillisecond);

void BM_ResolveDescriptor(benchmark::State& state) {
  const Fixture& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve_descriptor(f.world, f.descriptors[i]));
    i = (i + 1) % f.descriptors.size();
  }
}
BENCHMARK(BM_ResolveDescriptor);

void BM_BuildDataset(benchmark::State& state) {
  const Fixture& f = fixture();
  GenConfig cfg;
  const auto train = static_cast<std::size_t>(state.range(0));
  cfg.graphs_per_split = {train, train / 5, train / 5};
  for (auto _ : state) benchmark::DoNotOptimize(build_dataset(0, f.graph, f.world, cfg, 9));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train * 7 / 5));
}
BENCHMARK(BM_BuildDataset)->Arg(200)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
