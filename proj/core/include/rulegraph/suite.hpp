#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rulegraph/graph_sampler.hpp"
#include "rulegraph/logic_rules.hpp"
#include "rulegraph/partitioning.hpp"
#include "rulegraph/stats.hpp"
#include "rulegraph/world_graph.hpp"

namespace rulegraph {

/// Everything that determines a suite. Defaults reproduce the reference
/// benchmark scale: 20 relations, half symmetric, 20 rules per world,
/// stride 1, 5000/1000/1000 graphs per world.
struct SuiteConfig {
  std::uint64_t seed = 0;
  std::size_t num_relations = 20;
  double symmetric_fraction = 0.5;
  std::size_t rules_per_world = 20;
  std::size_t stride = 1;
  GenConfig generation;
  std::size_t valid_worlds = 3;  // capped at (worlds - 1) / 2 each
  std::size_t test_worlds = 3;
  std::size_t multitask_k = 10;  // pretraining worlds listed per held-out world and mode
  std::map<WorldId, double> curriculum_scores;

  void validate() const;

  friend bool operator==(const SuiteConfig&, const SuiteConfig&) = default;
};

struct PretrainingChoice {
  std::vector<WorldId> most_similar;
  std::vector<WorldId> least_similar;
  std::vector<WorldId> mixed;

  friend bool operator==(const PretrainingChoice&, const PretrainingChoice&) = default;
};

/// World orderings for the supervised, multitask and continual protocols.
struct Protocols {
  std::vector<WorldId> supervised;  // every world, trained and tested on its own splits
  std::array<std::vector<WorldId>, 3> multitask;  // worlds by role, indexed by Split
  std::map<WorldId, PretrainingChoice> pretraining;  // per held-out world
  std::vector<WorldId> continual;   // overlapping windows in order
  std::vector<WorldId> curriculum;  // easiest first; empty without scores

  friend bool operator==(const Protocols&, const Protocols&) = default;
};

struct WorldBundle {
  WorldSpec spec;
  RuleSet rules;
  WorldGraph graph;
  WorldDataset dataset;
  WorldStats stats;  // rounded
  std::size_t generation_attempts = 0;
  std::size_t completed_cycles = 0;
  bool edge_cap_hit = false;
  std::size_t rejected_expansions = 0;
  std::vector<std::size_t> rule_uses;

  friend bool operator==(const WorldBundle&, const WorldBundle&) = default;
};

struct Suite {
  SuiteConfig config;
  RuleSet master;  // permuted; world rule_indices point into it
  std::vector<WorldSpec> worlds;
  std::vector<Split> world_splits;  // role of each world
  SimilarityMatrix similarity;
  Protocols protocols;
  std::vector<WorldBundle> generated;  // ascending world_id

  friend bool operator==(const Suite&, const Suite&) = default;
};

/// Seed streams, each expanded with sub_seed(config.seed, {stream, ...}).
enum class SeedStream : std::uint64_t {
  alphabet = 0,
  rules = 1,
  partition = 2,
  world_roles = 3,
  world_graph = 4,  // + world_id
  dataset = 5,      // + world_id; instances then use {split, index}
};

std::uint64_t stream_seed(std::uint64_t master, SeedStream stream);
std::uint64_t stream_seed(std::uint64_t master, SeedStream stream, WorldId world);

/// Rules, partition and protocols only (no world graphs or datasets).
Suite plan_suite(const SuiteConfig& config);

/// One world's graph, dataset and statistics.
WorldBundle build_world(const Suite& plan, WorldId world);

/// Full pipeline. `only` restricts generation to one world; `workers`
/// threads build worlds concurrently, results are merged by world_id.
Suite build_suite(const SuiteConfig& config, std::optional<WorldId> only = std::nullopt,
                  std::size_t workers = 1);

}  // namespace rulegraph
