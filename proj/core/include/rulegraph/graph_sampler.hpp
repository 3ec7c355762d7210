#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rulegraph/logic_rules.hpp"
#include "rulegraph/partitioning.hpp"
#include "rulegraph/random.hpp"
#include "rulegraph/world_graph.hpp"

namespace rulegraph {

/// Labels read along a resolution path; length in [2, max_walk_len].
using Descriptor = std::vector<RelationId>;

/// A world edge together with one alternate walk between its endpoints.
struct DescriptorOccurrence {
  Edge edge;
  Descriptor descriptor;
  std::vector<NodeId> walk;  // edge.src ... edge.dst
};

struct DescriptorCollection {
  std::vector<DescriptorOccurrence> pairs;  // unique per (edge, descriptor)
  std::size_t truncated_edges = 0;          // edges whose walk enumeration hit the cap
};

/// For every world edge (u, r, v), all simple walks u -> v of length in
/// [2, max_len] (first walk kept per distinct descriptor). Throws
/// Error(invalid_input) when max_len < 2.
DescriptorCollection collect_descriptors(const WorldGraph& graph, std::size_t max_len,
                                         std::size_t walk_cap = 10000);

/// Distinct descriptors, each assigned to one split. Counts follow the
/// largest-remainder rounding of the fractions, with every split non-empty.
/// Throws Error(degenerate_world) for fewer than three descriptors.
std::map<Descriptor, Split> split_descriptors(std::span<const DescriptorOccurrence> pairs,
                                              const std::array<double, 3>& fractions, Rng& rng);

/// Largest-remainder split sizes for n items; each split gets at least one
/// item when n >= 3.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& fractions);

/// One query graph. Node ids are dense and local to the instance.
struct Instance {
  std::vector<Edge> edges;
  NodeId source = 0;
  NodeId sink = 0;
  RelationId target = 0;
  std::vector<NodeId> resolution_path;
  Descriptor descriptor;
  Split split = Split::train;
  WorldId world_id = 0;

  std::size_t num_nodes() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Resolution path plus BFS noise around every path node, then removal of
/// the direct edge, of noise edges on shortcut paths, and of noise edges on
/// equal-length paths that resolve to another relation. Resolution-path
/// edges are never removed. Node ids are shuffled into a dense local range.
Instance sample_instance(const WorldGraph& graph, const DescriptorOccurrence& pair,
                         const RuleSet& rules, const GenConfig& cfg, Rng& rng);

struct DatasetCounters {
  std::size_t candidate_pairs = 0;        // (edge, descriptor) pairs collected
  std::size_t collected_descriptors = 0;  // distinct descriptors among them
  std::size_t descriptor_pool = 0;        // distinct descriptors kept after resolution
  std::size_t ambiguous_descriptors = 0;  // distinct descriptors with > 1 derivable relation
  std::size_t rejected_pairs = 0;         // pairs whose descriptor does not resolve to the edge
  std::size_t truncated_edges = 0;
  std::size_t resampled_instances = 0;    // sampled instances that failed validation

  friend bool operator==(const DatasetCounters&, const DatasetCounters&) = default;
};

struct WorldDataset {
  WorldId world_id = 0;
  std::array<std::vector<Instance>, 3> splits;  // indexed by Split
  DatasetCounters counters;

  const std::vector<Instance>& split(Split s) const { return splits[static_cast<std::size_t>(s)]; }
  std::size_t num_instances() const;

  friend bool operator==(const WorldDataset&, const WorldDataset&) = default;
};

/// Descriptors are collected, kept only where they resolve uniquely to the
/// edge label, split three ways, then sampled with replacement inside each
/// split until cfg.graphs_per_split is reached. Every instance passes
/// validate_instance; failures are resampled. Instance i of split s draws
/// from sub_seed(seed, {s, i}).
WorldDataset build_dataset(WorldId world_id, const WorldGraph& graph, const RuleSet& rules,
                           const GenConfig& cfg, std::uint64_t seed);

}  // namespace rulegraph
