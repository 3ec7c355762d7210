#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rulegraph/graph_sampler.hpp"
#include "rulegraph/world_graph.hpp"

namespace rulegraph {

/// Per-world dataset statistics: number of target classes (NC), distinct
/// descriptors (ND), and mean resolution length, node count and edge count
/// over all instances.
struct WorldStats {
  WorldId world_id = 0;
  Split split = Split::train;  // role of the world in the suite
  std::size_t num_instances = 0;
  std::size_t num_classes = 0;
  std::size_t num_descriptors = 0;
  double avg_resolution_length = 0.0;
  double avg_nodes = 0.0;
  double avg_edges = 0.0;

  friend bool operator==(const WorldStats&, const WorldStats&) = default;
};

/// Throws Error(invalid_input) for a dataset without instances.
WorldStats compute_stats(const WorldDataset& dataset);

/// Round to 6 decimals, ties to even. Every serialized float goes through
/// this.
double round6(double x);

WorldStats rounded(WorldStats stats);

struct AggregateStats {
  std::size_t num_worlds = 0;
  double num_classes = 0.0;
  double num_descriptors = 0.0;
  double avg_resolution_length = 0.0;
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
};

/// Mean of every column over worlds.
AggregateStats aggregate(std::span<const WorldStats> worlds);

enum class Difficulty { easy, medium, hard };

const char* to_string(Difficulty d);

/// >= 0.70 easy, >= 0.54 medium, otherwise hard. Throws Error(invalid_input)
/// outside [0, 1].
Difficulty difficulty_bucket(double accuracy);

/// Every labelled edge becomes an edge-node joined to both endpoints by
/// unlabelled links. Original node ids are kept; edge-node i gets id
/// num_original_nodes + i.
struct ExtendedGraph {
  std::size_t num_original_nodes = 0;
  std::vector<RelationId> edge_node_labels;
  std::vector<std::pair<std::size_t, std::size_t>> links;

  std::size_t num_nodes() const noexcept { return num_original_nodes + edge_node_labels.size(); }
};

/// num_nodes defaults to one past the largest endpoint id.
ExtendedGraph extend_graph(std::span<const Edge> edges, std::size_t num_nodes = 0);

}  // namespace rulegraph
