#include "rulegraph/stats.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <set>

#include "rulegraph/error.hpp"

namespace rulegraph {

WorldStats compute_stats(const WorldDataset& dataset) {
  WorldStats stats;
  stats.world_id = dataset.world_id;
  std::set<RelationId> classes;
  std::set<Descriptor> descriptors;
  double length = 0.0, nodes = 0.0, edges = 0.0;
  for (const auto& split : dataset.splits) {
    for (const Instance& inst : split) {
      ++stats.num_instances;
      classes.insert(inst.target);
      descriptors.insert(inst.descriptor);
      length += static_cast<double>(inst.descriptor.size());
      nodes += static_cast<double>(inst.num_nodes());
      edges += static_cast<double>(inst.edges.size());
    }
  }
  if (stats.num_instances == 0) {
    throw Error(ErrorKind::invalid_input, "statistics of an empty dataset are undefined");
  }
  const auto n = static_cast<double>(stats.num_instances);
  stats.num_classes = classes.size();
  stats.num_descriptors = descriptors.size();
  stats.avg_resolution_length = length / n;
  stats.avg_nodes = nodes / n;
  stats.avg_edges = edges / n;
  return stats;
}

double round6(double x) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double r = std::nearbyint(x * 1e6) / 1e6;
  std::fesetround(saved);
  return r;
}

WorldStats rounded(WorldStats stats) {
  stats.avg_resolution_length = round6(stats.avg_resolution_length);
  stats.avg_nodes = round6(stats.avg_nodes);
  stats.avg_edges = round6(stats.avg_edges);
  return stats;
}

AggregateStats aggregate(std::span<const WorldStats> worlds) {
  AggregateStats agg;
  agg.num_worlds = worlds.size();
  if (worlds.empty()) return agg;
  for (const auto& w : worlds) {
    agg.num_classes += static_cast<double>(w.num_classes);
    agg.num_descriptors += static_cast<double>(w.num_descriptors);
    agg.avg_resolution_length += w.avg_resolution_length;
    agg.avg_nodes += w.avg_nodes;
    agg.avg_edges += w.avg_edges;
  }
  const auto n = static_cast<double>(worlds.size());
  agg.num_classes /= n;
  agg.num_descriptors /= n;
  agg.avg_resolution_length /= n;
  agg.avg_nodes /= n;
  agg.avg_edges /= n;
  return agg;
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "Easy";
    case Difficulty::medium: return "Medium";
    case Difficulty::hard: return "Hard";
  }
  return "unknown";
}

Difficulty difficulty_bucket(double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "accuracy must lie in [0, 1]");
  }
  if (accuracy >= 0.70) return Difficulty::easy;
  if (accuracy >= 0.54) return Difficulty::medium;
  return Difficulty::hard;
}

ExtendedGraph extend_graph(std::span<const Edge> edges, std::size_t num_nodes) {
  ExtendedGraph g;
  g.num_original_nodes = num_nodes;
  for (const Edge& e : edges) {
    g.num_original_nodes =
        std::max(g.num_original_nodes, static_cast<std::size_t>(std::max(e.src, e.dst)) + 1);
  }
  g.edge_node_labels.reserve(edges.size());
  g.links.reserve(2 * edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t edge_node = g.num_original_nodes + i;
    g.edge_node_labels.push_back(edges[i].rel);
    g.links.emplace_back(static_cast<std::size_t>(edges[i].src), edge_node);
    g.links.emplace_back(edge_node, static_cast<std::size_t>(edges[i].dst));
  }
  return g;
}

}  // namespace rulegraph
