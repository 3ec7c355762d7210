#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rulegraph/world_graph.hpp"

namespace rulegraph {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Read-only directed view over an edge list, for path queries on small
/// graphs (instances, world graphs).
class Digraph {
 public:
  explicit Digraph(std::span<const Edge> edges, std::size_t num_nodes = 0);

  std::size_t num_nodes() const noexcept { return out_.size(); }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  std::span<const std::size_t> out_edges(NodeId u) const;
  std::span<const std::size_t> in_edges(NodeId u) const;

  /// Hop distances from every node to `target` along edge direction.
  std::vector<std::size_t> distances_to(NodeId target) const;

  /// Unlabelled directed hop distance, or kUnreachable.
  std::size_t distance(NodeId from, NodeId to) const;

  /// Edge indices of one shortest path (lowest edge index first at every
  /// BFS step), empty if unreachable.
  std::vector<std::size_t> shortest_path(NodeId from, NodeId to) const;

  /// Calls visit(edge_indices) for every simple path from -> to whose hop
  /// count lies in [min_len, max_len], in depth-first order following edge
  /// index order. visit returns false to stop the enumeration. Returns the
  /// number of paths visited.
  template <typename Visit>
  std::size_t for_each_path(NodeId from, NodeId to, std::size_t min_len, std::size_t max_len,
                            Visit&& visit) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_, in_;
};

template <typename Visit>
std::size_t Digraph::for_each_path(NodeId from, NodeId to, std::size_t min_len,
                                   std::size_t max_len, Visit&& visit) const {
  if (num_nodes() == 0 || static_cast<std::size_t>(from) >= num_nodes() ||
      static_cast<std::size_t>(to) >= num_nodes() || from == to) {
    return 0;
  }
  const auto remaining = distances_to(to);
  std::vector<bool> on_path(num_nodes(), false);
  std::vector<std::size_t> path;
  std::size_t count = 0;
  bool stop = false;

  auto dfs = [&](auto& self, NodeId u) -> void {
    for (std::size_t ei : out_[static_cast<std::size_t>(u)]) {
      if (stop) return;
      const NodeId v = edges_[ei].dst;
      const auto vi = static_cast<std::size_t>(v);
      if (on_path[vi] || remaining[vi] == kUnreachable) continue;
      if (path.size() + 1 + remaining[vi] > max_len) continue;
      path.push_back(ei);
      if (v == to) {
        if (path.size() >= min_len) {
          ++count;
          if (!visit(std::span<const std::size_t>(path))) stop = true;
        }
      } else {
        on_path[vi] = true;
        self(self, v);
        on_path[vi] = false;
      }
      path.pop_back();
    }
  };
  on_path[static_cast<std::size_t>(from)] = true;
  dfs(dfs, from);
  return count;
}

}  // namespace rulegraph
