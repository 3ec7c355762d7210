#include "rulegraph/paths.hpp"

#include <algorithm>
#include <deque>

namespace rulegraph {

Digraph::Digraph(std::span<const Edge> edges, std::size_t num_nodes)
    : edges_(edges.begin(), edges.end()) {
  std::size_t n = num_nodes;
  for (const Edge& e : edges_) {
    n = std::max(n, static_cast<std::size_t>(std::max(e.src, e.dst)) + 1);
  }
  out_.resize(n);
  in_.resize(n);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out_[static_cast<std::size_t>(edges_[i].src)].push_back(i);
    in_[static_cast<std::size_t>(edges_[i].dst)].push_back(i);
  }
}

std::span<const std::size_t> Digraph::out_edges(NodeId u) const {
  return out_[static_cast<std::size_t>(u)];
}

std::span<const std::size_t> Digraph::in_edges(NodeId u) const {
  return in_[static_cast<std::size_t>(u)];
}

std::vector<std::size_t> Digraph::distances_to(NodeId target) const {
  std::vector<std::size_t> dist(num_nodes(), kUnreachable);
  if (static_cast<std::size_t>(target) >= num_nodes()) return dist;
  std::deque<NodeId> queue{target};
  dist[static_cast<std::size_t>(target)] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (std::size_t ei : in_[static_cast<std::size_t>(v)]) {
      const auto u = static_cast<std::size_t>(edges_[ei].src);
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[static_cast<std::size_t>(v)] + 1;
      queue.push_back(edges_[ei].src);
    }
  }
  return dist;
}

std::size_t Digraph::distance(NodeId from, NodeId to) const {
  if (static_cast<std::size_t>(from) >= num_nodes()) return kUnreachable;
  return distances_to(to)[static_cast<std::size_t>(from)];
}

std::vector<std::size_t> Digraph::shortest_path(NodeId from, NodeId to) const {
  std::vector<std::size_t> path;
  if (static_cast<std::size_t>(from) >= num_nodes() || static_cast<std::size_t>(to) >= num_nodes()) {
    return path;
  }
  const auto dist = distances_to(to);
  if (dist[static_cast<std::size_t>(from)] == kUnreachable) return path;
  NodeId u = from;
  while (u != to) {
    for (std::size_t ei : out_[static_cast<std::size_t>(u)]) {
      const auto v = static_cast<std::size_t>(edges_[ei].dst);
      if (dist[v] != kUnreachable && dist[v] + 1 == dist[static_cast<std::size_t>(u)]) {
        path.push_back(ei);
        u = edges_[ei].dst;
        break;
      }
    }
  }
  return path;
}

}  // namespace rulegraph
