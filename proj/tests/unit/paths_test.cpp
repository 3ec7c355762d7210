#include "rulegraph/paths.hpp"

#include <gtest/gtest.h>

#include <set>

#include "rulegraph/random.hpp"

namespace rulegraph {
namespace {

std::vector<Edge> random_edges(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  for (std::size_t i = 0; i < m; ++i) {
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    const auto v = static_cast<NodeId>(rng.uniform_index(n));
    if (u == v || !used.insert({u, v}).second) continue;
    edges.push_back({u, static_cast<RelationId>(rng.uniform_index(4)), v});
  }
  return edges;
}

// Every simple path as a sorted set of edge-index sequences, no pruning.
std::set<std::vector<std::size_t>> all_simple_paths(const std::vector<Edge>& edges, std::size_t n,
                                                    NodeId from, NodeId to, std::size_t lo,
                                                    std::size_t hi) {
  std::set<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::vector<bool> seen(n, false);
  auto go = [&](auto& self, NodeId u) -> void {
    if (u == to) {
      if (path.size() >= lo && path.size() <= hi) out.insert(path);
      return;
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].src != u || seen[static_cast<std::size_t>(edges[i].dst)]) continue;
      seen[static_cast<std::size_t>(edges[i].dst)] = true;
      path.push_back(i);
      self(self, edges[i].dst);
      path.pop_back();
      seen[static_cast<std::size_t>(edges[i].dst)] = false;
    }
  };
  seen[static_cast<std::size_t>(from)] = true;
  go(go, from);
  return out;
}

TEST(Digraph, DistancesMatchFloydWarshall) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform_int(2, 9);
    const auto edges = random_edges(rng, n, rng.uniform_int(0, 20));
    const Digraph g(edges, n);
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kUnreachable));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : edges) d[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(e.dst)] = 1;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (d[i][k] != kUnreachable && d[k][j] != kUnreachable) {
            d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(g.distance(static_cast<NodeId>(i), static_cast<NodeId>(j)), d[i][j]);
        const auto p = g.shortest_path(static_cast<NodeId>(i), static_cast<NodeId>(j));
        if (i != j && d[i][j] != kUnreachable) {
          ASSERT_EQ(p.size(), d[i][j]);
          ASSERT_EQ(g.edge(p.front()).src, static_cast<NodeId>(i));
          ASSERT_EQ(g.edge(p.back()).dst, static_cast<NodeId>(j));
          for (std::size_t s = 0; s + 1 < p.size(); ++s) {
            ASSERT_EQ(g.edge(p[s]).dst, g.edge(p[s + 1]).src);
          }
        }
      }
    }
  }
}

TEST(Digraph, ForEachPathMatchesExhaustiveEnumeration) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.uniform_int(2, 8);
    const auto edges = random_edges(rng, n, rng.uniform_int(0, 24));
    const Digraph g(edges, n);
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    const auto v = static_cast<NodeId>(rng.uniform_index(n));
    if (u == v) continue;
    const std::size_t lo = rng.uniform_int(1, 3), hi = lo + rng.uniform_index(4);
    std::set<std::vector<std::size_t>> got;
    const std::size_t count = g.for_each_path(u, v, lo, hi, [&](std::span<const std::size_t> p) {
      got.insert(std::vector<std::size_t>(p.begin(), p.end()));
      return true;
    });
    ASSERT_EQ(count, got.size());
    ASSERT_EQ(got, all_simple_paths(edges, n, u, v, lo, hi));
  }
}

TEST(Digraph, ForEachPathStopsWhenAsked) {
  // Two parallel two-hop routes 0 -> {1, 2} -> 3
  const std::vector<Edge> edges = {{0, 0, 1}, {1, 0, 3}, {0, 0, 2}, {2, 0, 3}};
  const Digraph g(edges);
  EXPECT_EQ(g.for_each_path(0, 3, 2, 2, [](auto) { return true; }), 2u);
  EXPECT_EQ(g.for_each_path(0, 3, 2, 2, [](auto) { return false; }), 1u);
  EXPECT_EQ(g.for_each_path(0, 3, 3, 5, [](auto) { return true; }), 0u);
  EXPECT_EQ(g.for_each_path(3, 0, 1, 5, [](auto) { return true; }), 0u);
}

TEST(Digraph, AdjacencyLists) {
  const std::vector<Edge> edges = {{0, 0, 1}, {1, 1, 2}, {0, 2, 2}};
  const Digraph g(edges, 5);
  EXPECT_EQ(g.num_nodes(), 5u);
  EXPECT_EQ(g.out_edges(0).size(), 2u);
  EXPECT_EQ(g.in_edges(2).size(), 2u);
  EXPECT_EQ(g.distance(0, 4), kUnreachable);
  EXPECT_TRUE(g.shortest_path(0, 4).empty());
}

}  // namespace
}  // namespace rulegraph
