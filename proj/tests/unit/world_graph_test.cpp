#include "rulegraph/world_graph.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "helpers.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/partitioning.hpp"

namespace rulegraph {
namespace {

using testing::alphabet4;

// Rebuilds the graph from the recorded trace alone.
WorldGraph replay(const std::vector<ExpansionStep>& trace, const RuleSet& rules) {
  WorldGraph g;
  std::size_t nodes = 0;
  auto touch = [&](NodeId v) { nodes = std::max(nodes, static_cast<std::size_t>(v) + 1); };
  for (const auto& step : trace) {
    if (step.kind == ExpansionStep::Kind::seed) {
      touch(step.edge.src);
      touch(step.edge.dst);
      g.resize(nodes);
      g.add_edge(step.edge);
    } else {
      const BinaryRule& r = rules[step.rule];
      EXPECT_EQ(r.head, step.edge.rel);
      touch(step.fresh);
      g.resize(nodes);
      g.add_edge({step.edge.src, r.body[0], step.fresh});
      g.add_edge({step.fresh, r.body[1], step.edge.dst});
    }
  }
  return g;
}

// Naive fixpoint: compose every ordered pair of facts until nothing changes.
std::map<std::pair<NodeId, NodeId>, std::set<RelationId>> naive_closure(const WorldGraph& g,
                                                                       const RuleSet& rules) {
  std::set<Edge> facts(g.edges().begin(), g.edges().end());
  for (bool changed = true; changed;) {
    changed = false;
    const std::vector<Edge> snapshot(facts.begin(), facts.end());
    for (const Edge& a : snapshot) {
      for (const Edge& b : snapshot) {
        if (a.dst != b.src) continue;
        if (auto h = rules.compose(a.rel, b.rel)) changed |= facts.insert({a.src, *h, b.dst}).second;
      }
    }
  }
  std::map<std::pair<NodeId, NodeId>, std::set<RelationId>> out;
  for (const Edge& f : facts) out[{f.src, f.dst}].insert(f.rel);
  return out;
}

RuleSet default_world(std::uint64_t seed, std::size_t world_index) {
  Rng rng(seed);
  const auto a = generate_alphabet(20, rng);
  const auto rules = generate_rules(a, rng);
  const auto p = partition_rules(rules, 20, 1, rng);
  return world_rules(p.master, p.worlds[world_index % p.worlds.size()]);
}

TEST(Split, Names) {
  for (Split s : kSplits) EXPECT_EQ(split_from_string(to_string(s)), s);
  EXPECT_THROW(split_from_string("dev"), Error);
}

TEST(GenConfig, ValidateRejectsBadValues) {
  EXPECT_NO_THROW(GenConfig{}.validate());
  GenConfig c;
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_expansions = 1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_walk_len = 1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.split_fractions = {0.5, 0.5, 0.5};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.noise_gamma = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(WorldGraph, OneLabelPerOrderedPair) {
  WorldGraph g;
  g.resize(3);
  EXPECT_TRUE(g.add_edge({0, 1, 1}));
  EXPECT_FALSE(g.add_edge({0, 2, 1}));
  EXPECT_TRUE(g.add_edge({1, 2, 0}));
  EXPECT_EQ(g.label(0, 1), 1);
  EXPECT_EQ(g.label(1, 0), 2);
  EXPECT_FALSE(g.label(1, 2).has_value());
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(ExpandWorldGraph, SingleRuleFirstExpansion) {
  const RuleSet rules(alphabet4(), {{{0, 2}, 3}});
  GenConfig cfg;
  cfg.max_expansions = 2;
  cfg.cycles = 1;
  cfg.node_pool = 1;
  Rng rng(1);
  const auto gen = expand_world_graph(rules, cfg, rng);
  ASSERT_GE(gen.trace.size(), 2u);
  EXPECT_EQ(gen.trace[0].kind, ExpansionStep::Kind::seed);
  const Edge seed = gen.trace[0].edge;
  EXPECT_EQ(seed.rel, 3);
  const auto& step = gen.trace[1];
  EXPECT_EQ(step.kind, ExpansionStep::Kind::expand);
  const NodeId c = step.fresh;
  const auto& e = gen.graph.edges();
  ASSERT_GE(e.size(), 3u);
  EXPECT_EQ(e[0], seed);
  EXPECT_EQ(e[1], (Edge{seed.src, 0, c}));
  EXPECT_EQ(e[2], (Edge{c, 2, seed.dst}));
  EXPECT_EQ(gen.completed_cycles, 1u);
}

TEST(ExpandWorldGraph, TraceReplayReproducesTheGraph) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const RuleSet rules = default_world(seed, seed * 7);
    Rng rng(seed);
    const auto gen = expand_world_graph(rules, GenConfig{}, rng);
    const WorldGraph g = replay(gen.trace, rules);
    EXPECT_EQ(g.edges(), gen.graph.edges()) << "seed " << seed;
    EXPECT_EQ(g.num_nodes(), gen.graph.num_nodes());
  }
}

TEST(ExpandWorldGraph, EveryRuleUsedAtLeastCyclesTimes) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const RuleSet rules = default_world(seed, seed * 3);
    Rng rng(seed + 100);
    const GenConfig cfg;
    const auto gen = expand_world_graph(rules, cfg, rng);
    ASSERT_FALSE(gen.edge_cap_hit) << "seed " << seed;
    EXPECT_GE(gen.completed_cycles, cfg.cycles);
    for (std::size_t uses : gen.rule_uses) EXPECT_GE(uses, cfg.cycles) << "seed " << seed;
    EXPECT_GE(gen.graph.num_nodes(), cfg.node_pool);
  }
}

TEST(ExpandWorldGraph, EdgeCapStopsGeneration) {
  const RuleSet rules = default_world(1, 0);
  GenConfig cfg;
  cfg.edge_cap_factor = 2;
  Rng rng(1);
  const auto gen = expand_world_graph(rules, cfg, rng);
  EXPECT_TRUE(gen.edge_cap_hit);
  EXPECT_LE(gen.graph.num_edges(), 2 * rules.size() + 2 * cfg.max_expansions + 1);
}

TEST(ExpandWorldGraph, EmptyWorldIsDegenerate) {
  Rng rng(0);
  try {
    expand_world_graph(RuleSet(alphabet4(), {}), GenConfig{}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_world);
  }
}

TEST(ClosureCheck, ExpansionChainIsClean) {
  const RuleSet rules(alphabet4(), {{{0, 2}, 3}, {{2, 1}, 3}});
  WorldGraph g;
  g.resize(3);
  g.add_edge({0, 3, 1});
  g.add_edge({0, 0, 2});
  g.add_edge({2, 2, 1});
  EXPECT_TRUE(closure_check(g, rules).empty());
}

TEST(ClosureCheck, InjectedConflict) {
  const RuleSet rules(alphabet4(), {{{0, 2}, 3}});
  WorldGraph g;
  g.resize(3);
  g.add_edge({0, 0, 2});
  g.add_edge({2, 2, 1});
  g.add_edge({0, 1, 1});
  const auto d = closure_check(g, rules);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].src, 0);
  EXPECT_EQ(d[0].dst, 1);
  EXPECT_EQ(d[0].edge_label, 1);
  EXPECT_EQ(d[0].derived, (std::vector<RelationId>{1, 3}));
}

TEST(ClosureCheck, AgreesWithNaiveFixpoint) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const RuleSet rules = testing::random_rule_set(rng, rng.uniform_int(2, 5), 10);
    const std::size_t k = rules.alphabet().size();
    WorldGraph g;
    const std::size_t n = rng.uniform_int(2, 7);
    g.resize(n);
    for (std::size_t i = rng.uniform_int(1, 12); i > 0; --i) {
      g.add_edge({static_cast<NodeId>(rng.uniform_index(n)),
                  static_cast<RelationId>(rng.uniform_index(k)),
                  static_cast<NodeId>(rng.uniform_index(n))});
    }
    std::set<std::pair<NodeId, NodeId>> expected;
    for (const auto& [pair, labels] : naive_closure(g, rules)) {
      if (labels.size() > 1) expected.insert(pair);
    }
    std::set<std::pair<NodeId, NodeId>> got;
    for (const auto& d : closure_check(g, rules)) got.insert({d.src, d.dst});
    ASSERT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(GenerateWorldGraph, DefaultScaleWorldsCloseCleanly) {
  std::size_t regenerated = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RuleSet rules = default_world(seed / 10, seed);
    Rng rng(seed);
    const auto gen = generate_world_graph(rules, GenConfig{}, rng);
    EXPECT_TRUE(closure_check(gen.graph, rules).empty());
    regenerated += gen.attempts > 1;
  }
  RecordProperty("regenerated", static_cast<int>(regenerated));
}

TEST(GenerateWorldGraph, Deterministic) {
  const RuleSet rules = default_world(3, 5);
  Rng a(8), b(8);
  EXPECT_EQ(generate_world_graph(rules, GenConfig{}, a).graph,
            generate_world_graph(rules, GenConfig{}, b).graph);
}

}  // namespace
}  // namespace rulegraph
