#include "rulegraph/partitioning.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

RuleSet master_of_size(std::size_t n) {
  // Distinct bodies over a 16-relation identity alphabet; content is irrelevant here.
  std::vector<RelationId> inv(16);
  for (RelationId i = 0; i < 16; ++i) inv[static_cast<std::size_t>(i)] = i;
  std::vector<BinaryRule> rules;
  for (std::size_t i = 0; i < n; ++i) {
    rules.push_back({{static_cast<RelationId>(i / 16), static_cast<RelationId>(i % 16)}, 15});
  }
  return RuleSet(RelationAlphabet(inv), rules);
}

WorldSpec world(WorldId id, std::vector<std::size_t> idx) { return {id, std::move(idx)}; }

TEST(SlidingWindows, CountsFollowWindowArithmetic) {
  EXPECT_EQ(sliding_windows(76, 20, 1).size(), 57u);
  EXPECT_EQ(sliding_windows(5, 5, 1).size(), 1u);
  const auto w = sliding_windows(10, 4, 2);
  ASSERT_EQ(w.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(w[i].world_id, i);
    EXPECT_EQ(w[i].rule_indices.front(), 2 * i);
    EXPECT_EQ(w[i].rule_indices.size(), 4u);
  }
}

TEST(SlidingWindows, PropertyCountAndCoverage) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.uniform_int(1, 120);
    const std::size_t w = rng.uniform_int(1, n);
    const std::size_t s = rng.uniform_int(1, 10);
    const auto worlds = sliding_windows(n, w, s);
    ASSERT_EQ(worlds.size(), (n - w) / s + 1);
    for (const auto& ws : worlds) {
      ASSERT_EQ(ws.rule_indices.size(), w);
      ASSERT_TRUE(std::is_sorted(ws.rule_indices.begin(), ws.rule_indices.end()));
      ASSERT_LT(ws.rule_indices.back(), n);
    }
    for (std::size_t i = 0; i + 1 < worlds.size(); ++i) {
      ASSERT_EQ(similarity(worlds[i], worlds[i + 1]), w > s ? w - s : 0);
    }
  }
}

TEST(SlidingWindows, RejectsOversizedWindow) {
  EXPECT_THROW(sliding_windows(10, 11, 1), Error);
  EXPECT_THROW(sliding_windows(10, 0, 1), Error);
  EXPECT_THROW(sliding_windows(10, 2, 0), Error);
}

TEST(PartitionRules, MasterIsAPermutationAndWorldsDrawFromIt) {
  const RuleSet rules = master_of_size(76);
  Rng rng(7);
  const Partition p = partition_rules(rules, 20, 1, rng);
  EXPECT_EQ(p.worlds.size(), 57u);
  ASSERT_EQ(p.master.size(), rules.size());
  std::vector<BinaryRule> a = p.master.rules(), b = rules.rules();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_NE(p.master.rules(), rules.rules());
  const RuleSet w3 = world_rules(p.master, p.worlds[3]);
  ASSERT_EQ(w3.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(w3[i], p.master[3 + i]);
}

TEST(Similarity, Basics) {
  EXPECT_EQ(similarity(world(0, {0, 1, 2}), world(1, {3, 4})), 0u);
  const auto w = sliding_windows(76, 20, 1);
  EXPECT_EQ(similarity(w[0], w[1]), 19u);
  const auto m = similarity_matrix(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(m[i][i], 20u);
    for (std::size_t j = 0; j < w.size(); ++j) {
      EXPECT_EQ(m[i][j], m[j][i]);
      const std::size_t gap = i > j ? i - j : j - i;
      EXPECT_EQ(m[i][j], gap >= 20 ? 0 : 20 - gap);
    }
  }
}

TEST(SelectWorlds, ExhaustingThePoolGivesAPermutation) {
  const auto w = sliding_windows(30, 5, 2);
  for (auto mode : {SelectionMode::most_similar, SelectionMode::least_similar, SelectionMode::mixed}) {
    const auto sel = select_worlds_by_similarity(w[3], w, w.size(), mode);
    std::set<WorldId> ids;
    for (const auto& s : sel) ids.insert(s.world_id);
    EXPECT_EQ(ids.size(), w.size());
  }
}

TEST(SelectWorlds, MostSimilarPicksAdjacentWindow) {
  const auto all = sliding_windows(40, 20, 1);
  std::vector<WorldSpec> pool(all.begin() + 1, all.end());
  const auto sel = select_worlds_by_similarity(all[0], pool, 1, SelectionMode::most_similar);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].world_id, 1u);
  EXPECT_EQ(similarity(all[0], sel[0]), 19u);
}

TEST(SelectWorlds, LeastSimilarRanksDisjointWorldFirst) {
  const WorldSpec target = world(0, {0, 1, 2, 3});
  const std::vector<WorldSpec> pool = {world(1, {1, 2, 3, 4}), world(2, {2, 3, 4, 5}),
                                       world(3, {7, 8, 9, 10})};
  const auto sel = select_worlds_by_similarity(target, pool, 2, SelectionMode::least_similar);
  EXPECT_EQ(sel[0].world_id, 3u);
  EXPECT_EQ(sel[1].world_id, 2u);
  const auto mixed = select_worlds_by_similarity(target, pool, 3, SelectionMode::mixed);
  EXPECT_EQ(mixed[0].world_id, 1u);
  EXPECT_EQ(mixed[1].world_id, 3u);
  EXPECT_EQ(mixed[2].world_id, 2u);
  EXPECT_THROW(select_worlds_by_similarity(target, pool, 4, SelectionMode::mixed), Error);
}

TEST(Curriculum, SortsByAccuracyThenId) {
  const std::vector<WorldSpec> w = {world(0, {}), world(1, {}), world(2, {})};
  // A=0, B=1, C=2
  EXPECT_EQ(order_curriculum(w, {{0, 0.9}, {1, 0.5}, {2, 0.7}}), (std::vector<WorldId>{0, 2, 1}));
  EXPECT_EQ(order_curriculum(w, {{0, 0.5}, {1, 0.5}, {2, 0.5}}), (std::vector<WorldId>{0, 1, 2}));
  EXPECT_THROW(order_curriculum(w, {{0, 0.5}}), Error);
}

TEST(Curriculum, ReferenceAccuracies) {
  const std::vector<WorldSpec> w = {world(0, {}), world(9, {}), world(54, {})};
  EXPECT_EQ(order_curriculum(w, {{9, 0.758}, {54, 0.638}, {0, 0.481}}),
            (std::vector<WorldId>{9, 54, 0}));
}

}  // namespace
}  // namespace rulegraph
