#include "rulegraph/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

namespace rulegraph {
namespace {

TEST(Mix64, MatchesSplitMix64ReferenceOutputs) {
  // First outputs of the SplitMix64 reference generator seeded with 0:
  // state advances by the golden gamma before each mix.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(mix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(SubSeed, FoldsPartsInOrder) {
  const std::uint64_t m = 42;
  std::uint64_t h = mix64(m);
  h = mix64(h ^ mix64(4));
  h = mix64(h ^ mix64(7));
  EXPECT_EQ(sub_seed(m, {4, 7}), h);
  EXPECT_NE(sub_seed(m, {4, 7}), sub_seed(m, {7, 4}));
  EXPECT_EQ(sub_seed(m, {}), mix64(m));
}

TEST(Rng, UniformIndexStaysInRangeAndCoversIt) {
  Rng rng(1);
  for (std::size_t n : {1u, 2u, 3u, 7u, 100u}) {
    std::vector<int> hits(n, 0);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t x = rng.uniform_index(n);
      ASSERT_LT(x, n);
      ++hits[x];
    }
    if (n <= 7) {
      for (int h : hits) EXPECT_GT(h, 0);
    }
  }
}

TEST(Rng, Uniform01InUnitInterval) {
  Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(Rng, WeightedIndexSkipsZeroWeights) {
  Rng rng(5);
  const std::vector<double> w = {0.0, 2.0, 0.0, 1.0};
  int ones = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t k = rng.weighted_index(w);
    ASSERT_TRUE(k == 1 || k == 3);
    ones += k == 1;
  }
  EXPECT_NEAR(ones / 3000.0, 2.0 / 3.0, 0.04);
  const std::vector<double> zero = {0.0, 0.0};
  EXPECT_EQ(rng.weighted_index(zero), zero.size());
}

TEST(Rng, ShuffleIsAPermutationAndSeedDeterministic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<int> a(20), b(20);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    Rng r1(seed), r2(seed);
    r1.shuffle(std::span(a));
    r2.shuffle(std::span(b));
    EXPECT_EQ(a, b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
  }
}

}  // namespace
}  // namespace rulegraph
