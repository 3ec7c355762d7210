#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "rulegraph/logic_rules.hpp"
#include "rulegraph/random.hpp"

namespace rulegraph {

using WorldId = std::size_t;

/// A world is a window of rule positions in the permuted master list.
struct WorldSpec {
  WorldId world_id = 0;
  std::vector<std::size_t> rule_indices;  // strictly increasing

  friend bool operator==(const WorldSpec&, const WorldSpec&) = default;
};

struct Partition {
  RuleSet master;  // the master rules after the one-time permutation
  std::vector<WorldSpec> worlds;
};

/// Permutes the master list once, then takes windows [i, i + w) for
/// i = 0, s, 2s, ... while i <= |rules| - w. Yields floor((|rules| - w) / s) + 1
/// worlds.
Partition partition_rules(const RuleSet& rules, std::size_t rules_per_world, std::size_t stride,
                          Rng& rng);

/// Window partition of an already-ordered list, without permutation.
std::vector<WorldSpec> sliding_windows(std::size_t num_rules, std::size_t rules_per_world,
                                       std::size_t stride);

/// The world's rule subset drawn from the permuted master.
RuleSet world_rules(const RuleSet& master, const WorldSpec& world);

/// |rule_indices(a) ∩ rule_indices(b)|
std::size_t similarity(const WorldSpec& a, const WorldSpec& b);

using SimilarityMatrix = std::vector<std::vector<std::size_t>>;

SimilarityMatrix similarity_matrix(std::span<const WorldSpec> worlds);

enum class SelectionMode { most_similar, least_similar, mixed };

/// k worlds from the pool ranked by similarity to target. Ties go to the
/// smaller world_id. "mixed" alternates most-similar and least-similar picks.
std::vector<WorldSpec> select_worlds_by_similarity(const WorldSpec& target,
                                                   std::span<const WorldSpec> pool, std::size_t k,
                                                   SelectionMode mode);

/// World ids from easiest (highest accuracy) to hardest; ties by world_id.
std::vector<WorldId> order_curriculum(std::span<const WorldSpec> worlds,
                                      const std::map<WorldId, double>& scores);

}  // namespace rulegraph
