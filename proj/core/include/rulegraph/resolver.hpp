#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rulegraph/logic_rules.hpp"

namespace rulegraph {

struct Instance;
struct WorldDataset;

/// Sorted, duplicate-free set of relations.
using RelationSet = std::vector<RelationId>;

/// CYK chart over a descriptor: span(i, j) holds every relation derivable
/// from labels [i, j) under some binary bracketing.
class ResolutionChart {
 public:
  ResolutionChart(const RuleSet& rules, std::span<const RelationId> descriptor);

  std::size_t length() const noexcept { return length_; }
  /// 0 <= begin < end <= length()
  const RelationSet& span(std::size_t begin, std::size_t end) const;
  const RelationSet& full() const { return span(0, length_); }

 private:
  std::size_t cell(std::size_t begin, std::size_t end) const { return begin * (length_ + 1) + end; }

  std::size_t length_ = 0;
  std::vector<RelationSet> cells_;
};

/// Relations derivable for the whole descriptor; empty if none.
RelationSet resolve_descriptor(const RuleSet& rules, std::span<const RelationId> descriptor);

inline constexpr std::size_t kBruteForceMaxLength = 12;

/// Enumerates every full binary bracketing explicitly and folds each one
/// through RuleSet::compose. Oracle-scale only: throws Error(invalid_input)
/// above kBruteForceMaxLength labels.
RelationSet brute_force_resolve(const RuleSet& rules, std::span<const RelationId> descriptor);

struct ValidationReport {
  RelationSet resolved;
  bool target_hit = false;           // target in resolved
  bool ambiguous = false;            // |resolved| > 1
  bool descriptor_matches = false;   // path labels reproduce the descriptor
  bool shortcut_free = false;        // shortest source->sink distance == |descriptor|
  bool path_consistent = false;      // other equal-length paths resolve within {target}

  bool valid() const {
    return target_hit && !ambiguous && descriptor_matches && shortcut_free && path_consistent;
  }
};

ValidationReport validate_instance(const RuleSet& rules, const Instance& instance);

/// Predicts the query relation from the instance graph alone: resolves
/// simple source->sink paths shortest first and answers with the smallest
/// relation derivable at the first length that derives anything.
std::optional<RelationId> symbolic_predict(const RuleSet& rules, const Instance& instance,
                                           std::size_t max_len);

/// Fraction of instances across all splits predicted correctly; nullopt for
/// an empty dataset.
std::optional<double> symbolic_baseline_solve(const RuleSet& rules, const WorldDataset& dataset,
                                              std::size_t max_len = 10);

}  // namespace rulegraph
