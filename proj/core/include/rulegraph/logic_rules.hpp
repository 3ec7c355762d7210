#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rulegraph/random.hpp"

namespace rulegraph {

/// Dense relation symbol in [0, K).
using RelationId = std::int32_t;

/// K relation symbols together with their inverse involution. A relation is
/// symmetric exactly when it is its own inverse.
class RelationAlphabet {
 public:
  RelationAlphabet() = default;

  /// Throws Error(invalid_input) unless `inverse` is an involution on [0, K).
  explicit RelationAlphabet(std::vector<RelationId> inverse);

  std::size_t size() const noexcept { return inverse_.size(); }
  bool contains(RelationId r) const noexcept {
    return r >= 0 && static_cast<std::size_t>(r) < inverse_.size();
  }
  RelationId inverse(RelationId r) const { return inverse_.at(static_cast<std::size_t>(r)); }
  bool is_symmetric(RelationId r) const { return inverse(r) == r; }
  std::size_t symmetric_count() const noexcept;
  const std::vector<RelationId>& inverse_map() const noexcept { return inverse_; }

  friend bool operator==(const RelationAlphabet&, const RelationAlphabet&) = default;

 private:
  std::vector<RelationId> inverse_;
};

/// Draws which relations are symmetric and pairs the rest into inverse
/// pairs. ceil(K * symmetric_fraction) relations become symmetric; if the
/// remainder is odd one more is made symmetric.
RelationAlphabet generate_alphabet(std::size_t num_relations, Rng& rng,
                                   double symmetric_fraction = 0.5);

/// [body[0], body[1]] => head
struct BinaryRule {
  std::array<RelationId, 2> body{};
  RelationId head = 0;

  friend auto operator<=>(const BinaryRule&, const BinaryRule&) = default;
};

std::string to_string(const BinaryRule& rule);

/// [inv(body[1]), inv(body[0])] => inv(head)
BinaryRule invert_rule(const BinaryRule& rule, const RelationAlphabet& alphabet);

/// Ordered list of binary rules over an alphabet, indexed by body for O(1)
/// composition. The index keeps the first rule for a repeated body; use
/// check_consistency to detect such sets.
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(RelationAlphabet alphabet, std::vector<BinaryRule> rules);

  const RelationAlphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<BinaryRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }
  const BinaryRule& operator[](std::size_t i) const { return rules_[i]; }

  /// Head of the rule with body (a, b), if any.
  std::optional<RelationId> compose(RelationId a, RelationId b) const;

  /// Position of the rule with this body, if any.
  std::optional<std::size_t> find_body(RelationId a, RelationId b) const;

  bool contains(const BinaryRule& rule) const;

  /// Rules at the given positions, in that order, over the same alphabet.
  RuleSet subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const RuleSet& a, const RuleSet& b) {
    return a.alphabet_ == b.alphabet_ && a.rules_ == b.rules_;
  }

 private:
  std::size_t slot(RelationId a, RelationId b) const {
    return static_cast<std::size_t>(a) * alphabet_.size() + static_cast<std::size_t>(b);
  }

  RelationAlphabet alphabet_;
  std::vector<BinaryRule> rules_;
  std::vector<std::int32_t> body_index_;  // K*K, -1 when unused
};

/// Candidate sweep over all (i, j, k) triples in a seed-permuted order with
/// inverse insertion and conflict removal, followed by an inverse-closure
/// repair and a dependency-cycle sweep. An empty result is reported on
/// std::clog and returned.
RuleSet generate_rules(const RelationAlphabet& alphabet, Rng& rng);

struct Diagnostic {
  enum class Kind { duplicate_body, head_in_body, missing_inverse, dependency_cycle };
  Kind kind;
  std::vector<std::size_t> rules;  // offending rule positions
  std::string message;
};

const char* to_string(Diagnostic::Kind kind);

enum class InverseClosure { required, not_required };

/// One diagnostic per violation; an empty result means consistent. World
/// subsets of a master set are windows and are not inverse-closed, so they
/// are checked with InverseClosure::not_required.
std::vector<Diagnostic> check_consistency(const RuleSet& rules,
                                          InverseClosure closure = InverseClosure::required);

}  // namespace rulegraph
