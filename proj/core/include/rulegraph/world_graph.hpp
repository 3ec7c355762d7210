#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rulegraph/logic_rules.hpp"
#include "rulegraph/random.hpp"

namespace rulegraph {

using NodeId = std::int32_t;

/// Labelled directed edge src -[rel]-> dst.
struct Edge {
  NodeId src = 0;
  RelationId rel = 0;
  NodeId dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Split : std::uint8_t { train = 0, valid = 1, test = 2 };
inline constexpr std::array<Split, 3> kSplits = {Split::train, Split::valid, Split::test};
const char* to_string(Split split);
Split split_from_string(const std::string& name);

/// Knobs for world-graph expansion and instance sampling.
struct GenConfig {
  double gamma = 0.8;                 // per-use decay of a rule's selection weight
  std::size_t max_expansions = 5;     // expansions per cycle drawn from [2, max_expansions]
  std::size_t cycles = 2;             // completed rule-coverage cycles required
  std::size_t node_pool = 100;        // fresh nodes to spend
  std::size_t max_walk_len = 10;      // longest resolution path
  std::array<std::size_t, 3> graphs_per_split = {5000, 1000, 1000};
  double noise_gamma = 0.8;           // BFS noise keeps an edge at depth d w.p. noise_gamma^d
  std::size_t noise_depth = 2;
  std::array<double, 3> split_fractions = {0.7, 0.15, 0.15};  // over descriptors
  std::size_t walk_cap = 10000;       // walks enumerated per world edge
  std::size_t edge_cap_factor = 50;   // world graphs stop at edge_cap_factor * |rules| edges
  std::size_t max_regenerations = 5;  // attempts when closure_check fails
  std::size_t max_instance_attempts = 64;

  /// Throws Error(invalid_configuration) naming the first bad field.
  void validate() const;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

/// Labelled multigraph restricted to one label per ordered node pair.
class WorldGraph {
 public:
  NodeId add_node() { return static_cast<NodeId>(num_nodes_++); }
  void resize(std::size_t num_nodes) { num_nodes_ = num_nodes; }

  /// False (and no change) if the ordered pair already carries a label.
  bool add_edge(const Edge& e);

  std::optional<RelationId> label(NodeId u, NodeId v) const;

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const WorldGraph& a, const WorldGraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  }

  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;  // insertion order
  std::unordered_map<std::uint64_t, RelationId> labels_;
};

/// One step of the generator: either a fresh seed edge, or the expansion of
/// `edge` by rule `rule` through the fresh node `fresh`.
struct ExpansionStep {
  enum class Kind { seed, expand };
  Kind kind = Kind::seed;
  Edge edge;
  std::size_t rule = 0;
  NodeId fresh = -1;
};

struct WorldGeneration {
  WorldGraph graph;
  std::vector<ExpansionStep> trace;
  std::vector<std::size_t> rule_uses;  // per world rule
  std::size_t completed_cycles = 0;
  bool edge_cap_hit = false;
  std::size_t rejected_expansions = 0;  // rule choices undone for a closure conflict
  std::size_t attempts = 1;
};

/// A single expansion run, without the closure gate.
WorldGeneration expand_world_graph(const RuleSet& world_rules, const GenConfig& cfg, Rng& rng);

/// Expansion runs with fresh sub-seeds until closure_check is clean, up to
/// cfg.max_regenerations attempts. Throws Error(degenerate_world) for an
/// empty rule subset or when every attempt conflicts.
WorldGeneration generate_world_graph(const RuleSet& world_rules, const GenConfig& cfg, Rng& rng);

struct ClosureDiagnostic {
  NodeId src;
  NodeId dst;
  std::optional<RelationId> edge_label;  // label present in the graph, if any
  std::vector<RelationId> derived;       // sorted distinct derived labels
};

/// Forward-chains every rule over the graph to a fixpoint and reports each
/// pair whose derived labels disagree with its edge label or with each
/// other.
std::vector<ClosureDiagnostic> closure_check(const WorldGraph& graph, const RuleSet& rules);

/// Incremental forward chaining over a growing edge set. Every added fact
/// is logged so a batch of additions can be undone.
class ClosureTracker {
 public:
  explicit ClosureTracker(const RuleSet& rules);

  /// Adds edges and propagates to a fixpoint. Returns false if some pair
  /// ends up with two labels; with stop_on_conflict propagation halts
  /// there, leaving a partial state that rollback() can undo.
  bool add(std::span<const Edge> edges, bool stop_on_conflict = true);
  std::size_t mark() const noexcept { return log_.size(); }
  /// Undoes every fact added after `mark`.
  void rollback(std::size_t mark);
  /// Derived labels per ordered pair, keyed by (src << 32 | dst).
  const std::unordered_map<std::uint64_t, std::vector<RelationId>>& labels() const noexcept {
    return labels_;
  }

 private:
  struct Fact {
    NodeId node;
    RelationId rel;
  };
  static std::uint64_t key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  }
  const RuleSet* rules_;
  std::vector<std::vector<Fact>> out_, in_;
  std::unordered_map<std::uint64_t, std::vector<RelationId>> labels_;
  std::vector<Edge> log_;
};

}  // namespace rulegraph
