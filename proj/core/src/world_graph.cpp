#include "rulegraph/world_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>
#include <string>

#include "rulegraph/error.hpp"

namespace rulegraph {

const char* to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "unknown";
}

Split split_from_string(const std::string& name) {
  for (Split s : kSplits) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorKind::invalid_input, "unknown split '" + name + "'");
}

void GenConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::invalid_configuration, what);
  };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  if (max_expansions < 2) fail("max_expansions must be at least 2");
  if (cycles < 1) fail("cycles must be at least 1");
  if (node_pool < 1) fail("node_pool must be positive");
  if (max_walk_len < 2) fail("max_walk_len must be at least 2");
  for (std::size_t n : graphs_per_split) {
    if (n < 1) fail("graphs_per_split entries must be positive");
  }
  if (!(noise_gamma >= 0.0 && noise_gamma <= 1.0)) fail("noise_gamma must lie in [0, 1]");
  double total = 0.0;
  for (double f : split_fractions) {
    if (!(f > 0.0)) fail("split fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) fail("split fractions must sum to 1");
  if (walk_cap < 1) fail("walk_cap must be positive");
  if (edge_cap_factor < 1) fail("edge_cap_factor must be positive");
  if (max_regenerations < 1) fail("max_regenerations must be positive");
  if (max_instance_attempts < 1) fail("max_instance_attempts must be positive");
}

bool WorldGraph::add_edge(const Edge& e) {
  auto [it, inserted] = labels_.emplace(key(e.src, e.dst), e.rel);
  if (!inserted) return false;
  edges_.push_back(e);
  auto top = static_cast<std::size_t>(std::max(e.src, e.dst)) + 1;
  num_nodes_ = std::max(num_nodes_, top);
  return true;
}

std::optional<RelationId> WorldGraph::label(NodeId u, NodeId v) const {
  auto it = labels_.find(key(u, v));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

ClosureTracker::ClosureTracker(const RuleSet& rules) : rules_(&rules) {}

bool ClosureTracker::add(std::span<const Edge> edges, bool stop_on_conflict) {
  std::deque<Edge> work;
  bool clean = true;
  // Returns false when the fact gives its pair a second label.
  auto add_fact = [&](NodeId u, RelationId r, NodeId v) {
    auto& known = labels_[key(u, v)];
    if (std::find(known.begin(), known.end(), r) != known.end()) return true;
    known.push_back(r);
    const auto top = static_cast<std::size_t>(std::max(u, v)) + 1;
    if (out_.size() < top) {
      out_.resize(top);
      in_.resize(top);
    }
    out_[static_cast<std::size_t>(u)].push_back({v, r});
    in_[static_cast<std::size_t>(v)].push_back({u, r});
    log_.push_back({u, r, v});
    work.push_back({u, r, v});
    return known.size() == 1;
  };

  for (const Edge& e : edges) {
    if (!add_fact(e.src, e.rel, e.dst)) {
      clean = false;
      if (stop_on_conflict) return false;
    }
  }
  while (!work.empty()) {
    const Edge f = work.front();
    work.pop_front();
    // f followed by an outgoing fact of f.dst; indices, since add_fact may grow the lists
    for (std::size_t i = 0; i < out_[static_cast<std::size_t>(f.dst)].size(); ++i) {
      const Fact g = out_[static_cast<std::size_t>(f.dst)][i];
      if (auto h = rules_->compose(f.rel, g.rel); h && !add_fact(f.src, *h, g.node)) {
        clean = false;
        if (stop_on_conflict) return false;
      }
    }
    // an incoming fact of f.src followed by f
    for (std::size_t i = 0; i < in_[static_cast<std::size_t>(f.src)].size(); ++i) {
      const Fact g = in_[static_cast<std::size_t>(f.src)][i];
      if (auto h = rules_->compose(g.rel, f.rel); h && !add_fact(g.node, *h, f.dst)) {
        clean = false;
        if (stop_on_conflict) return false;
      }
    }
  }
  return clean;
}

void ClosureTracker::rollback(std::size_t mark) {
  while (log_.size() > mark) {
    const Edge f = log_.back();
    log_.pop_back();
    out_[static_cast<std::size_t>(f.src)].pop_back();
    in_[static_cast<std::size_t>(f.dst)].pop_back();
    auto it = labels_.find(key(f.src, f.dst));
    it->second.pop_back();
    if (it->second.empty()) labels_.erase(it);
  }
}

WorldGeneration expand_world_graph(const RuleSet& world_rules, const GenConfig& cfg, Rng& rng) {
  if (world_rules.empty()) {
    throw Error(ErrorKind::degenerate_world, "world has no rules to expand");
  }
  const auto& rules = world_rules.rules();
  const std::size_t num_rules = rules.size();

  std::map<RelationId, std::vector<std::size_t>> by_head;
  for (std::size_t i = 0; i < num_rules; ++i) by_head[rules[i].head].push_back(i);
  std::vector<RelationId> heads;
  for (const auto& [h, _] : by_head) heads.push_back(h);

  WorldGeneration gen;
  gen.rule_uses.assign(num_rules, 0);
  std::vector<double> weight(num_rules, 1.0);
  std::vector<bool> used_this_cycle(num_rules, false);
  std::size_t pool_left = cfg.node_pool;
  const std::size_t edge_cap = cfg.edge_cap_factor * num_rules;

  WorldGraph& g = gen.graph;
  ClosureTracker closure(world_rules);
  auto fresh_node = [&] {
    if (pool_left > 0) --pool_left;
    return g.add_node();
  };
  auto expandable = [&](const Edge& e) { return by_head.count(e.rel) > 0; };

  while ((gen.completed_cycles < cfg.cycles || pool_left > 0) && g.num_edges() < edge_cap) {
    const std::size_t steps = rng.uniform_int(2, cfg.max_expansions);
    std::vector<Edge> cycle_edges;
    for (std::size_t step = 0; step < steps; ++step) {
      Edge target;
      if (step == 0) {
        std::vector<Edge> existing;
        for (const Edge& e : g.edges()) {
          if (expandable(e)) existing.push_back(e);
        }
        if (existing.empty() || rng.bernoulli(0.5)) {
          std::vector<double> head_weight;
          head_weight.reserve(heads.size());
          for (RelationId h : heads) {
            double sum = 0.0;
            for (std::size_t i : by_head.at(h)) sum += weight[i];
            head_weight.push_back(sum);
          }
          target.rel = heads[rng.weighted_index(head_weight)];
          target.src = fresh_node();
          target.dst = fresh_node();
          g.add_edge(target);  // both endpoints are fresh, cannot collide
          closure.add(std::span(&target, 1));
          gen.trace.push_back({ExpansionStep::Kind::seed, target, 0, -1});
        } else {
          target = existing[rng.uniform_index(existing.size())];
        }
        cycle_edges.push_back(target);
      } else {
        std::vector<Edge> open;
        for (const Edge& e : cycle_edges) {
          if (expandable(e)) open.push_back(e);
        }
        if (open.empty()) break;
        target = open[rng.uniform_index(open.size())];
      }

      // Decayed-weight rule choice; a choice whose new edges would give
      // some pair a second derived label is undone and excluded.
      const auto& candidates = by_head.at(target.rel);
      std::vector<double> w;
      w.reserve(candidates.size());
      for (std::size_t i : candidates) w.push_back(weight[i]);
      const auto mid = static_cast<NodeId>(g.num_nodes());
      std::optional<std::size_t> chosen;
      for (std::size_t tries = 0; tries < candidates.size(); ++tries) {
        const std::size_t c = rng.weighted_index(w);
        if (c == w.size()) break;
        const BinaryRule& rule = rules[candidates[c]];
        const std::array<Edge, 2> added = {Edge{target.src, rule.body[0], mid},
                                           Edge{mid, rule.body[1], target.dst}};
        const std::size_t mark = closure.mark();
        if (closure.add(added)) {
          chosen = candidates[c];
          break;
        }
        closure.rollback(mark);
        ++gen.rejected_expansions;
        w[c] = 0.0;
      }
      if (!chosen) continue;

      const std::size_t pick = *chosen;
      weight[pick] *= cfg.gamma;
      used_this_cycle[pick] = true;
      ++gen.rule_uses[pick];
      const BinaryRule& rule = rules[pick];
      fresh_node();
      const Edge left{target.src, rule.body[0], mid};
      const Edge right{mid, rule.body[1], target.dst};
      g.add_edge(left);
      g.add_edge(right);
      cycle_edges.push_back(left);
      cycle_edges.push_back(right);
      gen.trace.push_back({ExpansionStep::Kind::expand, target, pick, mid});
    }
    if (std::all_of(used_this_cycle.begin(), used_this_cycle.end(), [](bool b) { return b; })) {
      ++gen.completed_cycles;
      std::fill(weight.begin(), weight.end(), 1.0);
      std::fill(used_this_cycle.begin(), used_this_cycle.end(), false);
    }
  }
  gen.edge_cap_hit = g.num_edges() >= edge_cap;
  return gen;
}

WorldGeneration generate_world_graph(const RuleSet& world_rules, const GenConfig& cfg, Rng& rng) {
  const std::uint64_t base = rng.next();
  std::size_t last_conflicts = 0;
  for (std::size_t attempt = 0; attempt < cfg.max_regenerations; ++attempt) {
    Rng attempt_rng(sub_seed(base, {attempt}));
    WorldGeneration gen = expand_world_graph(world_rules, cfg, attempt_rng);
    auto conflicts = closure_check(gen.graph, world_rules);
    if (conflicts.empty()) {
      gen.attempts = attempt + 1;
      return gen;
    }
    last_conflicts = conflicts.size();
  }
  throw Error(ErrorKind::degenerate_world,
              "world graph closure still conflicting after " +
                  std::to_string(cfg.max_regenerations) + " attempts (" +
                  std::to_string(last_conflicts) + " conflicting pairs)");
}

std::vector<ClosureDiagnostic> closure_check(const WorldGraph& graph, const RuleSet& rules) {
  ClosureTracker closure(rules);
  closure.add(graph.edges(), /*stop_on_conflict=*/false);
  std::vector<ClosureDiagnostic> diagnostics;
  for (const auto& [key, derived] : closure.labels()) {
    if (derived.size() < 2) continue;
    const auto src = static_cast<NodeId>(key >> 32);
    const auto dst = static_cast<NodeId>(key & 0xffffffffu);
    std::vector<RelationId> sorted = derived;
    std::sort(sorted.begin(), sorted.end());
    diagnostics.push_back({src, dst, graph.label(src, dst), std::move(sorted)});
  }
  std::sort(diagnostics.begin(), diagnostics.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  return diagnostics;
}

}  // namespace rulegraph
