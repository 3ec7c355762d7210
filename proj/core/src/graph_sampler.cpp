#include "rulegraph/graph_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>
#include <unordered_map>

#include "rulegraph/error.hpp"
#include "rulegraph/paths.hpp"
#include "rulegraph/resolver.hpp"

namespace rulegraph {

std::size_t Instance::num_nodes() const {
  std::size_t n = 0;
  for (const Edge& e : edges) n = std::max(n, static_cast<std::size_t>(std::max(e.src, e.dst)) + 1);
  return n;
}

std::size_t WorldDataset::num_instances() const {
  std::size_t n = 0;
  for (const auto& s : splits) n += s.size();
  return n;
}

DescriptorCollection collect_descriptors(const WorldGraph& graph, std::size_t max_len,
                                         std::size_t walk_cap) {
  if (max_len < 2) {
    throw Error(ErrorKind::invalid_input, "resolution paths need at least 2 edges");
  }
  DescriptorCollection out;
  const Digraph g(graph.edges(), graph.num_nodes());
  std::set<Descriptor> seen;
  Descriptor labels;
  for (const Edge& e : graph.edges()) {
    seen.clear();
    std::size_t visited = 0;
    g.for_each_path(e.src, e.dst, 2, max_len, [&](std::span<const std::size_t> path) {
      labels.clear();
      for (std::size_t ei : path) labels.push_back(g.edge(ei).rel);
      if (seen.insert(labels).second) {
        DescriptorOccurrence occ{e, labels, {e.src}};
        for (std::size_t ei : path) occ.walk.push_back(g.edge(ei).dst);
        out.pairs.push_back(std::move(occ));
      }
      return ++visited < walk_cap;
    });
    if (visited >= walk_cap) ++out.truncated_edges;
  }
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& fractions) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * fractions[i];
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (rem[i] > rem[best] + 1e-12) best = i;
    }
    ++sizes[best];
    rem[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {  // only from the epsilon in floor
    std::size_t largest = static_cast<std::size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    --sizes[largest];
    --assigned;
  }
  if (n >= 3) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (sizes[i] > 0) continue;
      std::size_t largest = static_cast<std::size_t>(
          std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      --sizes[largest];
      ++sizes[i];
    }
  }
  return sizes;
}

std::map<Descriptor, Split> split_descriptors(std::span<const DescriptorOccurrence> pairs,
                                              const std::array<double, 3>& fractions, Rng& rng) {
  std::set<Descriptor> distinct;
  for (const auto& p : pairs) distinct.insert(p.descriptor);
  if (distinct.size() < 3) {
    throw Error(ErrorKind::degenerate_world,
                "only " + std::to_string(distinct.size()) +
                    " usable descriptors; cannot populate train, valid and test");
  }
  std::vector<Descriptor> order(distinct.begin(), distinct.end());
  rng.shuffle(std::span(order));
  const auto sizes = split_sizes(order.size(), fractions);
  std::map<Descriptor, Split> assignment;
  std::size_t pos = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < sizes[s]; ++i) assignment.emplace(order[pos++], kSplits[s]);
  }
  return assignment;
}

namespace {

struct Member {
  Edge edge;
  bool noise;
};

// Index (into members) of the latest noise edge among the given instance
// edge indices. Members and the digraph edge list share indices.
std::size_t latest_noise(const std::vector<Member>& members, std::span<const std::size_t> path) {
  std::size_t best = members.size();
  for (std::size_t ei : path) {
    if (members[ei].noise && (best == members.size() || ei > best)) best = ei;
  }
  return best;
}

std::vector<Edge> edges_of(const std::vector<Member>& members) {
  std::vector<Edge> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.edge);
  return out;
}

Instance sample_from(const Digraph& world, const DescriptorOccurrence& pair, const RuleSet& rules,
                     const GenConfig& cfg, Rng& rng) {
  const auto& walk = pair.walk;
  const std::size_t length = pair.descriptor.size();
  const NodeId source = walk.front();
  const NodeId sink = walk.back();

  std::vector<Member> members;
  std::set<std::pair<NodeId, NodeId>> present;
  for (std::size_t i = 0; i < length; ++i) {
    members.push_back({Edge{walk[i], pair.descriptor[i], walk[i + 1]}, false});
    present.emplace(walk[i], walk[i + 1]);
  }

  if (cfg.noise_depth > 0 && cfg.noise_gamma > 0.0) {
    std::vector<bool> visited(world.num_nodes(), false);
    for (NodeId p : walk) visited[static_cast<std::size_t>(p)] = true;
    for (NodeId p : walk) {
      std::deque<std::pair<NodeId, std::size_t>> queue{{p, 0}};
      while (!queue.empty()) {
        auto [x, depth] = queue.front();
        queue.pop_front();
        if (depth >= cfg.noise_depth) continue;
        const double keep = std::pow(cfg.noise_gamma, static_cast<double>(depth + 1));
        auto consider = [&](std::size_t ei) {
          const Edge& e = world.edge(ei);
          if (present.count({e.src, e.dst})) return;
          if (!rng.bernoulli(keep)) return;
          members.push_back({e, true});
          present.emplace(e.src, e.dst);
          const NodeId y = e.src == x ? e.dst : e.src;
          if (!visited[static_cast<std::size_t>(y)]) {
            visited[static_cast<std::size_t>(y)] = true;
            queue.emplace_back(y, depth + 1);
          }
        };
        for (std::size_t ei : world.out_edges(x)) consider(ei);
        for (std::size_t ei : world.in_edges(x)) consider(ei);
      }
    }
  }

  std::erase_if(members, [&](const Member& m) {
    return m.noise && m.edge.src == source && m.edge.dst == sink;
  });

  const RelationId target = pair.edge.rel;
  Descriptor labels;
  for (;;) {
    const auto edges = edges_of(members);
    const Digraph inst(edges);
    if (inst.distance(source, sink) < length) {
      const std::size_t drop = latest_noise(members, inst.shortest_path(source, sink));
      if (drop == members.size()) break;  // left to validation
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(drop));
      continue;
    }
    std::vector<std::size_t> offending;
    inst.for_each_path(source, sink, length, length, [&](std::span<const std::size_t> path) {
      labels.clear();
      for (std::size_t ei : path) labels.push_back(inst.edge(ei).rel);
      for (RelationId r : resolve_descriptor(rules, labels)) {
        if (r != target) {
          offending.assign(path.begin(), path.end());
          return false;
        }
      }
      return true;
    });
    if (offending.empty()) break;
    const std::size_t drop = latest_noise(members, offending);
    if (drop == members.size()) break;
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(drop));
  }

  // Dense local ids in a random order, edges in a random order.
  std::vector<NodeId> nodes;
  std::unordered_map<NodeId, NodeId> local;
  auto note = [&](NodeId n) {
    if (local.emplace(n, static_cast<NodeId>(nodes.size())).second) nodes.push_back(n);
  };
  for (NodeId n : walk) note(n);
  for (const auto& m : members) {
    note(m.edge.src);
    note(m.edge.dst);
  }
  std::vector<NodeId> relabel(nodes.size());
  for (std::size_t i = 0; i < relabel.size(); ++i) relabel[i] = static_cast<NodeId>(i);
  rng.shuffle(std::span(relabel));
  auto map_node = [&](NodeId n) { return relabel[static_cast<std::size_t>(local.at(n))]; };

  Instance inst;
  for (const auto& m : members) {
    inst.edges.push_back({map_node(m.edge.src), m.edge.rel, map_node(m.edge.dst)});
  }
  rng.shuffle(std::span(inst.edges));
  for (NodeId n : walk) inst.resolution_path.push_back(map_node(n));
  inst.source = inst.resolution_path.front();
  inst.sink = inst.resolution_path.back();
  inst.target = target;
  inst.descriptor = pair.descriptor;
  return inst;
}

}  // namespace

Instance sample_instance(const WorldGraph& graph, const DescriptorOccurrence& pair,
                         const RuleSet& rules, const GenConfig& cfg, Rng& rng) {
  const Digraph world(graph.edges(), graph.num_nodes());
  return sample_from(world, pair, rules, cfg, rng);
}

WorldDataset build_dataset(WorldId world_id, const WorldGraph& graph, const RuleSet& rules,
                           const GenConfig& cfg, std::uint64_t seed) {
  WorldDataset ds;
  ds.world_id = world_id;

  auto collection = collect_descriptors(graph, cfg.max_walk_len, cfg.walk_cap);
  ds.counters.candidate_pairs = collection.pairs.size();
  ds.counters.truncated_edges = collection.truncated_edges;

  std::map<Descriptor, RelationSet> resolved;
  std::vector<DescriptorOccurrence> usable;
  for (auto& occ : collection.pairs) {
    auto it = resolved.find(occ.descriptor);
    if (it == resolved.end()) {
      it = resolved.emplace(occ.descriptor, resolve_descriptor(rules, occ.descriptor)).first;
    }
    const RelationSet& set = it->second;
    if (set.size() == 1 && set.front() == occ.edge.rel) {
      usable.push_back(std::move(occ));
    } else {
      ++ds.counters.rejected_pairs;
    }
  }
  ds.counters.collected_descriptors = resolved.size();
  for (const auto& [d, set] : resolved) {
    if (set.size() > 1) ++ds.counters.ambiguous_descriptors;
  }

  Rng split_rng(sub_seed(seed, {3}));
  const auto assignment = split_descriptors(usable, cfg.split_fractions, split_rng);
  ds.counters.descriptor_pool = assignment.size();

  std::array<std::vector<Descriptor>, 3> pool;
  std::map<Descriptor, std::vector<std::size_t>> occurrences;
  for (const auto& [d, s] : assignment) pool[static_cast<std::size_t>(s)].push_back(d);
  for (std::size_t i = 0; i < usable.size(); ++i) occurrences[usable[i].descriptor].push_back(i);

  const Digraph world(graph.edges(), graph.num_nodes());
  for (std::size_t s = 0; s < 3; ++s) {
    if (pool[s].empty()) {
      throw Error(ErrorKind::degenerate_world,
                  std::string("empty descriptor pool for split ") + to_string(kSplits[s]));
    }
    auto& out = ds.splits[s];
    out.reserve(cfg.graphs_per_split[s]);
    for (std::size_t i = 0; i < cfg.graphs_per_split[s]; ++i) {
      Rng rng(sub_seed(seed, {s, i}));
      bool accepted = false;
      for (std::size_t attempt = 0; attempt < cfg.max_instance_attempts; ++attempt) {
        const Descriptor& d = pool[s][rng.uniform_index(pool[s].size())];
        const auto& occ = occurrences.at(d);
        const auto& pair = usable[occ[rng.uniform_index(occ.size())]];
        Instance inst = sample_from(world, pair, rules, cfg, rng);
        inst.split = kSplits[s];
        inst.world_id = world_id;
        if (validate_instance(rules, inst).valid()) {
          out.push_back(std::move(inst));
          accepted = true;
          break;
        }
        ++ds.counters.resampled_instances;
      }
      if (!accepted) {
        throw Error(ErrorKind::degenerate_world,
                    "world " + std::to_string(world_id) + ": no valid instance after " +
                        std::to_string(cfg.max_instance_attempts) + " attempts");
      }
    }
  }
  return ds;
}

}  // namespace rulegraph
