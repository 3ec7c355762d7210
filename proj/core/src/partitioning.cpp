#include "rulegraph/partitioning.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rulegraph/error.hpp"

namespace rulegraph {

std::vector<WorldSpec> sliding_windows(std::size_t num_rules, std::size_t rules_per_world,
                                       std::size_t stride) {
  if (rules_per_world == 0 || stride == 0) {
    throw Error(ErrorKind::invalid_configuration, "rules per world and stride must be positive");
  }
  if (rules_per_world > num_rules) {
    throw Error(ErrorKind::invalid_configuration,
                "rules per world (" + std::to_string(rules_per_world) + ") exceeds rule count (" +
                    std::to_string(num_rules) + ")");
  }
  std::vector<WorldSpec> worlds;
  for (std::size_t i = 0; i <= num_rules - rules_per_world; i += stride) {
    WorldSpec spec;
    spec.world_id = worlds.size();
    spec.rule_indices.resize(rules_per_world);
    std::iota(spec.rule_indices.begin(), spec.rule_indices.end(), i);
    worlds.push_back(std::move(spec));
  }
  return worlds;
}

Partition partition_rules(const RuleSet& rules, std::size_t rules_per_world, std::size_t stride,
                          Rng& rng) {
  auto worlds = sliding_windows(rules.size(), rules_per_world, stride);
  std::vector<std::size_t> order(rules.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));
  return Partition{rules.subset(order), std::move(worlds)};
}

RuleSet world_rules(const RuleSet& master, const WorldSpec& world) {
  for (std::size_t i : world.rule_indices) {
    if (i >= master.size()) {
      throw Error(ErrorKind::invalid_input, "world " + std::to_string(world.world_id) +
                                                " references rule " + std::to_string(i) +
                                                " beyond the master list");
    }
  }
  return master.subset(world.rule_indices);
}

std::size_t similarity(const WorldSpec& a, const WorldSpec& b) {
  std::vector<std::size_t> x = a.rule_indices, y = b.rule_indices;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t n = 0;
  for (auto i = x.begin(), j = y.begin(); i != x.end() && j != y.end();) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

SimilarityMatrix similarity_matrix(std::span<const WorldSpec> worlds) {
  SimilarityMatrix m(worlds.size(), std::vector<std::size_t>(worlds.size(), 0));
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    for (std::size_t j = i; j < worlds.size(); ++j) {
      m[i][j] = m[j][i] = similarity(worlds[i], worlds[j]);
    }
  }
  return m;
}

std::vector<WorldSpec> select_worlds_by_similarity(const WorldSpec& target,
                                                   std::span<const WorldSpec> pool, std::size_t k,
                                                   SelectionMode mode) {
  if (k > pool.size()) {
    throw Error(ErrorKind::invalid_input, "cannot select " + std::to_string(k) + " worlds from " +
                                              std::to_string(pool.size()));
  }
  struct Ranked {
    std::size_t sim;
    std::size_t pos;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < pool.size(); ++i) ranked.push_back({similarity(target, pool[i]), i});

  auto by_id = [&](const Ranked& a, const Ranked& b) {
    return pool[a.pos].world_id < pool[b.pos].world_id;
  };
  auto most = ranked, least = ranked;
  std::stable_sort(most.begin(), most.end(), [&](const Ranked& a, const Ranked& b) {
    return a.sim != b.sim ? a.sim > b.sim : by_id(a, b);
  });
  std::stable_sort(least.begin(), least.end(), [&](const Ranked& a, const Ranked& b) {
    return a.sim != b.sim ? a.sim < b.sim : by_id(a, b);
  });

  std::vector<WorldSpec> out;
  switch (mode) {
    case SelectionMode::most_similar:
      for (std::size_t i = 0; i < k; ++i) out.push_back(pool[most[i].pos]);
      break;
    case SelectionMode::least_similar:
      for (std::size_t i = 0; i < k; ++i) out.push_back(pool[least[i].pos]);
      break;
    case SelectionMode::mixed: {
      std::vector<bool> taken(pool.size(), false);
      std::size_t hi = 0, lo = 0;
      bool from_top = true;
      while (out.size() < k) {
        auto& list = from_top ? most : least;
        auto& cursor = from_top ? hi : lo;
        while (taken[list[cursor].pos]) ++cursor;
        taken[list[cursor].pos] = true;
        out.push_back(pool[list[cursor].pos]);
        from_top = !from_top;
      }
      break;
    }
  }
  return out;
}

std::vector<WorldId> order_curriculum(std::span<const WorldSpec> worlds,
                                      const std::map<WorldId, double>& scores) {
  struct Scored {
    WorldId id;
    double accuracy;
  };
  std::vector<Scored> scored;
  for (const auto& w : worlds) {
    auto it = scores.find(w.world_id);
    if (it == scores.end()) {
      throw Error(ErrorKind::invalid_input,
                  "no accuracy score for world " + std::to_string(w.world_id));
    }
    scored.push_back({w.world_id, it->second});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return a.accuracy != b.accuracy ? a.accuracy > b.accuracy : a.id < b.id;
  });
  std::vector<WorldId> out;
  for (const auto& s : scored) out.push_back(s.id);
  return out;
}

}  // namespace rulegraph
