#include "rulegraph/suite.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "rulegraph/error.hpp"

namespace rulegraph {

void SuiteConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::invalid_configuration, what);
  };
  if (num_relations < 2) fail("num_relations must be at least 2");
  if (!(symmetric_fraction >= 0.0 && symmetric_fraction <= 1.0)) {
    fail("symmetric_fraction must lie in [0, 1]");
  }
  if (rules_per_world < 1) fail("rules_per_world must be positive");
  if (stride < 1) fail("stride must be positive");
  generation.validate();
  for (const auto& [id, acc] : curriculum_scores) {
    if (!(acc >= 0.0 && acc <= 1.0)) {
      fail("curriculum score for world " + std::to_string(id) + " must lie in [0, 1]");
    }
  }
}

std::uint64_t stream_seed(std::uint64_t master, SeedStream stream) {
  return sub_seed(master, {static_cast<std::uint64_t>(stream)});
}

std::uint64_t stream_seed(std::uint64_t master, SeedStream stream, WorldId world) {
  return sub_seed(master, {static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(world)});
}

namespace {

std::vector<WorldId> ids_of(const std::vector<WorldSpec>& worlds) {
  std::vector<WorldId> ids;
  for (const auto& w : worlds) ids.push_back(w.world_id);
  return ids;
}

}  // namespace

Suite plan_suite(const SuiteConfig& config) {
  config.validate();
  Suite suite;
  suite.config = config;

  Rng alphabet_rng(stream_seed(config.seed, SeedStream::alphabet));
  auto alphabet = generate_alphabet(config.num_relations, alphabet_rng, config.symmetric_fraction);
  Rng rules_rng(stream_seed(config.seed, SeedStream::rules));
  auto rules = generate_rules(alphabet, rules_rng);

  Rng partition_rng(stream_seed(config.seed, SeedStream::partition));
  auto partition = partition_rules(rules, config.rules_per_world, config.stride, partition_rng);
  suite.master = std::move(partition.master);
  suite.worlds = std::move(partition.worlds);
  suite.similarity = similarity_matrix(suite.worlds);

  // Small suites keep at least one training world.
  const std::size_t n = suite.worlds.size();
  const std::size_t test_worlds = std::min(config.test_worlds, (n - 1) / 2);
  const std::size_t valid_worlds = std::min(config.valid_worlds, (n - 1) / 2);
  std::vector<WorldId> order(n);
  std::iota(order.begin(), order.end(), WorldId{0});
  Rng roles_rng(stream_seed(config.seed, SeedStream::world_roles));
  roles_rng.shuffle(std::span(order));
  suite.world_splits.assign(n, Split::train);
  for (std::size_t i = 0; i < test_worlds; ++i) suite.world_splits[order[i]] = Split::test;
  for (std::size_t i = 0; i < valid_worlds; ++i) {
    suite.world_splits[order[test_worlds + i]] = Split::valid;
  }

  Protocols& p = suite.protocols;
  p.supervised = ids_of(suite.worlds);
  p.continual = p.supervised;
  std::array<std::vector<WorldSpec>, 3> by_role;
  for (const auto& w : suite.worlds) {
    by_role[static_cast<std::size_t>(suite.world_splits[w.world_id])].push_back(w);
  }
  for (std::size_t s = 0; s < 3; ++s) p.multitask[s] = ids_of(by_role[s]);
  const auto& pretrain_pool = by_role[static_cast<std::size_t>(Split::train)];
  const std::size_t k = std::min(config.multitask_k, pretrain_pool.size());
  for (Split role : {Split::valid, Split::test}) {
    for (const auto& held_out : by_role[static_cast<std::size_t>(role)]) {
      PretrainingChoice choice;
      choice.most_similar = ids_of(
          select_worlds_by_similarity(held_out, pretrain_pool, k, SelectionMode::most_similar));
      choice.least_similar = ids_of(
          select_worlds_by_similarity(held_out, pretrain_pool, k, SelectionMode::least_similar));
      choice.mixed =
          ids_of(select_worlds_by_similarity(held_out, pretrain_pool, k, SelectionMode::mixed));
      p.pretraining.emplace(held_out.world_id, std::move(choice));
    }
  }
  if (!config.curriculum_scores.empty()) {
    try {
      p.curriculum = order_curriculum(suite.worlds, config.curriculum_scores);
    } catch (const Error& e) {
      throw Error(ErrorKind::invalid_configuration, std::string("curriculum_scores: ") + e.what());
    }
  }
  return suite;
}

WorldBundle build_world(const Suite& plan, WorldId world) {
  const auto& cfg = plan.config;
  WorldBundle b;
  b.spec = plan.worlds.at(world);
  b.rules = world_rules(plan.master, b.spec);

  Rng graph_rng(stream_seed(cfg.seed, SeedStream::world_graph, world));
  auto gen = generate_world_graph(b.rules, cfg.generation, graph_rng);
  b.graph = std::move(gen.graph);
  b.generation_attempts = gen.attempts;
  b.completed_cycles = gen.completed_cycles;
  b.edge_cap_hit = gen.edge_cap_hit;
  b.rejected_expansions = gen.rejected_expansions;
  b.rule_uses = std::move(gen.rule_uses);

  b.dataset = build_dataset(world, b.graph, b.rules, cfg.generation,
                            stream_seed(cfg.seed, SeedStream::dataset, world));
  b.stats = rounded(compute_stats(b.dataset));
  b.stats.split = plan.world_splits.at(world);
  return b;
}

Suite build_suite(const SuiteConfig& config, std::optional<WorldId> only, std::size_t workers) {
  Suite suite = plan_suite(config);
  std::vector<WorldId> todo;
  if (only) {
    if (*only >= suite.worlds.size()) {
      throw Error(ErrorKind::invalid_configuration,
                  "world " + std::to_string(*only) + " does not exist (" +
                      std::to_string(suite.worlds.size()) + " worlds)");
    }
    todo.push_back(*only);
  } else {
    todo = ids_of(suite.worlds);
  }

  std::vector<WorldBundle> built(todo.size());
  std::vector<std::exception_ptr> failures(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        built[i] = build_world(suite, todo[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(todo.size(), 1));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), "world " + std::to_string(todo[i]) + ": " + e.what());
    }
  }
  suite.generated = std::move(built);
  return suite;
}

}  // namespace rulegraph
