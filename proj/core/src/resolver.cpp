#include "rulegraph/resolver.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "rulegraph/error.hpp"
#include "rulegraph/graph_sampler.hpp"
#include "rulegraph/paths.hpp"

namespace rulegraph {

ResolutionChart::ResolutionChart(const RuleSet& rules, std::span<const RelationId> descriptor)
    : length_(descriptor.size()), cells_((length_ + 1) * (length_ + 1)) {
  const std::size_t k = rules.alphabet().size();
  std::vector<char> seen(k, 0);
  for (std::size_t i = 0; i < length_; ++i) cells_[cell(i, i + 1)] = {descriptor[i]};
  for (std::size_t width = 2; width <= length_; ++width) {
    for (std::size_t begin = 0; begin + width <= length_; ++begin) {
      const std::size_t end = begin + width;
      RelationSet& target = cells_[cell(begin, end)];
      for (std::size_t mid = begin + 1; mid < end; ++mid) {
        for (RelationId a : cells_[cell(begin, mid)]) {
          for (RelationId b : cells_[cell(mid, end)]) {
            auto h = rules.compose(a, b);
            if (!h || seen[static_cast<std::size_t>(*h)]) continue;
            seen[static_cast<std::size_t>(*h)] = 1;
            target.push_back(*h);
          }
        }
      }
      for (RelationId r : target) seen[static_cast<std::size_t>(r)] = 0;
      std::sort(target.begin(), target.end());
    }
  }
}

const RelationSet& ResolutionChart::span(std::size_t begin, std::size_t end) const {
  if (!(begin < end && end <= length_)) {
    throw Error(ErrorKind::invalid_input, "chart span out of range");
  }
  return cells_[cell(begin, end)];
}

RelationSet resolve_descriptor(const RuleSet& rules, std::span<const RelationId> descriptor) {
  if (descriptor.empty()) return {};
  return ResolutionChart(rules, descriptor).full();
}

namespace {

// Result of every bracketing tree over [begin, end), one entry per tree;
// nullopt where some inner node fails to compose.
std::vector<std::optional<RelationId>> all_trees(const RuleSet& rules,
                                                 std::span<const RelationId> d, std::size_t begin,
                                                 std::size_t end) {
  if (end - begin == 1) return {d[begin]};
  std::vector<std::optional<RelationId>> results;
  for (std::size_t mid = begin + 1; mid < end; ++mid) {
    auto left = all_trees(rules, d, begin, mid);
    auto right = all_trees(rules, d, mid, end);
    for (const auto& a : left) {
      for (const auto& b : right) {
        if (a && b) {
          results.push_back(rules.compose(*a, *b));
        } else {
          results.push_back(std::nullopt);
        }
      }
    }
  }
  return results;
}

}  // namespace

RelationSet brute_force_resolve(const RuleSet& rules, std::span<const RelationId> descriptor) {
  if (descriptor.size() > kBruteForceMaxLength) {
    throw Error(ErrorKind::invalid_input,
                "brute-force resolution refused for " + std::to_string(descriptor.size()) +
                    " labels");
  }
  if (descriptor.empty()) return {};
  RelationSet out;
  for (const auto& r : all_trees(rules, descriptor, 0, descriptor.size())) {
    if (r) out.push_back(*r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidationReport validate_instance(const RuleSet& rules, const Instance& instance) {
  ValidationReport report;
  const auto& d = instance.descriptor;
  report.resolved = resolve_descriptor(rules, d);
  report.target_hit = std::binary_search(report.resolved.begin(), report.resolved.end(),
                                         instance.target);
  report.ambiguous = report.resolved.size() > 1;

  const Digraph graph(instance.edges);
  const auto& path = instance.resolution_path;
  report.descriptor_matches = !path.empty() && path.front() == instance.source &&
                              path.back() == instance.sink && path.size() == d.size() + 1;
  if (report.descriptor_matches) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      bool found = false;
      for (const Edge& e : instance.edges) {
        if (e.src == path[i] && e.dst == path[i + 1] && e.rel == d[i]) {
          found = true;
          break;
        }
      }
      if (!found) {
        report.descriptor_matches = false;
        break;
      }
    }
  }

  report.shortcut_free = graph.distance(instance.source, instance.sink) == d.size();

  report.path_consistent = true;
  std::vector<RelationId> labels;
  graph.for_each_path(instance.source, instance.sink, d.size(), d.size(),
                      [&](std::span<const std::size_t> edges) {
                        labels.clear();
                        for (std::size_t ei : edges) labels.push_back(graph.edge(ei).rel);
                        for (RelationId r : resolve_descriptor(rules, labels)) {
                          if (r != instance.target) {
                            report.path_consistent = false;
                            return false;
                          }
                        }
                        return true;
                      });
  return report;
}

std::optional<RelationId> symbolic_predict(const RuleSet& rules, const Instance& instance,
                                           std::size_t max_len) {
  const Digraph graph(instance.edges);
  const std::size_t shortest = graph.distance(instance.source, instance.sink);
  if (shortest == kUnreachable) return std::nullopt;
  std::vector<RelationId> labels;
  for (std::size_t len = shortest; len <= max_len; ++len) {
    std::optional<RelationId> best;
    graph.for_each_path(instance.source, instance.sink, len, len,
                        [&](std::span<const std::size_t> edges) {
                          labels.clear();
                          for (std::size_t ei : edges) labels.push_back(graph.edge(ei).rel);
                          for (RelationId r : resolve_descriptor(rules, labels)) {
                            if (!best || r < *best) best = r;
                          }
                          return true;
                        });
    if (best) return best;
  }
  return std::nullopt;
}

std::optional<double> symbolic_baseline_solve(const RuleSet& rules, const WorldDataset& dataset,
                                              std::size_t max_len) {
  std::size_t total = 0, correct = 0;
  for (const auto& split : dataset.splits) {
    for (const Instance& inst : split) {
      ++total;
      if (symbolic_predict(rules, inst, max_len) == inst.target) ++correct;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace rulegraph
