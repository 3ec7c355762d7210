#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rulegraph/logic_rules.hpp"
#include "rulegraph/random.hpp"

namespace rulegraph::testing {

// {0<->1, 2<->2, 3<->3}
inline RelationAlphabet alphabet4() { return RelationAlphabet({1, 0, 2, 3}); }

// Arbitrary (not necessarily consistent) rule set over a random alphabet.
inline RuleSet random_rule_set(Rng& rng, std::size_t k, std::size_t max_rules) {
  RelationAlphabet alphabet = generate_alphabet(k, rng);
  std::vector<BinaryRule> rules;
  std::vector<bool> used(k * k, false);
  const std::size_t n = rng.uniform_int(0, max_rules);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<RelationId>(rng.uniform_index(k));
    const auto b = static_cast<RelationId>(rng.uniform_index(k));
    if (used[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)]) continue;
    used[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)] = true;
    rules.push_back({{a, b}, static_cast<RelationId>(rng.uniform_index(k))});
  }
  return RuleSet(std::move(alphabet), std::move(rules));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("rulegraph_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace rulegraph::testing
