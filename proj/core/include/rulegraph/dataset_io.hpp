#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rulegraph/graph_sampler.hpp"
#include "rulegraph/logic_rules.hpp"
#include "rulegraph/partitioning.hpp"
#include "rulegraph/stats.hpp"
#include "rulegraph/suite.hpp"
#include "rulegraph/world_graph.hpp"

namespace rulegraph {

using json = nlohmann::json;

// JSON codecs. Readers throw Error(parse_error) on missing or mistyped
// fields; callers add file and line context.

json to_json(const RuleSet& rules);  // {"K", "inverse", "rules": [{"body", "head"}]}
RuleSet rules_from_json(const json& j);

json to_json(const WorldSpec& world);  // {"world_id", "rule_indices"}
WorldSpec world_spec_from_json(const json& j);

json to_json(const WorldGraph& graph);  // {"nodes", "edges": [[u, r, v], ...]}
WorldGraph world_graph_from_json(const json& j);

/// {"edges", "query": [u, v], "target", "resolution_path", "descriptor", "world_id"}
json to_json(const Instance& instance);
Instance instance_from_json(const json& j, Split split);

json to_json(const SuiteConfig& config);
/// Missing keys take their defaults; unknown keys are rejected.
SuiteConfig suite_config_from_json(const json& j);

// Files.

/// Reads one JSON document; errors carry the file name and the parser's
/// byte offset.
json read_json_file(const std::filesystem::path& path);

/// Reads a JSONL file of instances; errors carry the file name and line.
std::vector<Instance> read_instances(const std::filesystem::path& path, Split split);

/// Writes via a temporary file and rename. Trailing newline included.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string world_dir_name(WorldId world);

/// Layout:
///   manifest.json, config.json, rules.json (permuted master)
///   world_NNN/{rules.json, world_graph.json, train.jsonl, valid.jsonl,
///              test.jsonl, stats.json}
void write_suite(const std::filesystem::path& dir, const Suite& suite);

/// Exact inverse of write_suite. `only` restricts which generated worlds
/// are loaded.
Suite read_suite(const std::filesystem::path& dir,
                 std::optional<WorldId> only = std::nullopt);

/// Per-world statistics file contents.
json stats_to_json(const WorldBundle& world);

}  // namespace rulegraph
