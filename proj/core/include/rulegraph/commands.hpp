#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rulegraph/partitioning.hpp"
#include "rulegraph/suite.hpp"

namespace rulegraph::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kIoOrConfigError = 2,
};

struct GenerateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;  // falls back to the config's output_dir
  std::size_t workers = 1;
  std::optional<WorldId> world;
};

struct SuiteOptions {
  std::filesystem::path suite;
  std::optional<WorldId> world;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> accuracy;  // stats only
  // validate only: a bare dataset instead of a suite directory
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> dataset;
};

SuiteConfig load_config(const std::filesystem::path& path);

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const SuiteOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const SuiteOptions& opts, std::ostream& out, std::ostream& err);
int cmd_stats(const SuiteOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace rulegraph::cli
