#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rulegraph/commands.hpp"

namespace cli = rulegraph::cli;

int main(int argc, char** argv) {
  CLI::App app{"Synthetic rule-world graph benchmark generator"};
  app.require_subcommand(1);

  cli::GenerateOptions gen;
  std::uint64_t seed = 0;
  std::size_t world = 0;
  std::string config, out;
  auto* generate = app.add_subcommand("generate", "generate a suite of worlds from a config file");
  generate->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  auto* seed_opt = generate->add_option("--seed", seed, "override the config seed");
  auto* out_opt = generate->add_option("--out", out, "output directory (default: config output_dir)");
  generate->add_option("--workers", gen.workers, "worlds generated in parallel")
      ->check(CLI::PositiveNumber);
  auto* gen_world = generate->add_option("--world-id", world, "generate a single world");

  cli::SuiteOptions suite_opts;
  std::string suite_dir, rules, dataset, accuracy;
  auto add_suite = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("suite", suite_dir, "suite directory written by generate");
    if (required) opt->required();
    opt->check(CLI::ExistingDirectory);
    return sub->add_option("--world-id", world, "restrict to one world");
  };
  auto* validate = app.add_subcommand("validate", "check every instance against its rule set");
  auto* val_world = add_suite(validate, false);
  auto* rules_opt = validate->add_option("--rules", rules, "rules.json of a single world")
                        ->check(CLI::ExistingFile);
  auto* dataset_opt = validate->add_option("--dataset", dataset, "JSONL dataset to check")
                          ->check(CLI::ExistingFile);
  rules_opt->needs(dataset_opt);
  dataset_opt->needs(rules_opt);

  auto* solve = app.add_subcommand("solve", "run the symbolic resolver baseline");
  auto* solve_world = add_suite(solve, true);

  auto* stats = app.add_subcommand("stats", "per-world dataset statistics");
  auto* stats_world = add_suite(stats, true);
  auto* acc_opt = stats->add_option("--accuracy", accuracy, "JSON map of world id to accuracy")
                      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (*generate) {
    gen.config = config;
    if (*seed_opt) gen.seed = seed;
    if (*out_opt) gen.out = out;
    if (*gen_world) gen.world = world;
    return cli::cmd_generate(gen, std::cout, std::cerr);
  }

  suite_opts.suite = suite_dir;
  if (*validate) {
    if (*val_world) suite_opts.world = world;
    if (*rules_opt) {
      suite_opts.rules = rules;
      suite_opts.dataset = dataset;
    } else if (suite_dir.empty()) {
      std::cerr << "validate: give a suite directory or --rules with --dataset\n";
      return cli::kIoOrConfigError;
    }
    return cli::cmd_validate(suite_opts, std::cout, std::cerr);
  }
  if (*solve) {
    if (*solve_world) suite_opts.world = world;
    return cli::cmd_solve(suite_opts, std::cout, std::cerr);
  }
  if (*stats_world) suite_opts.world = world;
  if (*acc_opt) suite_opts.accuracy = accuracy;
  return cli::cmd_stats(suite_opts, std::cout, std::cerr);
}
