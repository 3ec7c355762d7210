#include "rulegraph/commands.hpp"

#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "rulegraph/dataset_io.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/resolver.hpp"

namespace rulegraph::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Tally {
  std::size_t instances = 0, valid = 0, ambiguous = 0, shortcut = 0, target_miss = 0,
              descriptor_mismatch = 0, inconsistent = 0;

  void add(const ValidationReport& r) {
    ++instances;
    if (r.valid()) ++valid;
    if (r.ambiguous) ++ambiguous;
    if (!r.shortcut_free) ++shortcut;
    if (!r.target_hit) ++target_miss;
    if (!r.descriptor_matches) ++descriptor_mismatch;
    if (!r.path_consistent) ++inconsistent;
  }

  void merge(const Tally& o) {
    instances += o.instances;
    valid += o.valid;
    ambiguous += o.ambiguous;
    shortcut += o.shortcut;
    target_miss += o.target_miss;
    descriptor_mismatch += o.descriptor_mismatch;
    inconsistent += o.inconsistent;
  }

  json to_json() const {
    return {{"instances", instances},
            {"valid", valid},
            {"ambiguous", ambiguous},
            {"shortcut_violations", shortcut},
            {"target_misses", target_miss},
            {"descriptor_mismatches", descriptor_mismatch},
            {"path_inconsistent", inconsistent}};
  }
};

std::map<WorldId, double> load_accuracy(const fs::path& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) {
    throw Error(ErrorKind::parse_error, path.string() + ": expected an object of world -> accuracy");
  }
  std::map<WorldId, double> scores;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    if (key.rfind("rule_", 0) == 0) key = key.substr(5);
    try {
      std::size_t used = 0;
      const WorldId id = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
      scores[id] = it.value().get<double>();
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse_error,
                  path.string() + ": bad accuracy entry '" + it.key() + "'");
    }
  }
  return scores;
}

}  // namespace

SuiteConfig load_config(const fs::path& path) {
  const json j = read_json_file(path);
  try {
    return suite_config_from_json(j);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const json raw = read_json_file(opts.config);
    SuiteConfig config = load_config(opts.config);
    if (opts.seed) config.seed = *opts.seed;
    fs::path dir;
    if (opts.out) {
      dir = *opts.out;
    } else if (raw.is_object() && raw.contains("output_dir") && raw["output_dir"].is_string()) {
      dir = raw["output_dir"].get<std::string>();
    } else {
      throw Error(ErrorKind::invalid_configuration, "no output directory (use --out)");
    }

    const Suite suite = build_suite(config, opts.world, opts.workers);
    write_suite(dir, suite);

    std::size_t instances = 0, collected = 0, ambiguous = 0;
    for (const auto& w : suite.generated) {
      instances += w.dataset.num_instances();
      collected += w.dataset.counters.collected_descriptors;
      ambiguous += w.dataset.counters.ambiguous_descriptors;
    }
    out << "suite      " << dir.string() << '\n'
        << "seed       " << config.seed << '\n'
        << "rules      " << suite.master.size() << '\n'
        << "worlds     " << suite.worlds.size() << " (" << suite.generated.size()
        << " generated)\n"
        << "instances  " << instances << '\n'
        << "ambiguity  "
        << fixed(collected ? static_cast<double>(ambiguous) / static_cast<double>(collected) : 0.0, 4)
        << " (" << ambiguous << " of " << collected << " descriptors)\n";
    out << "world  split  nodes  edges  pool  instances  ambiguous\n";
    for (const auto& w : suite.generated) {
      char row[160];
      std::snprintf(row, sizeof row, "%5zu  %-5s  %5zu  %5zu  %4zu  %9zu  %9zu\n", w.spec.world_id,
                    to_string(w.stats.split), w.graph.num_nodes(), w.graph.num_edges(),
                    w.dataset.counters.descriptor_pool, w.dataset.num_instances(),
                    w.dataset.counters.ambiguous_descriptors);
      out << row;
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::degenerate_world ? kValidationFailure : kIoOrConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrConfigError;
  }
}

int cmd_validate(const SuiteOptions& opts, std::ostream& out, std::ostream& err) {
  json report;
  Tally total;
  try {
    if (opts.rules || opts.dataset) {
      if (!opts.rules || !opts.dataset) {
        throw Error(ErrorKind::invalid_configuration, "--rules and --dataset go together");
      }
      const json rules_json = read_json_file(*opts.rules);
      RuleSet rules;
      try {
        rules = rules_from_json(rules_json);
      } catch (const Error& e) {
        throw Error(e.kind(), opts.rules->string() + ": " + e.what());
      }
      for (const Instance& inst : read_instances(*opts.dataset, Split::train)) {
        total.add(validate_instance(rules, inst));
      }
    } else {
      const Suite suite = read_suite(opts.suite, opts.world);
      json worlds = json::array();
      for (const auto& w : suite.generated) {
        Tally t;
        for (const auto& split : w.dataset.splits) {
          for (const Instance& inst : split) t.add(validate_instance(w.rules, inst));
        }
        json row = t.to_json();
        row["world_id"] = w.spec.world_id;
        worlds.push_back(std::move(row));
        total.merge(t);
      }
      report["worlds"] = std::move(worlds);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kIoOrConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrConfigError;
  }
  json summary = total.to_json();
  for (auto it = summary.begin(); it != summary.end(); ++it) report[it.key()] = it.value();
  out << report.dump(2) << '\n';
  if (total.valid != total.instances) {
    err << "validation failed: " << (total.instances - total.valid) << " of " << total.instances
        << " instances invalid\n";
    return kValidationFailure;
  }
  return kSuccess;
}

int cmd_solve(const SuiteOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Suite suite = read_suite(opts.suite, opts.world);
    const std::size_t max_len = suite.config.generation.max_walk_len;
    std::size_t total = 0, correct = 0;
    out << "world  instances  accuracy\n";
    for (const auto& w : suite.generated) {
      std::size_t n = 0, ok = 0;
      for (const auto& split : w.dataset.splits) {
        for (const Instance& inst : split) {
          ++n;
          if (symbolic_predict(w.rules, inst, max_len) == inst.target) ++ok;
        }
      }
      char row[96];
      std::snprintf(row, sizeof row, "%5zu  %9zu  %s\n", w.spec.world_id, n,
                    n ? fixed(static_cast<double>(ok) / static_cast<double>(n), 3).c_str() : "n/a");
      out << row;
      total += n;
      correct += ok;
    }
    char row[96];
    std::snprintf(row, sizeof row, "AGG    %9zu  %s\n", total,
                  total ? fixed(static_cast<double>(correct) / static_cast<double>(total), 3).c_str()
                        : "n/a");
    out << row;
    return kSuccess;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kIoOrConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrConfigError;
  }
}

int cmd_stats(const SuiteOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Suite suite = read_suite(opts.suite, opts.world);
    std::map<WorldId, double> accuracy;
    if (opts.accuracy) accuracy = load_accuracy(*opts.accuracy);

    out << "world  NC    ND  split  ARL     AN      AE";
    if (!accuracy.empty()) out << "      D       acc";
    out << '\n';
    std::vector<WorldStats> rows;
    std::set<Descriptor> distinct;
    std::size_t pooled = 0;
    for (const auto& w : suite.generated) {
      const WorldStats& s = w.stats;
      rows.push_back(s);
      pooled += s.num_descriptors;
      for (const auto& split : w.dataset.splits) {
        for (const auto& inst : split) distinct.insert(inst.descriptor);
      }
      char row[160];
      std::snprintf(row, sizeof row, "%5zu  %2zu  %4zu  %-5s  %-6s  %-6s  %-6s", s.world_id,
                    s.num_classes, s.num_descriptors, to_string(s.split),
                    fixed(s.avg_resolution_length, 2).c_str(), fixed(s.avg_nodes, 3).c_str(),
                    fixed(s.avg_edges, 3).c_str());
      out << row;
      if (auto it = accuracy.find(s.world_id); it != accuracy.end()) {
        std::snprintf(row, sizeof row, "  %-6s  %s", to_string(difficulty_bucket(it->second)),
                      fixed(it->second, 3).c_str());
        out << row;
      }
      out << '\n';
    }
    const AggregateStats agg = aggregate(rows);
    char row[160];
    std::snprintf(row, sizeof row, "AGG    %s  %s         %s  %s  %s\n",
                  fixed(agg.num_classes, 2).c_str(), fixed(agg.num_descriptors, 2).c_str(),
                  fixed(agg.avg_resolution_length, 2).c_str(), fixed(agg.avg_nodes, 2).c_str(),
                  fixed(agg.avg_edges, 2).c_str());
    out << row;
    out << "pooled ND " << pooled << " (" << distinct.size() << " distinct across worlds)\n";
    return kSuccess;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kIoOrConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrConfigError;
  }
}

}  // namespace rulegraph::cli
