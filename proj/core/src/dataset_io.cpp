#include "rulegraph/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rulegraph/error.hpp"

namespace rulegraph {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::parse_error, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
}

json edge_triples(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.src, e.rel, e.dst});
  return out;
}

std::vector<Edge> edges_from(const json& j) {
  if (!j.is_array()) parse_fail("edges must be an array");
  std::vector<Edge> edges;
  edges.reserve(j.size());
  for (const json& t : j) {
    if (!t.is_array() || t.size() != 3) parse_fail("edge must be a [src, rel, dst] triple");
    try {
      edges.push_back({t[0].get<NodeId>(), t[1].get<RelationId>(), t[2].get<NodeId>()});
    } catch (const json::exception& e) {
      parse_fail(std::string("edge triple: ") + e.what());
    }
  }
  return edges;
}

// Re-throws any error with a file (and optionally line) prefix.
template <typename F>
auto with_context(const fs::path& path, std::size_t line, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    std::string where = path.string();
    if (line > 0) where += ":" + std::to_string(line);
    throw Error(e.kind(), where + ": " + e.what());
  } catch (const std::exception& e) {  // json::exception, std::stoul
    std::string where = path.string();
    if (line > 0) where += ":" + std::to_string(line);
    throw Error(ErrorKind::parse_error, where + ": " + e.what());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ids_json(const std::vector<WorldId>& ids) { return json(ids); }

}  // namespace

json to_json(const RuleSet& rules) {
  json list = json::array();
  for (const BinaryRule& r : rules.rules()) {
    list.push_back({{"body", {r.body[0], r.body[1]}}, {"head", r.head}});
  }
  return {{"K", rules.alphabet().size()},
          {"inverse", rules.alphabet().inverse_map()},
          {"rules", std::move(list)}};
}

RuleSet rules_from_json(const json& j) {
  const auto k = get<std::size_t>(j, "K");
  auto inverse = get<std::vector<RelationId>>(j, "inverse");
  if (inverse.size() != k) parse_fail("'inverse' must list K entries");
  std::vector<BinaryRule> rules;
  const json& list = field(j, "rules");
  if (!list.is_array()) parse_fail("'rules' must be an array");
  for (const json& r : list) {
    auto body = get<std::vector<RelationId>>(r, "body");
    if (body.size() != 2) parse_fail("rule body must have exactly two relations");
    rules.push_back({{body[0], body[1]}, get<RelationId>(r, "head")});
  }
  try {
    return RuleSet(RelationAlphabet(std::move(inverse)), std::move(rules));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

json to_json(const WorldSpec& world) {
  return {{"world_id", world.world_id}, {"rule_indices", world.rule_indices}};
}

WorldSpec world_spec_from_json(const json& j) {
  return {get<WorldId>(j, "world_id"), get<std::vector<std::size_t>>(j, "rule_indices")};
}

json to_json(const WorldGraph& graph) {
  return {{"nodes", graph.num_nodes()}, {"edges", edge_triples(graph.edges())}};
}

WorldGraph world_graph_from_json(const json& j) {
  WorldGraph g;
  const auto nodes = get<std::size_t>(j, "nodes");
  for (const Edge& e : edges_from(field(j, "edges"))) {
    if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(std::max(e.src, e.dst)) >= nodes) {
      parse_fail("edge endpoint outside [0, nodes)");
    }
    if (!g.add_edge(e)) parse_fail("two labels on one ordered node pair");
  }
  g.resize(nodes);
  return g;
}

json to_json(const Instance& inst) {
  return {{"edges", edge_triples(inst.edges)},
          {"query", {inst.source, inst.sink}},
          {"target", inst.target},
          {"resolution_path", inst.resolution_path},
          {"descriptor", inst.descriptor},
          {"world_id", inst.world_id}};
}

Instance instance_from_json(const json& j, Split split) {
  Instance inst;
  inst.edges = edges_from(field(j, "edges"));
  auto query = get<std::vector<NodeId>>(j, "query");
  if (query.size() != 2) parse_fail("'query' must be [source, sink]");
  inst.source = query[0];
  inst.sink = query[1];
  inst.target = get<RelationId>(j, "target");
  inst.resolution_path = get<std::vector<NodeId>>(j, "resolution_path");
  inst.descriptor = get<Descriptor>(j, "descriptor");
  inst.world_id = get<WorldId>(j, "world_id");
  inst.split = split;
  return inst;
}

json to_json(const SuiteConfig& c) {
  const GenConfig& g = c.generation;
  json scores = json::object();
  for (const auto& [id, acc] : c.curriculum_scores) scores[std::to_string(id)] = acc;
  return {
      {"seed", c.seed},
      {"num_relations", c.num_relations},
      {"symmetric_fraction", c.symmetric_fraction},
      {"rules_per_world", c.rules_per_world},
      {"stride", c.stride},
      {"valid_worlds", c.valid_worlds},
      {"test_worlds", c.test_worlds},
      {"multitask_k", c.multitask_k},
      {"curriculum_scores", scores},
      {"generation",
       {{"gamma", g.gamma},
        {"max_expansions", g.max_expansions},
        {"cycles", g.cycles},
        {"node_pool", g.node_pool},
        {"max_walk_len", g.max_walk_len},
        {"graphs_per_split",
         {{"train", g.graphs_per_split[0]},
          {"valid", g.graphs_per_split[1]},
          {"test", g.graphs_per_split[2]}}},
        {"noise_gamma", g.noise_gamma},
        {"noise_depth", g.noise_depth},
        {"split_fractions",
         {{"train", g.split_fractions[0]},
          {"valid", g.split_fractions[1]},
          {"test", g.split_fractions[2]}}},
        {"walk_cap", g.walk_cap},
        {"edge_cap_factor", g.edge_cap_factor},
        {"max_regenerations", g.max_regenerations},
        {"max_instance_attempts", g.max_instance_attempts}}},
  };
}

namespace {

template <typename T>
void read_into(const json& j, const std::string& key, T& target) {
  try {
    target = j.get<T>();
  } catch (const json::exception& e) {
    parse_fail("config field '" + key + "': " + e.what());
  }
}

template <typename T>
void read_triple(const json& j, const std::string& key, std::array<T, 3>& target) {
  if (!j.is_object()) parse_fail("config field '" + key + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Split s = [&] {
      try {
        return split_from_string(it.key());
      } catch (const Error&) {
        parse_fail("config field '" + key + "': unknown split '" + it.key() + "'");
      }
    }();
    read_into(it.value(), key + "." + it.key(), target[static_cast<std::size_t>(s)]);
  }
}

}  // namespace

SuiteConfig suite_config_from_json(const json& j) {
  if (!j.is_object()) parse_fail("config must be a JSON object");
  SuiteConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "seed") read_into(v, key, c.seed);
    else if (key == "num_relations") read_into(v, key, c.num_relations);
    else if (key == "symmetric_fraction") read_into(v, key, c.symmetric_fraction);
    else if (key == "rules_per_world") read_into(v, key, c.rules_per_world);
    else if (key == "stride") read_into(v, key, c.stride);
    else if (key == "valid_worlds") read_into(v, key, c.valid_worlds);
    else if (key == "test_worlds") read_into(v, key, c.test_worlds);
    else if (key == "multitask_k") read_into(v, key, c.multitask_k);
    else if (key == "output_dir") continue;  // consumed by the CLI
    else if (key == "curriculum_scores") {
      if (!v.is_object()) parse_fail("config field 'curriculum_scores' must be an object");
      for (auto s = v.begin(); s != v.end(); ++s) {
        WorldId id = 0;
        try {
          std::size_t used = 0;
          id = std::stoul(s.key(), &used);
          if (used != s.key().size()) throw std::invalid_argument(s.key());
        } catch (const std::exception&) {
          parse_fail("curriculum_scores key '" + s.key() + "' is not a world id");
        }
        read_into(s.value(), "curriculum_scores." + s.key(), c.curriculum_scores[id]);
      }
    } else if (key == "generation") {
      if (!v.is_object()) parse_fail("config field 'generation' must be an object");
      GenConfig& g = c.generation;
      for (auto gi = v.begin(); gi != v.end(); ++gi) {
        const std::string name = "generation." + gi.key();
        const json& gv = gi.value();
        if (gi.key() == "gamma") read_into(gv, name, g.gamma);
        else if (gi.key() == "max_expansions") read_into(gv, name, g.max_expansions);
        else if (gi.key() == "cycles") read_into(gv, name, g.cycles);
        else if (gi.key() == "node_pool") read_into(gv, name, g.node_pool);
        else if (gi.key() == "max_walk_len") read_into(gv, name, g.max_walk_len);
        else if (gi.key() == "graphs_per_split") read_triple(gv, name, g.graphs_per_split);
        else if (gi.key() == "noise_gamma") read_into(gv, name, g.noise_gamma);
        else if (gi.key() == "noise_depth") read_into(gv, name, g.noise_depth);
        else if (gi.key() == "split_fractions") read_triple(gv, name, g.split_fractions);
        else if (gi.key() == "walk_cap") read_into(gv, name, g.walk_cap);
        else if (gi.key() == "edge_cap_factor") read_into(gv, name, g.edge_cap_factor);
        else if (gi.key() == "max_regenerations") read_into(gv, name, g.max_regenerations);
        else if (gi.key() == "max_instance_attempts") read_into(gv, name, g.max_instance_attempts);
        else parse_fail("unknown config field '" + name + "'");
      }
    } else {
      parse_fail("unknown config field '" + key + "'");
    }
  }
  return c;
}

json read_json_file(const fs::path& path) {
  const std::string text = read_text(path);
  return with_context(path, 0, [&] { return json::parse(text); });
}

std::vector<Instance> read_instances(const fs::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  std::vector<Instance> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    out.push_back(with_context(path, number, [&] {
      return instance_from_json(json::parse(line), split);
    }));
  }
  return out;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + tmp.string());
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out.flush()) throw Error(ErrorKind::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string world_dir_name(WorldId world) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "world_%03zu", world);
  return buf;
}

json stats_to_json(const WorldBundle& w) {
  const auto& s = w.stats;
  const auto& c = w.dataset.counters;
  return {
      {"world_id", s.world_id},
      {"split", to_string(s.split)},
      {"instances",
       {{"train", w.dataset.split(Split::train).size()},
        {"valid", w.dataset.split(Split::valid).size()},
        {"test", w.dataset.split(Split::test).size()}}},
      {"NC", s.num_classes},
      {"ND", s.num_descriptors},
      {"ARL", round6(s.avg_resolution_length)},
      {"AN", round6(s.avg_nodes)},
      {"AE", round6(s.avg_edges)},
      {"descriptors",
       {{"candidate_pairs", c.candidate_pairs},
        {"collected", c.collected_descriptors},
        {"pool", c.descriptor_pool},
        {"ambiguous", c.ambiguous_descriptors},
        {"rejected_pairs", c.rejected_pairs},
        {"truncated_edges", c.truncated_edges}}},
      {"resampled_instances", c.resampled_instances},
      {"generation",
       {{"attempts", w.generation_attempts},
        {"completed_cycles", w.completed_cycles},
        {"edge_cap_hit", w.edge_cap_hit},
        {"rejected_expansions", w.rejected_expansions},
        {"rule_uses", w.rule_uses},
        {"nodes", w.graph.num_nodes()},
        {"edges", w.graph.num_edges()}}},
  };
}

namespace {

void stats_from_json(const json& j, WorldBundle& w) {
  auto& s = w.stats;
  auto& c = w.dataset.counters;
  s.world_id = get<WorldId>(j, "world_id");
  s.split = split_from_string(get<std::string>(j, "split"));
  s.num_classes = get<std::size_t>(j, "NC");
  s.num_descriptors = get<std::size_t>(j, "ND");
  s.avg_resolution_length = get<double>(j, "ARL");
  s.avg_nodes = get<double>(j, "AN");
  s.avg_edges = get<double>(j, "AE");
  const json& counts = field(j, "instances");
  s.num_instances = get<std::size_t>(counts, "train") + get<std::size_t>(counts, "valid") +
                    get<std::size_t>(counts, "test");
  const json& d = field(j, "descriptors");
  c.candidate_pairs = get<std::size_t>(d, "candidate_pairs");
  c.collected_descriptors = get<std::size_t>(d, "collected");
  c.descriptor_pool = get<std::size_t>(d, "pool");
  c.ambiguous_descriptors = get<std::size_t>(d, "ambiguous");
  c.rejected_pairs = get<std::size_t>(d, "rejected_pairs");
  c.truncated_edges = get<std::size_t>(d, "truncated_edges");
  c.resampled_instances = get<std::size_t>(j, "resampled_instances");
  const json& g = field(j, "generation");
  w.generation_attempts = get<std::size_t>(g, "attempts");
  w.completed_cycles = get<std::size_t>(g, "completed_cycles");
  w.edge_cap_hit = get<bool>(g, "edge_cap_hit");
  w.rejected_expansions = get<std::size_t>(g, "rejected_expansions");
  w.rule_uses = get<std::vector<std::size_t>>(g, "rule_uses");
}

json manifest_json(const Suite& suite) {
  json worlds = json::array();
  for (const auto& w : suite.worlds) {
    json entry = to_json(w);
    entry["split"] = to_string(suite.world_splits.at(w.world_id));
    worlds.push_back(std::move(entry));
  }
  const auto& p = suite.protocols;
  json pretraining = json::object();
  for (const auto& [id, choice] : p.pretraining) {
    pretraining[std::to_string(id)] = {{"most_similar", ids_json(choice.most_similar)},
                                       {"least_similar", ids_json(choice.least_similar)},
                                       {"mixed", ids_json(choice.mixed)}};
  }
  json generated = json::array();
  std::size_t instances = 0, collected = 0, ambiguous = 0, pool = 0;
  for (const auto& w : suite.generated) {
    generated.push_back(w.spec.world_id);
    instances += w.dataset.num_instances();
    collected += w.dataset.counters.collected_descriptors;
    ambiguous += w.dataset.counters.ambiguous_descriptors;
    pool += w.dataset.counters.descriptor_pool;
  }
  const double n = suite.generated.empty() ? 1.0 : static_cast<double>(suite.generated.size());
  return {
      {"format", "rulegraph-suite/1"},
      {"seed", suite.config.seed},
      {"config", to_json(suite.config)},
      {"num_rules", suite.master.size()},
      {"worlds", std::move(worlds)},
      {"similarity", suite.similarity},
      {"protocols",
       {{"supervised", ids_json(p.supervised)},
        {"multitask",
         {{"train", ids_json(p.multitask[0])},
          {"valid", ids_json(p.multitask[1])},
          {"test", ids_json(p.multitask[2])},
          {"pretraining", std::move(pretraining)}}},
        {"continual", {{"sequence", ids_json(p.continual)}, {"curriculum", ids_json(p.curriculum)}}}}},
      {"generated_worlds", std::move(generated)},
      {"summary",
       {{"instances", instances},
        {"collected_descriptors", collected},
        {"ambiguous_descriptors", ambiguous},
        {"ambiguity_rate",
         round6(collected == 0 ? 0.0 : static_cast<double>(ambiguous) / static_cast<double>(collected))},
        {"mean_descriptor_pool", round6(static_cast<double>(pool) / n)}}},
  };
}

}  // namespace

void write_suite(const fs::path& dir, const Suite& suite) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create " + dir.string() + ": " + ec.message());

  for (const auto& w : suite.generated) {
    const fs::path wd = dir / world_dir_name(w.spec.world_id);
    fs::create_directories(wd, ec);
    if (ec) throw Error(ErrorKind::io_error, "cannot create " + wd.string() + ": " + ec.message());
    write_text_atomic(wd / "rules.json", to_json(w.rules).dump(2));
    write_text_atomic(wd / "world_graph.json", to_json(w.graph).dump(2));
    for (Split s : kSplits) {
      std::string text;
      for (const Instance& inst : w.dataset.split(s)) {
        text += to_json(inst).dump();
        text += '\n';
      }
      write_text_atomic(wd / (std::string(to_string(s)) + ".jsonl"), text);
    }
    write_text_atomic(wd / "stats.json", stats_to_json(w).dump(2));
  }
  write_text_atomic(dir / "rules.json", to_json(suite.master).dump(2));
  write_text_atomic(dir / "config.json", to_json(suite.config).dump(2));
  write_text_atomic(dir / "manifest.json", manifest_json(suite).dump(2));
}

Suite read_suite(const fs::path& dir, std::optional<WorldId> only) {
  const fs::path manifest_path = dir / "manifest.json";
  const json manifest = read_json_file(manifest_path);
  Suite suite;
  std::vector<WorldId> generated;
  with_context(manifest_path, 0, [&] {
    suite.config = suite_config_from_json(field(manifest, "config"));
    for (const json& w : field(manifest, "worlds")) {
      suite.worlds.push_back(world_spec_from_json(w));
      suite.world_splits.push_back(split_from_string(get<std::string>(w, "split")));
    }
    suite.similarity = get<SimilarityMatrix>(manifest, "similarity");
    const json& p = field(manifest, "protocols");
    auto& protocols = suite.protocols;
    protocols.supervised = get<std::vector<WorldId>>(p, "supervised");
    const json& mt = field(p, "multitask");
    protocols.multitask[0] = get<std::vector<WorldId>>(mt, "train");
    protocols.multitask[1] = get<std::vector<WorldId>>(mt, "valid");
    protocols.multitask[2] = get<std::vector<WorldId>>(mt, "test");
    const json& pre = field(mt, "pretraining");
    for (auto it = pre.begin(); it != pre.end(); ++it) {
      PretrainingChoice c;
      c.most_similar = get<std::vector<WorldId>>(it.value(), "most_similar");
      c.least_similar = get<std::vector<WorldId>>(it.value(), "least_similar");
      c.mixed = get<std::vector<WorldId>>(it.value(), "mixed");
      protocols.pretraining.emplace(std::stoul(it.key()), std::move(c));
    }
    const json& cont = field(p, "continual");
    protocols.continual = get<std::vector<WorldId>>(cont, "sequence");
    protocols.curriculum = get<std::vector<WorldId>>(cont, "curriculum");
    generated = get<std::vector<WorldId>>(manifest, "generated_worlds");
    return 0;
  });

  const fs::path master_path = dir / "rules.json";
  const json master = read_json_file(master_path);
  suite.master = with_context(master_path, 0, [&] { return rules_from_json(master); });

  for (WorldId id : generated) {
    if (only && *only != id) continue;
    if (id >= suite.worlds.size()) {
      throw Error(ErrorKind::parse_error, manifest_path.string() + ": generated world " +
                                              std::to_string(id) + " is not listed");
    }
    const fs::path wd = dir / world_dir_name(id);
    WorldBundle w;
    w.spec = suite.worlds[id];
    const fs::path rules_path = wd / "rules.json";
    const json rules = read_json_file(rules_path);
    w.rules = with_context(rules_path, 0, [&] { return rules_from_json(rules); });
    const fs::path graph_path = wd / "world_graph.json";
    const json graph = read_json_file(graph_path);
    w.graph = with_context(graph_path, 0, [&] { return world_graph_from_json(graph); });
    w.dataset.world_id = id;
    for (Split s : kSplits) {
      w.dataset.splits[static_cast<std::size_t>(s)] =
          read_instances(wd / (std::string(to_string(s)) + ".jsonl"), s);
    }
    const fs::path stats_path = wd / "stats.json";
    const json stats = read_json_file(stats_path);
    with_context(stats_path, 0, [&] {
      stats_from_json(stats, w);
      return 0;
    });
    suite.generated.push_back(std::move(w));
  }
  return suite;
}

}  // namespace rulegraph
