#include "rulegraph/logic_rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "rulegraph/error.hpp"

namespace rulegraph {

RelationAlphabet::RelationAlphabet(std::vector<RelationId> inverse) : inverse_(std::move(inverse)) {
  const auto k = static_cast<RelationId>(inverse_.size());
  for (RelationId r = 0; r < k; ++r) {
    RelationId inv = inverse_[static_cast<std::size_t>(r)];
    if (inv < 0 || inv >= k) {
      throw Error(ErrorKind::invalid_input,
                  "inverse of relation " + std::to_string(r) + " is out of range");
    }
    if (inverse_[static_cast<std::size_t>(inv)] != r) {
      throw Error(ErrorKind::invalid_input,
                  "inverse map is not an involution at relation " + std::to_string(r));
    }
  }
}

std::size_t RelationAlphabet::symmetric_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t r = 0; r < inverse_.size(); ++r) {
    if (inverse_[r] == static_cast<RelationId>(r)) ++n;
  }
  return n;
}

RelationAlphabet generate_alphabet(std::size_t num_relations, Rng& rng, double symmetric_fraction) {
  if (num_relations < 2) {
    throw Error(ErrorKind::invalid_configuration, "alphabet needs at least 2 relations");
  }
  if (!(symmetric_fraction >= 0.0 && symmetric_fraction <= 1.0)) {
    throw Error(ErrorKind::invalid_configuration, "symmetric_fraction must lie in [0, 1]");
  }
  auto num_symmetric = static_cast<std::size_t>(
      std::ceil(static_cast<double>(num_relations) * symmetric_fraction - 1e-12));
  num_symmetric = std::min(num_symmetric, num_relations);
  if ((num_relations - num_symmetric) % 2 == 1) ++num_symmetric;

  std::vector<RelationId> order(num_relations);
  for (std::size_t i = 0; i < num_relations; ++i) order[i] = static_cast<RelationId>(i);
  rng.shuffle(std::span(order));

  std::vector<RelationId> inverse(num_relations);
  for (std::size_t i = 0; i < num_symmetric; ++i) {
    inverse[static_cast<std::size_t>(order[i])] = order[i];
  }
  for (std::size_t i = num_symmetric; i + 1 < num_relations; i += 2) {
    inverse[static_cast<std::size_t>(order[i])] = order[i + 1];
    inverse[static_cast<std::size_t>(order[i + 1])] = order[i];
  }
  return RelationAlphabet(std::move(inverse));
}

std::string to_string(const BinaryRule& rule) {
  std::ostringstream os;
  os << '[' << rule.body[0] << ',' << rule.body[1] << "]=>" << rule.head;
  return os.str();
}

BinaryRule invert_rule(const BinaryRule& rule, const RelationAlphabet& alphabet) {
  return BinaryRule{{alphabet.inverse(rule.body[1]), alphabet.inverse(rule.body[0])},
                    alphabet.inverse(rule.head)};
}

RuleSet::RuleSet(RelationAlphabet alphabet, std::vector<BinaryRule> rules)
    : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
  const std::size_t k = alphabet_.size();
  body_index_.assign(k * k, -1);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const BinaryRule& r = rules_[i];
    if (!alphabet_.contains(r.body[0]) || !alphabet_.contains(r.body[1]) ||
        !alphabet_.contains(r.head)) {
      throw Error(ErrorKind::invalid_input,
                  "rule " + to_string(r) + " references a relation outside the alphabet");
    }
    auto& slot_ref = body_index_[slot(r.body[0], r.body[1])];
    if (slot_ref < 0) slot_ref = static_cast<std::int32_t>(i);
  }
}

std::optional<std::size_t> RuleSet::find_body(RelationId a, RelationId b) const {
  if (!alphabet_.contains(a) || !alphabet_.contains(b)) return std::nullopt;
  std::int32_t idx = body_index_[slot(a, b)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::optional<RelationId> RuleSet::compose(RelationId a, RelationId b) const {
  if (auto idx = find_body(a, b)) return rules_[*idx].head;
  return std::nullopt;
}

bool RuleSet::contains(const BinaryRule& rule) const {
  return std::find(rules_.begin(), rules_.end(), rule) != rules_.end();
}

RuleSet RuleSet::subset(std::span<const std::size_t> indices) const {
  std::vector<BinaryRule> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(rules_.at(i));
  return RuleSet(alphabet_, std::move(picked));
}

namespace {

// Arcs body -> head over relations. Returns one directed cycle as a list of
// relation ids (first == last omitted), or empty if acyclic.
std::vector<RelationId> find_cycle(std::size_t k, const std::vector<BinaryRule>& rules,
                                   const std::vector<bool>& alive) {
  std::vector<std::vector<RelationId>> adj(k);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!alive[i]) continue;
    for (RelationId b : rules[i].body) adj[static_cast<std::size_t>(b)].push_back(rules[i].head);
  }
  for (auto& out : adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  enum : char { white, grey, black };
  std::vector<char> colour(k, white);
  std::vector<RelationId> parent(k, -1);
  std::vector<RelationId> cycle;

  std::function<bool(RelationId)> visit = [&](RelationId u) {
    colour[static_cast<std::size_t>(u)] = grey;
    for (RelationId v : adj[static_cast<std::size_t>(u)]) {
      if (colour[static_cast<std::size_t>(v)] == grey) {
        for (RelationId x = u; x != v; x = parent[static_cast<std::size_t>(x)]) cycle.push_back(x);
        cycle.push_back(v);
        std::reverse(cycle.begin(), cycle.end());
        return true;
      }
      if (colour[static_cast<std::size_t>(v)] == white) {
        parent[static_cast<std::size_t>(v)] = u;
        if (visit(v)) return true;
      }
    }
    colour[static_cast<std::size_t>(u)] = black;
    return false;
  };
  for (std::size_t r = 0; r < k; ++r) {
    if (colour[r] == white && visit(static_cast<RelationId>(r))) break;
  }
  return cycle;
}

// Tarjan SCC over the body -> head digraph. Component id per relation.
std::vector<std::size_t> strongly_connected(std::size_t k, const std::vector<BinaryRule>& rules,
                                            std::size_t& num_components) {
  std::vector<std::vector<std::size_t>> adj(k);
  for (const auto& r : rules) {
    for (RelationId b : r.body) adj[static_cast<std::size_t>(b)].push_back(static_cast<std::size_t>(r.head));
  }
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(k, unset), low(k, 0), comp(k, unset);
  std::vector<bool> on_stack(k, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  num_components = 0;

  std::function<void(std::size_t)> connect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] == unset) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = num_components;
      } while (w != v);
      ++num_components;
    }
  };
  for (std::size_t v = 0; v < k; ++v) {
    if (index[v] == unset) connect(v);
  }
  return comp;
}

}  // namespace

RuleSet generate_rules(const RelationAlphabet& alphabet, Rng& rng) {
  const std::size_t k = alphabet.size();
  std::vector<BinaryRule> candidates;
  candidates.reserve(k * k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t h = 0; h < k; ++h) {
        if (h == i || h == j) continue;  // cyclical candidate
        candidates.push_back(BinaryRule{{static_cast<RelationId>(i), static_cast<RelationId>(j)},
                                        static_cast<RelationId>(h)});
      }
    }
  }
  rng.shuffle(std::span(candidates));

  // Insertion-ordered slots with tombstones, plus a body -> slot index.
  std::vector<BinaryRule> slots;
  std::vector<bool> alive;
  std::vector<std::int64_t> by_body(k * k, -1);
  auto body_slot = [&](const BinaryRule& r) -> std::int64_t& {
    return by_body[static_cast<std::size_t>(r.body[0]) * k + static_cast<std::size_t>(r.body[1])];
  };
  auto insert = [&](const BinaryRule& r) {
    body_slot(r) = static_cast<std::int64_t>(slots.size());
    slots.push_back(r);
    alive.push_back(true);
  };

  for (const BinaryRule& t : candidates) {
    if (body_slot(t) >= 0) continue;
    insert(t);
    const BinaryRule inv = invert_rule(t, alphabet);
    if (inv == t) continue;
    std::int64_t& existing = body_slot(inv);
    if (existing < 0) {
      insert(inv);
    } else if (slots[static_cast<std::size_t>(existing)] != inv) {
      // The inverse clashes with a rule already holding that body (possibly
      // t itself): drop the holder.
      alive[static_cast<std::size_t>(existing)] = false;
      existing = -1;
    }
  }

  // Closure repair: a rule whose inverse did not survive is dropped.
  auto present = [&](const BinaryRule& r) {
    std::int64_t s = body_slot(r);
    return s >= 0 && alive[static_cast<std::size_t>(s)] && slots[static_cast<std::size_t>(s)] == r;
  };
  std::vector<std::size_t> orphans;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (alive[i] && !present(invert_rule(slots[i], alphabet))) orphans.push_back(i);
  }
  for (std::size_t i : orphans) {
    alive[i] = false;
    body_slot(slots[i]) = -1;
  }

  // Dependency-cycle sweep: drop the latest-inserted rule (and its inverse)
  // carrying an arc of some remaining cycle, until acyclic.
  for (;;) {
    std::vector<RelationId> cycle = find_cycle(k, slots, alive);
    if (cycle.empty()) break;
    std::vector<std::pair<RelationId, RelationId>> arcs;
    for (std::size_t c = 0; c < cycle.size(); ++c) {
      arcs.emplace_back(cycle[c], cycle[(c + 1) % cycle.size()]);
    }
    std::size_t victim = slots.size();
    for (std::size_t i = slots.size(); i-- > 0;) {
      if (!alive[i]) continue;
      const BinaryRule& r = slots[i];
      bool on_cycle = std::any_of(arcs.begin(), arcs.end(), [&](const auto& arc) {
        return arc.second == r.head && (arc.first == r.body[0] || arc.first == r.body[1]);
      });
      if (on_cycle) {
        victim = i;
        break;
      }
    }
    const BinaryRule inv = invert_rule(slots[victim], alphabet);
    alive[victim] = false;
    body_slot(slots[victim]) = -1;
    if (present(inv)) {
      std::int64_t& s = body_slot(inv);
      alive[static_cast<std::size_t>(s)] = false;
      s = -1;
    }
  }

  std::vector<BinaryRule> kept;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (alive[i]) kept.push_back(slots[i]);
  }
  if (kept.empty()) {
    std::clog << "warning: generated rule set is empty (K=" << k << ")\n";
  }
  return RuleSet(alphabet, std::move(kept));
}

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::duplicate_body: return "duplicate-body";
    case Diagnostic::Kind::head_in_body: return "head-in-body";
    case Diagnostic::Kind::missing_inverse: return "missing-inverse";
    case Diagnostic::Kind::dependency_cycle: return "dependency-cycle";
  }
  return "unknown";
}

std::vector<Diagnostic> check_consistency(const RuleSet& rules, InverseClosure closure) {
  std::vector<Diagnostic> out;
  const auto& list = rules.rules();
  const auto& alphabet = rules.alphabet();

  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (list[i].body == list[j].body) {
        out.push_back({Diagnostic::Kind::duplicate_body, {j, i},
                       "rules " + to_string(list[j]) + " and " + to_string(list[i]) +
                           " share a body"});
        break;
      }
    }
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& r = list[i];
    if (r.head == r.body[0] || r.head == r.body[1]) {
      out.push_back({Diagnostic::Kind::head_in_body, {i},
                     "rule " + to_string(r) + " has its head in its body"});
    }
  }
  if (closure == InverseClosure::required) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      BinaryRule inv = invert_rule(list[i], alphabet);
      if (!rules.contains(inv)) {
        out.push_back({Diagnostic::Kind::missing_inverse, {i},
                       "rule " + to_string(list[i]) + " lacks its inverse " + to_string(inv)});
      }
    }
  }

  std::size_t num_components = 0;
  auto comp = strongly_connected(alphabet.size(), list, num_components);
  std::vector<std::size_t> comp_size(num_components, 0);
  for (std::size_t c : comp) ++comp_size[c];
  std::vector<std::vector<std::size_t>> members(num_components);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& r = list[i];
    std::size_t hc = comp[static_cast<std::size_t>(r.head)];
    bool inside = false;
    for (RelationId b : r.body) {
      if (comp[static_cast<std::size_t>(b)] != hc) continue;
      // Self-loops are reported as head-in-body.
      if (comp_size[hc] > 1) inside = true;
    }
    if (inside) members[hc].push_back(i);
  }
  for (std::size_t c = 0; c < num_components; ++c) {
    if (members[c].empty()) continue;
    out.push_back({Diagnostic::Kind::dependency_cycle, members[c],
                   "dependency cycle through " + std::to_string(comp_size[c]) + " relations"});
  }
  return out;
}

}  // namespace rulegraph
