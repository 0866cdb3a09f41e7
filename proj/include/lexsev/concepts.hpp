#pragma once

// Hate concepts and their transitive / lattice graphs.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexsev/mining.hpp"
#include "lexsev/text.hpp"

namespace lexsev {

inline std::string itemset_label(const Itemset& items) { return text::join(items, "_"); }

inline Itemset itemset_union(const Itemset& a, const Itemset& b) {
  Itemset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const Itemset& a, const Itemset& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool is_strict_subset(const Itemset& a, const Itemset& b) { return a.size() < b.size() && is_subset(a, b); }

struct Concept {
  Itemset terms;
  std::vector<RuleKey> rules;  // sorted

  std::size_t rule_count() const { return rules.size(); }
  std::string name() const { return itemset_label(terms); }
  /// "a*s_b*tch_boss 5"
  std::string label() const { return name() + " " + std::to_string(rule_count()); }
};

/// Groups rules by the term union of antecedent and consequent. A union contained in a
/// larger union of the same batch is absorbed by it, so {a}->{b} joins {a}->{b,c}.
/// When several maximal unions contain a rule it goes to the largest, then the
/// lexicographically smallest.
inline std::vector<Concept> group_similar_rules(std::span<const RuleKey> rules) {
  std::set<RuleKey> unique(rules.begin(), rules.end());
  std::set<Itemset> unions;
  for (const auto& r : unique) unions.insert(itemset_union(r.antecedent, r.consequent));

  std::vector<Itemset> maximal;
  for (const auto& u : unions) {
    bool dominated = std::any_of(unions.begin(), unions.end(), [&](const Itemset& o) { return is_strict_subset(u, o); });
    if (!dominated) maximal.push_back(u);
  }
  std::sort(maximal.begin(), maximal.end(), [](const Itemset& a, const Itemset& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });

  std::map<Itemset, Concept> concepts;
  for (const auto& r : unique) {
    auto u = itemset_union(r.antecedent, r.consequent);
    auto home = std::find_if(maximal.begin(), maximal.end(), [&](const Itemset& m) { return is_subset(u, m); });
    auto& c = concepts[*home];
    c.terms = *home;
    c.rules.push_back(r);
  }
  std::vector<Concept> out;
  for (auto& [terms, c] : concepts) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const Concept& a, const Concept& b) { return a.name() < b.name(); });
  return out;
}

template <class Rule>
  requires requires(const Rule& r) {
    { r.key() } -> std::convertible_to<RuleKey>;
  }
std::vector<Concept> group_similar_rules(const std::vector<Rule>& rules) {
  std::vector<RuleKey> keys;
  keys.reserve(rules.size());
  for (const auto& r : rules) keys.push_back(r.key());
  return group_similar_rules(std::span<const RuleKey>(keys));
}

enum class GraphKind { Transitive, Lattice };

inline const char* to_string(GraphKind k) { return k == GraphKind::Transitive ? "Transitive" : "Lattice"; }

struct GraphNode {
  std::string id;
  std::string label;
  Itemset terms;
};

struct GraphEdge {
  std::string source;  // node id
  std::string target;
  std::optional<RuleKey> rule;  // transitive edges only
};

/// Nodes are sorted by label and numbered n0, n1, ...; edges are sorted by (source label, target label).
struct ConceptGraph {
  GraphKind kind = GraphKind::Transitive;
  std::string concept_name;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::optional<std::string> root;  // lattice only

  std::string name() const { return std::string(to_string(kind)) + "_" + concept_name; }

  const GraphNode* node(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }

  const GraphNode* find_label(const std::string& label) const {
    for (const auto& n : nodes)
      if (n.label == label) return &n;
    return nullptr;
  }
};

using TransitiveGraph = ConceptGraph;
using LatticeGraph = ConceptGraph;

namespace graph_detail {

inline ConceptGraph assemble(GraphKind kind, const Concept& c, const std::set<Itemset>& node_sets,
                             std::vector<std::pair<std::pair<Itemset, Itemset>, std::optional<RuleKey>>> edges) {
  ConceptGraph g;
  g.kind = kind;
  g.concept_name = c.name();
  std::vector<std::pair<std::string, Itemset>> labelled;
  for (const auto& s : node_sets) labelled.emplace_back(itemset_label(s), s);
  std::sort(labelled.begin(), labelled.end());
  std::map<Itemset, std::string> ids;
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    auto id = "n" + std::to_string(i);
    ids[labelled[i].second] = id;
    g.nodes.push_back(GraphNode{id, labelled[i].first, labelled[i].second});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair(itemset_label(a.first.first), itemset_label(a.first.second)) <
           std::pair(itemset_label(b.first.first), itemset_label(b.first.second));
  });
  for (auto& [ends, rule] : edges) g.edges.push_back(GraphEdge{ids.at(ends.first), ids.at(ends.second), rule});
  return g;
}

}  // namespace graph_detail

/// One node per distinct side-set, one edge per rule (antecedent -> consequent).
inline TransitiveGraph build_transitive_graph(const Concept& c) {
  std::set<Itemset> sets;
  std::vector<std::pair<std::pair<Itemset, Itemset>, std::optional<RuleKey>>> edges;
  for (const auto& r : c.rules) {
    sets.insert(r.antecedent);
    sets.insert(r.consequent);
    edges.push_back({{r.antecedent, r.consequent}, r});
  }
  return graph_detail::assemble(GraphKind::Transitive, c, sets, std::move(edges));
}

/// Hasse diagram over singletons, rule side-sets, rule unions and the concept root,
/// with edges from each set to the sets that cover it.
inline LatticeGraph build_lattice_graph(const Concept& c) {
  std::set<Itemset> sets;
  for (const auto& t : c.terms) sets.insert(Itemset{t});
  for (const auto& r : c.rules) {
    sets.insert(r.antecedent);
    sets.insert(r.consequent);
    sets.insert(itemset_union(r.antecedent, r.consequent));
  }
  sets.insert(c.terms);

  std::vector<std::pair<std::pair<Itemset, Itemset>, std::optional<RuleKey>>> edges;
  for (const auto& s : sets) {
    for (const auto& t : sets) {
      if (!is_strict_subset(s, t)) continue;
      bool covered = std::any_of(sets.begin(), sets.end(), [&](const Itemset& u) {
        return is_strict_subset(s, u) && is_strict_subset(u, t);
      });
      if (!covered) edges.push_back({{s, t}, std::nullopt});
    }
  }
  auto g = graph_detail::assemble(GraphKind::Lattice, c, sets, std::move(edges));
  g.root = g.find_label(itemset_label(c.terms))->id;
  return g;
}

namespace graph_detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace graph_detail

/// Deterministic DOT text. Lattices are drawn top-down with the root on the last rank.
inline std::string export_dot(const ConceptGraph& g) {
  using graph_detail::dot_quote;
  std::ostringstream os;
  os << "digraph " << dot_quote(g.name()) << " {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=box];\n";
  for (const auto& n : g.nodes) {
    os << "  " << n.id << " [label=" << dot_quote(n.label);
    if (g.root && *g.root == n.id) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : g.edges) os << "  " << e.source << " -> " << e.target << ";\n";
  if (g.root) os << "  { rank=max; " << *g.root << "; }\n";
  os << "}\n";
  return os.str();
}

inline nlohmann::ordered_json rule_json(const RuleKey& r) {
  return {{"antecedent", r.antecedent}, {"consequent", r.consequent}};
}

inline nlohmann::ordered_json to_json(const Concept& c) {
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const auto& r : c.rules) rules.push_back(rule_json(r));
  return {{"name", c.name()}, {"label", c.label()}, {"terms", c.terms}, {"rule_count", c.rule_count()},
          {"rules", rules}};
}

inline nlohmann::ordered_json to_json(const ConceptGraph& g) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) nodes.push_back({{"id", n.id}, {"label", n.label}, {"terms", n.terms}});
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    nlohmann::ordered_json j{{"source", e.source}, {"target", e.target}};
    if (e.rule) j["rule"] = rule_json(*e.rule);
    edges.push_back(std::move(j));
  }
  nlohmann::ordered_json j{{"kind", to_string(g.kind)}, {"name", g.name()}, {"concept", g.concept_name},
                           {"nodes", nodes}, {"edges", edges}};
  j["root"] = g.root ? nlohmann::ordered_json(*g.root) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace lexsev
