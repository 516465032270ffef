#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semdr/graph.hpp"
#include "semdr/similarity.hpp"
#include "semdr/taxonomy.hpp"

namespace semdr {

struct TerminalGroup {
  std::string token;
  std::map<ConceptId, double> terminals;  // anchor -> semantic score
  std::set<ConceptId> latent;             // terminals plus their group members
};

using TerminalGroups = std::vector<TerminalGroup>;

struct TreeEdge {
  ConceptId a;  // a < b
  ConceptId b;
  double weight = 0.0;

  bool operator==(const TreeEdge&) const = default;
};

struct GroupSteinerTree {
  std::set<ConceptId> nodes;
  std::vector<TreeEdge> edges;  // sorted by (a, b)
  double cost = 0.0;
  std::map<ConceptId, double> anchor_scores;                    // anchors present in the tree
  std::vector<std::pair<std::string, std::vector<ConceptId>>> groups;  // token -> terminals

  bool operator==(const GroupSteinerTree&) const = default;
};

/// One group per distinct token; terminals are the Direct concepts whose
/// semantic score for the token exceeds the threshold. Empty groups are kept.
TerminalGroups identify_anchors(const SemanticConceptGraph& graph, const Taxonomy& tax, const TokenList& tokens,
                                double threshold);

/// latent = terminals + members of every Latent concept containing a terminal.
TerminalGroups expand_to_latent(const SemanticConceptGraph& graph, TerminalGroups groups);

/// Greedy group-merging heuristic. Empty groups are ignored; a lone group
/// yields its best anchor as a single-node tree.
GroupSteinerTree greedy_gst(const SemanticConceptGraph& graph, const TerminalGroups& groups);

inline constexpr std::size_t kExactNodeGuard = 16;

/// Exhaustive optimum: every node subset that hits each group and induces a
/// connected subgraph is scored by its minimum spanning tree.
GroupSteinerTree exact_gst(const SemanticConceptGraph& graph, const TerminalGroups& groups,
                           std::size_t max_nodes = kExactNodeGuard);

/// Anchors by descending score, then connectors by descending tree degree;
/// labels break ties.
std::vector<ConceptId> relevant_concepts(const GroupSteinerTree& tree, const SemanticConceptGraph& graph);

/// Canonical cost: weights summed in ascending order so equal edge multisets
/// give bit-identical totals.
double tree_cost(const std::vector<TreeEdge>& edges);

/// Empty string when the tree satisfies every structural invariant for the
/// given groups, otherwise a description of the first violation.
std::string check_tree(const SemanticConceptGraph& graph, const GroupSteinerTree& tree, const TerminalGroups& groups);

}  // namespace semdr
