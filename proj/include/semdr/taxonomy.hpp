#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdr/graph.hpp"

namespace semdr {

/// Rooted DAG over concept labels. Parent links come from the graph's
/// subClassOf links plus any external child/parent pairs; nodes without a
/// parent hang directly off a virtual root. depth(root) = 1 and a node's
/// depth is one more than its deepest parent.
class Taxonomy {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr std::string_view kRootLabel = "<root>";

  Taxonomy();

  static Taxonomy build(const SemanticConceptGraph& graph,
                        const std::vector<std::pair<std::string, std::string>>& external_child_parent = {});

  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId node) const { return labels_.at(node); }
  const std::vector<NodeId>& parents(NodeId node) const { return parents_.at(node); }
  int depth(NodeId node) const { return depth_.at(node); }
  std::size_t size() const { return labels_.size(); }

  /// Deepest common ancestor; equal-depth candidates resolve to the
  /// smallest label.
  NodeId lowest_common_subsumer(NodeId a, NodeId b) const;

  /// 2 * depth(lcs) / (depth(a) + depth(b)).
  double wu_palmer(NodeId a, NodeId b) const;

  /// Raw child/parent pairs this taxonomy was built from (external part).
  const std::vector<std::pair<std::string, std::string>>& external_links() const { return external_; }

 private:
  NodeId intern(const std::string& label);
  void finalize();

  std::vector<std::string> labels_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<int> depth_;
  std::vector<std::vector<NodeId>> ancestors_;  // sorted, includes self
  std::map<std::string, NodeId, std::less<>> by_label_;
  std::vector<std::pair<std::string, std::string>> external_;
};

/// Reads a `child,parent` CSV.
std::vector<std::pair<std::string, std::string>> read_taxonomy_csv(const std::string& path);

/// Wu-Palmer between two graph concepts; both must be taxonomy nodes.
double wu_palmer(ConceptId c1, ConceptId c2, const SemanticConceptGraph& graph, const Taxonomy& tax);

}  // namespace semdr
