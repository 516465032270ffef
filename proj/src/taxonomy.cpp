#include "semdr/taxonomy.hpp"

#include <algorithm>
#include <deque>

#include "semdr/csv.hpp"
#include "semdr/error.hpp"
#include "semdr/text.hpp"

namespace semdr {

Taxonomy::Taxonomy() {
  labels_.emplace_back(kRootLabel);
  parents_.emplace_back();
  by_label_.emplace(std::string(kRootLabel), kRoot);
  finalize();
}

Taxonomy::NodeId Taxonomy::intern(const std::string& label) {
  if (auto it = by_label_.find(label); it != by_label_.end()) return it->second;
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(label);
  parents_.emplace_back();
  by_label_.emplace(label, id);
  return id;
}

Taxonomy Taxonomy::build(const SemanticConceptGraph& graph,
                         const std::vector<std::pair<std::string, std::string>>& external_child_parent) {
  Taxonomy tax;
  auto link = [&tax](NodeId child, NodeId parent) {
    if (child == parent) throw Error(Errc::CyclicTaxonomy, "'" + tax.labels_[child] + "' is its own parent");
    auto& ps = tax.parents_[child];
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) ps.push_back(parent);
  };
  for (const auto& c : graph.concepts())
    if (c.kind == ConceptKind::Direct) tax.intern(c.label);
  for (const auto& [child, parent] : graph.hierarchy_links())
    link(tax.intern(graph.label(child)), tax.intern(graph.label(parent)));
  for (const auto& [child, parent] : external_child_parent) {
    const auto c = normalize_label(child);
    const auto p = normalize_label(parent);
    if (c.empty() || p.empty()) continue;
    link(tax.intern(c), tax.intern(p));
    tax.external_.emplace_back(c, p);
  }
  tax.finalize();
  return tax;
}

void Taxonomy::finalize() {
  const auto n = labels_.size();
  for (NodeId v = 1; v < n; ++v) {
    if (parents_[v].empty()) parents_[v].push_back(kRoot);
    std::sort(parents_[v].begin(), parents_[v].end());
  }

  // Kahn's algorithm from the root downwards; leftovers sit on a cycle.
  std::vector<std::vector<NodeId>> children(n);
  std::vector<std::size_t> pending(n, 0);
  for (NodeId v = 1; v < n; ++v) {
    pending[v] = parents_[v].size();
    for (auto p : parents_[v]) children[p].push_back(v);
  }
  depth_.assign(n, 1);
  ancestors_.assign(n, {});
  ancestors_[kRoot] = {kRoot};
  std::deque<NodeId> ready{kRoot};
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++visited;
    if (v != kRoot) {
      std::vector<NodeId> anc{v};
      for (auto p : parents_[v]) {
        depth_[v] = std::max(depth_[v], depth_[p] + 1);
        anc.insert(anc.end(), ancestors_[p].begin(), ancestors_[p].end());
      }
      std::sort(anc.begin(), anc.end());
      anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
      ancestors_[v] = std::move(anc);
    }
    for (auto c : children[v])
      if (--pending[c] == 0) ready.push_back(c);
  }
  if (visited != n) {
    for (NodeId v = 1; v < n; ++v)
      if (pending[v] != 0) throw Error(Errc::CyclicTaxonomy, "cycle through '" + labels_[v] + "'");
  }
}

std::optional<Taxonomy::NodeId> Taxonomy::find(std::string_view label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

Taxonomy::NodeId Taxonomy::lowest_common_subsumer(NodeId a, NodeId b) const {
  const auto& aa = ancestors_.at(a);
  const auto& ab = ancestors_.at(b);
  NodeId best = kRoot;
  std::size_t i = 0, j = 0;
  while (i < aa.size() && j < ab.size()) {
    if (aa[i] < ab[j]) {
      ++i;
    } else if (ab[j] < aa[i]) {
      ++j;
    } else {
      const auto v = aa[i];
      if (depth_[v] > depth_[best] || (depth_[v] == depth_[best] && labels_[v] < labels_[best])) best = v;
      ++i;
      ++j;
    }
  }
  return best;
}

double Taxonomy::wu_palmer(NodeId a, NodeId b) const {
  if (a == b) return 1.0;
  const auto lcs = lowest_common_subsumer(a, b);
  return 2.0 * depth_[lcs] / static_cast<double>(depth_[a] + depth_[b]);
}

std::vector<std::pair<std::string, std::string>> read_taxonomy_csv(const std::string& path) {
  const auto table = csv::read_file(path);
  csv::require_columns(table, {"child", "parent"});
  const auto c = table.column("child");
  const auto p = table.column("parent");
  std::vector<std::pair<std::string, std::string>> links;
  for (const auto& row : table.rows) links.emplace_back(row.fields[c], row.fields[p]);
  return links;
}

double wu_palmer(ConceptId c1, ConceptId c2, const SemanticConceptGraph& graph, const Taxonomy& tax) {
  const auto a = tax.find(graph.label(c1));
  const auto b = tax.find(graph.label(c2));
  if (!a) throw Error(Errc::UnknownConcept, "'" + graph.label(c1) + "' is not in the taxonomy");
  if (!b) throw Error(Errc::UnknownConcept, "'" + graph.label(c2) + "' is not in the taxonomy");
  return tax.wu_palmer(*a, *b);
}

}  // namespace semdr
