#include <algorithm>
#include <iterator>

#include "semdr/error.hpp"
#include "semdr/semantic_index.hpp"

namespace semdr {

void SemanticIndex::add(ConceptId concept_id, const DocId& doc) {
  forward_[concept_id].insert(doc);
  reverse_[doc].insert(concept_id);
}

void SemanticIndex::remove_document(const DocId& doc) {
  auto it = reverse_.find(doc);
  if (it == reverse_.end()) return;
  for (auto c : it->second) {
    auto f = forward_.find(c);
    f->second.erase(doc);
    if (f->second.empty()) forward_.erase(f);
  }
  reverse_.erase(it);
}

const DocSet& SemanticIndex::documents_of(ConceptId concept_id) const {
  static const DocSet kEmpty;
  auto it = forward_.find(concept_id);
  return it == forward_.end() ? kEmpty : it->second;
}

const std::set<ConceptId>& SemanticIndex::concepts_of(const DocId& doc) const {
  static const std::set<ConceptId> kEmpty;
  auto it = reverse_.find(doc);
  return it == reverse_.end() ? kEmpty : it->second;
}

std::size_t SemanticIndex::pair_count() const {
  std::size_t n = 0;
  for (const auto& [c, docs] : forward_) n += docs.size();
  return n;
}

DocSet concept_domain(ConceptId c, const SemanticIndex& index, const SemanticConceptGraph& graph) {
  const auto& concept_ref = graph.concept_at(c);
  if (concept_ref.kind == ConceptKind::Direct) return index.documents_of(c);
  DocSet out;
  for (auto m : concept_ref.members) {
    const auto& docs = index.documents_of(m);
    out.insert(docs.begin(), docs.end());
  }
  return out;
}

double jaccard(const DocSet& a, const DocSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& d : a) shared += b.count(d);
  const std::size_t united = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double relation_score(ConceptId c1, ConceptId c2, const SemanticIndex& index, const SemanticConceptGraph& graph) {
  return 1.0 - jaccard(concept_domain(c1, index, graph), concept_domain(c2, index, graph));
}

SemanticConceptGraph assign_weights(SemanticConceptGraph graph, const SemanticIndex& index) {
  if (!index.built()) throw Error(Errc::IndexMissing, "semantic index has not been built");
  if (graph.empty()) throw Error(Errc::NotBuilt, "concept graph is empty");
  std::vector<DocSet> domains;
  domains.reserve(graph.size());
  for (const auto& c : graph.concepts()) domains.push_back(concept_domain(c.id, index, graph));
  for (std::size_t r = 0; r < graph.relations().size(); ++r) {
    const auto& rel = graph.relations()[r];
    graph.set_weight(r, 1.0 - jaccard(domains[rel.a.value], domains[rel.b.value]));
  }
  graph.mark_weighted();
  return graph;
}

}  // namespace semdr
