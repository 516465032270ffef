#pragma once

#include <map>
#include <set>
#include <string>

#include "semdr/graph.hpp"

namespace semdr {

using DocId = std::string;
using DocSet = std::set<DocId>;

/// Concept -> documents with the derived reverse mapping kept consistent.
class SemanticIndex {
 public:
  SemanticIndex() = default;

  /// A default-constructed index is "missing"; builders mark theirs built.
  static SemanticIndex empty_built() {
    SemanticIndex index;
    index.built_ = true;
    return index;
  }

  void add(ConceptId concept_id, const DocId& doc);
  /// Drops every pair that mentions `doc`.
  void remove_document(const DocId& doc);

  const DocSet& documents_of(ConceptId concept_id) const;
  const std::set<ConceptId>& concepts_of(const DocId& doc) const;
  bool contains(ConceptId concept_id) const { return forward_.count(concept_id) > 0; }

  const std::map<ConceptId, DocSet>& forward() const { return forward_; }
  const std::map<DocId, std::set<ConceptId>>& reverse() const { return reverse_; }
  std::size_t pair_count() const;

  bool built() const { return built_; }
  void mark_built() { built_ = true; }

  bool operator==(const SemanticIndex&) const = default;

 private:
  std::map<ConceptId, DocSet> forward_;
  std::map<DocId, std::set<ConceptId>> reverse_;
  bool built_ = false;
};

/// CD_c: the mapped documents of a Direct concept, or the union over the
/// members of a Latent one.
DocSet concept_domain(ConceptId c, const SemanticIndex& index, const SemanticConceptGraph& graph);

/// |a ∩ b| / |a ∪ b|, with J(∅, ∅) = 0.
double jaccard(const DocSet& a, const DocSet& b);

/// 1 - J(CD_c1, CD_c2).
double relation_score(ConceptId c1, ConceptId c2, const SemanticIndex& index, const SemanticConceptGraph& graph);

/// Sets every relation weight to the relation score of its endpoints.
SemanticConceptGraph assign_weights(SemanticConceptGraph graph, const SemanticIndex& index);

}  // namespace semdr
