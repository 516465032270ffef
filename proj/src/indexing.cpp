#include "semdr/indexing.hpp"

#include "semdr/error.hpp"
#include "semdr/similarity.hpp"

namespace semdr {

namespace {

void index_document(SemanticIndex& index, const DocumentMetadata& doc, const SemanticConceptGraph& graph,
                    const ClusterModel& model, const Taxonomy& tax, double map_threshold, const Stopwords& stopwords,
                    const std::vector<std::set<std::size_t>>& clusters_by_concept) {
  const auto cluster = assign_cluster(model, doc, stopwords);
  const auto terms = metadata_terms(doc, stopwords);
  for (const auto& c : graph.concepts()) {
    if (c.kind != ConceptKind::Direct || !clusters_by_concept[c.id.value].count(cluster)) continue;
    for (const auto& term : terms) {
      if (semantic_score(term, c.id, graph, tax) > map_threshold) {
        index.add(c.id, doc.id);
        break;
      }
    }
  }
}

std::vector<std::set<std::size_t>> all_concept_clusters(const SemanticConceptGraph& graph, const ClusterModel& model,
                                                        const Taxonomy& tax, double map_threshold) {
  std::vector<std::set<std::size_t>> out(graph.size());
  for (const auto& c : graph.concepts())
    if (c.kind == ConceptKind::Direct) out[c.id.value] = concept_clusters(c.id, graph, model, tax, map_threshold);
  return out;
}

}  // namespace

std::set<std::size_t> concept_clusters(ConceptId c, const SemanticConceptGraph& graph, const ClusterModel& model,
                                       const Taxonomy& tax, double map_threshold) {
  if (!model.fitted()) throw Error(Errc::ModelMissing, "cluster model has not been fitted");
  std::set<std::size_t> out;
  for (std::size_t k = 0; k < model.top_terms.size(); ++k)
    for (const auto& term : model.top_terms[k])
      if (semantic_score(term, c, graph, tax) > map_threshold) {
        out.insert(k);
        break;
      }
  return out;
}

SemanticIndex build_semantic_index(const std::vector<DocumentMetadata>& docs, const SemanticConceptGraph& graph,
                                   const ClusterModel& model, const Taxonomy& tax, double map_threshold,
                                   const Stopwords& stopwords) {
  if (!model.fitted()) throw Error(Errc::ModelMissing, "cluster model has not been fitted");
  auto index = SemanticIndex::empty_built();
  if (docs.empty()) return index;
  const auto clusters = all_concept_clusters(graph, model, tax, map_threshold);
  for (const auto& doc : docs) index_document(index, doc, graph, model, tax, map_threshold, stopwords, clusters);
  return index;
}

SemanticIndex reindex_document(const SemanticIndex& current, const DocumentMetadata& doc,
                               const SemanticConceptGraph& graph, const ClusterModel& model, const Taxonomy& tax,
                               double map_threshold, const Stopwords& stopwords) {
  if (!model.fitted()) throw Error(Errc::ModelMissing, "cluster model has not been fitted");
  SemanticIndex next = current;
  next.remove_document(doc.id);
  next.mark_built();
  index_document(next, doc, graph, model, tax, map_threshold, stopwords,
                 all_concept_clusters(graph, model, tax, map_threshold));
  return next;
}

}  // namespace semdr
