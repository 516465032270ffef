#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <vector>

#include "semdr/clustering.hpp"
#include "semdr/documents.hpp"
#include "semdr/graph.hpp"
#include "semdr/semantic_index.hpp"
#include "semdr/taxonomy.hpp"

namespace semdr {

inline constexpr double kDefaultMapThreshold = 0.5;

/// Clusters whose top terms relate to the concept above the threshold.
std::set<std::size_t> concept_clusters(ConceptId c, const SemanticConceptGraph& graph, const ClusterModel& model,
                                       const Taxonomy& tax, double map_threshold);

/// A (concept, document) pair is indexed when the document's nearest cluster
/// is one of the concept's clusters and some metadata term of the document
/// relates to the concept above the threshold. Only Direct concepts are
/// indexed; Latent domains derive from their members.
SemanticIndex build_semantic_index(const std::vector<DocumentMetadata>& docs, const SemanticConceptGraph& graph,
                                   const ClusterModel& model, const Taxonomy& tax, double map_threshold,
                                   const Stopwords& stopwords = Stopwords{});

/// Copy of `current` with every pair of `doc` recomputed.
SemanticIndex reindex_document(const SemanticIndex& current, const DocumentMetadata& doc,
                               const SemanticConceptGraph& graph, const ClusterModel& model, const Taxonomy& tax,
                               double map_threshold, const Stopwords& stopwords = Stopwords{});

/// Single publication point for the live index. Readers hold a snapshot for
/// as long as they need it; writers swap in a complete replacement.
class IndexPublisher {
 public:
  explicit IndexPublisher(SemanticIndex initial = SemanticIndex::empty_built())
      : current_(std::make_shared<const SemanticIndex>(std::move(initial))) {}

  std::shared_ptr<const SemanticIndex> snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
  }

  void publish(SemanticIndex next) {
    auto ptr = std::make_shared<const SemanticIndex>(std::move(next));
    std::lock_guard lock(mutex_);
    current_ = std::move(ptr);
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const SemanticIndex> current_;
};

}  // namespace semdr
