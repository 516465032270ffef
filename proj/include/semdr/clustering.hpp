#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semdr/documents.hpp"

namespace semdr {

inline constexpr std::size_t kMaxVocabulary = 20000;
inline constexpr std::size_t kTopTermsPerCluster = 10;
inline constexpr int kMaxKMeansIterations = 100;
inline constexpr double kKMeansTolerance = 1e-6;

/// Static generic clusters: k-means over L2-normalised TF-IDF vectors. Frozen
/// once fitted; new documents are only assigned, never refit.
struct ClusterModel {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocabulary;  // sorted
  std::vector<double> idf;
  std::vector<std::vector<double>> centroids;
  std::vector<std::vector<std::string>> top_terms;
  std::vector<DocId> training_docs;
  std::vector<std::size_t> training_assignments;

  bool fitted() const { return k > 0; }

  std::vector<double> vectorize(const std::map<std::string, double>& term_weights) const;
  std::size_t nearest(const std::vector<double>& vec) const;

  bool operator==(const ClusterModel&) const = default;
};

ClusterModel fit_clusters(const std::vector<DocumentMetadata>& corpus, std::size_t k, std::uint64_t seed,
                          const Stopwords& stopwords = Stopwords{});

std::size_t assign_cluster(const ClusterModel& model, const DocumentMetadata& doc,
                           const Stopwords& stopwords = Stopwords{});

}  // namespace semdr
