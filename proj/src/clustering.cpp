#include "semdr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "semdr/error.hpp"

namespace semdr {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

// Portable [0, 1) draw; std::uniform_real_distribution is not bit-stable
// across standard libraries.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<double> ClusterModel::vectorize(const std::map<std::string, double>& term_weights) const {
  std::vector<double> vec(vocabulary.size(), 0.0);
  for (const auto& [term, tf] : term_weights) {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
    if (it == vocabulary.end() || *it != term) continue;
    const auto i = static_cast<std::size_t>(it - vocabulary.begin());
    vec[i] = tf * idf[i];
  }
  double norm = 0.0;
  for (double x : vec) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : vec) x /= norm;
  }
  return vec;
}

std::size_t ClusterModel::nearest(const std::vector<double>& vec) const {
  if (!fitted()) throw Error(Errc::ModelMissing, "cluster model has not been fitted");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(vec, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

ClusterModel fit_clusters(const std::vector<DocumentMetadata>& corpus, std::size_t k, std::uint64_t seed,
                          const Stopwords& stopwords) {
  if (k < 2) throw Error(Errc::InvalidConfig, "cluster count must be at least 2");
  if (corpus.size() < k)
    throw Error(Errc::TooFewDocuments,
                std::to_string(corpus.size()) + " documents for " + std::to_string(k) + " clusters");

  std::vector<std::map<std::string, double>> raw;
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    raw.push_back(cluster_terms(doc, stopwords));
    for (const auto& [t, w] : raw.back()) ++df[t];
  }

  ClusterModel model;
  model.k = k;
  model.seed = seed;
  std::vector<std::pair<std::string, std::size_t>> terms(df.begin(), df.end());
  if (terms.size() > kMaxVocabulary) {
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    terms.resize(kMaxVocabulary);
    std::sort(terms.begin(), terms.end());
  }
  const double n = static_cast<double>(corpus.size());
  for (const auto& [t, count] : terms) {
    model.vocabulary.push_back(t);
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }

  std::vector<std::vector<double>> points;
  for (const auto& r : raw) points.push_back(model.vectorize(r));
  for (const auto& doc : corpus) model.training_docs.push_back(doc.id);

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen{static_cast<std::size_t>(rng() % points.size())};
  std::vector<double> closest(points.size(), std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      closest[i] = std::min(closest[i], squared_distance(points[i], points[chosen.back()]));
      total += closest[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = unit_draw(rng) * total;
      for (pick = 0; pick + 1 < points.size(); ++pick) {
        target -= closest[pick];
        if (target < 0.0 && closest[pick] > 0.0) break;
      }
      while (closest[pick] == 0.0 && pick > 0) --pick;
    } else {
      // Every point coincides with a chosen centre; take the next unused one.
      while (std::find(chosen.begin(), chosen.end(), pick) != chosen.end()) ++pick;
    }
    chosen.push_back(pick);
  }
  for (auto i : chosen) model.centroids.push_back(points[i]);

  std::vector<std::size_t> assignment(points.size(), 0);
  for (int iter = 0; iter < kMaxKMeansIterations; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) assignment[i] = model.nearest(points[i]);
    std::vector<std::vector<double>> sums(k, std::vector<double>(model.vocabulary.size(), 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ++sizes[assignment[i]];
      auto& s = sums[assignment[i]];
      for (std::size_t j = 0; j < s.size(); ++j) s[j] += points[i][j];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;  // empty clusters keep their centre
      for (double& x : sums[c]) x /= static_cast<double>(sizes[c]);
      shift = std::max(shift, std::sqrt(squared_distance(sums[c], model.centroids[c])));
      model.centroids[c] = std::move(sums[c]);
    }
    if (shift < kKMeansTolerance) break;
  }
  for (std::size_t i = 0; i < points.size(); ++i) assignment[i] = model.nearest(points[i]);
  model.training_assignments = assignment;

  for (const auto& centroid : model.centroids) {
    std::vector<std::size_t> order(centroid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&centroid](std::size_t a, std::size_t b) { return centroid[a] > centroid[b]; });
    std::vector<std::string> top;
    for (auto i : order) {
      if (top.size() == kTopTermsPerCluster || centroid[i] <= 0.0) break;
      top.push_back(model.vocabulary[i]);
    }
    model.top_terms.push_back(std::move(top));
  }
  return model;
}

std::size_t assign_cluster(const ClusterModel& model, const DocumentMetadata& doc, const Stopwords& stopwords) {
  return model.nearest(model.vectorize(cluster_terms(doc, stopwords)));
}

}  // namespace semdr
