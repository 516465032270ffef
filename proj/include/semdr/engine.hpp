#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semdr/clustering.hpp"
#include "semdr/documents.hpp"
#include "semdr/geo.hpp"
#include "semdr/graph.hpp"
#include "semdr/gst.hpp"
#include "semdr/semantic_index.hpp"
#include "semdr/similarity.hpp"
#include "semdr/taxonomy.hpp"

namespace semdr {

struct EngineConfig {
  double anchor_threshold = 0.9;
  double group_threshold = 0.9;
  double map_threshold = 0.5;
  std::size_t k = 16;
  std::uint64_t seed = 42;
  std::string triples_path;
  std::string corpus_path;
  std::optional<std::string> taxonomy_path;
  std::optional<std::string> geo_path;
  std::optional<std::string> stopwords_path;
  std::optional<std::string> cluster_corpus_path;  // defaults to the corpus itself

  /// Thresholds in (0,1], k >= 2 and, when `check_paths`, every path exists.
  void validate(bool check_paths = true) const;

  bool operator==(const EngineConfig&) const = default;
};

/// Everything a query needs, frozen after build.
struct Engine {
  EngineConfig config;
  Stopwords stopwords;
  SemanticConceptGraph graph;
  Taxonomy taxonomy;
  DocumentRegistry registry;
  ClusterModel model;
  SemanticIndex index;
  GeoOntology geo;

  Tokenizer tokenizer() const { return Tokenizer(stopwords, geo.locations()); }
};

/// triples -> graph -> taxonomy -> semantic groups -> corpus -> clusters ->
/// index -> weights.
Engine build_engine(const EngineConfig& config);

struct TokenMatch {
  std::string token;
  std::string term;  // best metadata term, empty if the doc has none
  double score = 0.0;

  bool operator==(const TokenMatch&) const = default;
};

struct RankedDoc {
  DocId id;
  double score = 0.0;
  int tier = 2;  // 1: in every anchor domain
  std::vector<TokenMatch> matches;

  bool operator==(const RankedDoc&) const = default;
};

struct QueryOptions {
  std::optional<std::string> geo;  // overrides the tag found in the text
  std::optional<int> year;
};

struct RetrievalResult {
  std::string query;
  TokenList tokens;
  TerminalGroups groups;
  std::vector<ConceptId> concepts;
  std::vector<RankedDoc> docs;  // tier, then score descending, then id
  std::optional<GroupSteinerTree> tree;
};

RetrievalResult retrieve(const Engine& engine, std::string_view query, const QueryOptions& options = {});

/// Sum over tokens of the best word similarity against the doc's metadata terms.
double document_score(const Engine& engine, const std::vector<std::string>& tokens, const DocumentMetadata& doc,
                      std::vector<TokenMatch>* matches = nullptr);

}  // namespace semdr
