#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semdr/semantic_index.hpp"
#include "semdr/text.hpp"

namespace semdr {

enum class SourceKind { Structured, Unstructured };

std::string_view to_string(SourceKind kind);

struct WordCount {
  std::string word;
  int count = 0;

  bool operator==(const WordCount&) const = default;
};

inline constexpr std::size_t kFrequentWordLimit = 30;
inline constexpr std::size_t kValueDomainCap = 1000;

struct DocumentMetadata {
  DocId id;
  std::string path;
  SourceKind kind = SourceKind::Unstructured;
  std::vector<std::string> attributes;                // Structured: header row
  std::vector<std::vector<std::string>> value_domains;  // parallel to attributes, sorted distinct
  std::vector<WordCount> frequent_words;              // Unstructured: count desc, word asc
  std::string description;
  std::optional<std::string> geo;
  std::optional<int> year;

  bool operator==(const DocumentMetadata&) const = default;
};

/// Reads a .csv (Structured) or .txt (Unstructured) document. A sidecar
/// `<stem>.meta.json` next to it may set description, geo and year.
DocumentMetadata extract_metadata(const std::string& path, std::optional<SourceKind> kind_hint = {},
                                  const Stopwords& stopwords = Stopwords{});

/// Every .csv/.txt file in `dir`, ordered by file name. Sidecars are consumed
/// by their documents; any other file is an UnsupportedFormat error.
std::vector<DocumentMetadata> load_corpus(const std::string& dir, const Stopwords& stopwords = Stopwords{});

/// Distinct, sorted, stopword-free words describing a document: frequent
/// words, description, attribute names and attribute values.
std::vector<std::string> metadata_terms(const DocumentMetadata& doc, const Stopwords& stopwords);

/// Weighted terms used for clustering: frequent-word counts plus description
/// and attribute-name words.
std::map<std::string, double> cluster_terms(const DocumentMetadata& doc, const Stopwords& stopwords);

/// Closed set of ingested documents.
class DocumentRegistry {
 public:
  /// Inserts or replaces by id.
  void upsert(DocumentMetadata doc);
  bool contains(const DocId& id) const { return docs_.count(id) > 0; }
  const DocumentMetadata& at(const DocId& id) const;
  std::size_t size() const { return docs_.size(); }
  const std::map<DocId, DocumentMetadata>& all() const { return docs_; }
  std::vector<DocumentMetadata> list() const;

  bool operator==(const DocumentRegistry&) const = default;

 private:
  std::map<DocId, DocumentMetadata> docs_;
};

}  // namespace semdr
