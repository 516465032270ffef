#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semdr/graph.hpp"
#include "semdr/taxonomy.hpp"
#include "semdr/text.hpp"

namespace semdr {

struct TokenList {
  std::vector<std::string> tokens;
  std::optional<std::string> geo;
  std::optional<int> year;

  bool operator==(const TokenList&) const = default;
};

/// Splits a query into semantic tokens, pulling out a yyyy year (1900-2100)
/// and a location label (longest match, up to three words) as filter tags.
class Tokenizer {
 public:
  Tokenizer() = default;
  Tokenizer(Stopwords stopwords, std::set<std::string> locations);

  TokenList tokenize(std::string_view query) const;

  const Stopwords& stopwords() const { return stopwords_; }

 private:
  Stopwords stopwords_;
  std::set<std::string> locations_;
  std::size_t longest_location_ = 0;
};

TokenList tokenize(std::string_view query, const Stopwords& stopwords = Stopwords{},
                   const std::set<std::string>& locations = {});

/// Word-to-concept proximity. A word naming a taxonomy node scores by
/// Wu-Palmer against the concept; any other word falls back to trigram Dice
/// against the concept label. Latent concepts score as their best member.
double semantic_score(std::string_view word, ConceptId c, const SemanticConceptGraph& graph, const Taxonomy& tax);

/// Word-to-word proximity with the same rules: Wu-Palmer when both words name
/// taxonomy nodes, trigram Dice otherwise.
double word_similarity(std::string_view a, std::string_view b, const Taxonomy& tax);

}  // namespace semdr
