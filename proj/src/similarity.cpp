#include "semdr/similarity.hpp"

#include <algorithm>

#include "semdr/error.hpp"

namespace semdr {

Tokenizer::Tokenizer(Stopwords stopwords, std::set<std::string> locations)
    : stopwords_(std::move(stopwords)), locations_(std::move(locations)) {
  for (const auto& loc : locations_) {
    const auto words = split_words(loc);
    longest_location_ = std::max(longest_location_, words.size());
  }
}

TokenList Tokenizer::tokenize(std::string_view query) const {
  TokenList out;
  std::vector<std::string> words;
  for (auto& w : split_words(query)) {
    if (stopwords_.contains(w)) continue;
    if (is_year_token(w)) {
      out.year = std::stoi(w);
      continue;
    }
    words.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < words.size();) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(longest_location_, words.size() - i); len >= 1; --len) {
      std::string candidate = words[i];
      for (std::size_t k = 1; k < len; ++k) candidate += " " + words[i + k];
      if (locations_.count(candidate)) {
        out.geo = candidate;
        matched = len;
        break;
      }
    }
    if (matched) {
      i += matched;
    } else {
      out.tokens.push_back(words[i]);
      ++i;
    }
  }
  if (out.tokens.empty()) throw Error(Errc::EmptyQuery, "no searchable words in '" + std::string(query) + "'");
  return out;
}

TokenList tokenize(std::string_view query, const Stopwords& stopwords, const std::set<std::string>& locations) {
  return Tokenizer(stopwords, locations).tokenize(query);
}

double semantic_score(std::string_view word, ConceptId c, const SemanticConceptGraph& graph, const Taxonomy& tax) {
  const auto& concept_ref = graph.concept_at(c);
  if (concept_ref.kind == ConceptKind::Latent) {
    double best = 0.0;
    for (auto m : concept_ref.members) best = std::max(best, semantic_score(word, m, graph, tax));
    return best;
  }
  const auto normalized = normalize_label(word);
  if (normalized == concept_ref.label) return 1.0;
  const auto word_node = tax.find(normalized);
  const auto concept_node = tax.find(concept_ref.label);
  if (word_node && concept_node) return tax.wu_palmer(*word_node, *concept_node);
  return trigram_dice(normalized, concept_ref.label);
}

double word_similarity(std::string_view a, std::string_view b, const Taxonomy& tax) {
  const auto na = normalize_label(a);
  const auto nb = normalize_label(b);
  if (na == nb) return na.empty() ? 0.0 : 1.0;
  const auto ta = tax.find(na);
  const auto tb = tax.find(nb);
  if (ta && tb) return tax.wu_palmer(*ta, *tb);
  return trigram_dice(na, nb);
}

}  // namespace semdr
