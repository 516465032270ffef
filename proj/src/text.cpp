#include "semdr/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "semdr/error.hpp"

namespace semdr {

namespace {

constexpr const char* kBuiltinStopwords[] = {
    "a",     "about", "above", "after", "all",   "an",    "and",   "any",   "are",  "as",
    "at",    "be",    "been",  "but",   "by",    "can",   "do",    "does",  "for",  "from",
    "had",   "has",   "have",  "he",    "her",   "his",   "how",   "i",     "in",   "into",
    "is",    "it",    "its",   "of",    "on",    "or",    "our",   "she",   "so",   "than",
    "that",  "the",   "their", "them",  "then",  "there", "these", "they",  "this", "those",
    "to",    "was",   "we",    "were",  "what",  "when",  "where", "which", "who",  "will",
    "with",  "would", "you",   "your",
};

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MalformedTriple: return "MalformedTriple";
    case Errc::NotBuilt: return "NotBuilt";
    case Errc::UnknownConcept: return "UnknownConcept";
    case Errc::UnknownDocument: return "UnknownDocument";
    case Errc::IndexMissing: return "IndexMissing";
    case Errc::CyclicTaxonomy: return "CyclicTaxonomy";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::NoAnchors: return "NoAnchors";
    case Errc::UnreachableGroup: return "UnreachableGroup";
    case Errc::TooLarge: return "TooLarge";
    case Errc::UnreadableFile: return "UnreadableFile";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::TooFewDocuments: return "TooFewDocuments";
    case Errc::ModelMissing: return "ModelMissing";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::UnknownLocation: return "UnknownLocation";
    case Errc::NoLinkCondition: return "NoLinkCondition";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::AllReferencesEmpty: return "AllReferencesEmpty";
    case Errc::IdMismatch: return "IdMismatch";
    case Errc::CorruptState: return "CorruptState";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (is_word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

double trigram_dice(std::string_view a, std::string_view b) {
  auto trigrams = [](std::string_view s) {
    std::set<std::string> grams;
    if (s.empty()) return grams;
    std::string padded = " " + std::string(s) + " ";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) grams.insert(padded.substr(i, 3));
    return grams;
  };
  const auto ga = trigrams(a);
  const auto gb = trigrams(b);
  if (ga.empty() || gb.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& g : ga) shared += gb.count(g);
  return 2.0 * static_cast<double>(shared) / static_cast<double>(ga.size() + gb.size());
}

bool is_year_token(std::string_view token) {
  if (token.size() != 4 || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); }))
    return false;
  const int year = std::stoi(std::string(token));
  return year >= 1900 && year <= 2100;
}

Stopwords::Stopwords() {
  for (const char* w : kBuiltinStopwords) words_.insert(w);
}

Stopwords Stopwords::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UnreadableFile, path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto word = normalize_label(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(std::move(word));
  }
  return Stopwords(std::move(words));
}

}  // namespace semdr
