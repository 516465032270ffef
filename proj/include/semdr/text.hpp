#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semdr {

/// Lowercase, trim, and collapse runs of whitespace to a single space.
std::string normalize_label(std::string_view raw);

/// Lowercase alphanumeric runs; everything else separates words.
std::vector<std::string> split_words(std::string_view text);

/// Dice coefficient over the distinct character trigrams of " " + s + " ".
double trigram_dice(std::string_view a, std::string_view b);

bool is_year_token(std::string_view token);

class Stopwords {
 public:
  /// The built-in English list.
  Stopwords();
  explicit Stopwords(std::set<std::string> words) : words_(std::move(words)) {}

  /// One word per line; blank lines and lines starting with '#' are skipped.
  static Stopwords from_file(const std::string& path);

  bool contains(std::string_view word) const { return words_.count(std::string(word)) > 0; }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

}  // namespace semdr
