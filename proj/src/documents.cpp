#include "semdr/documents.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "semdr/csv.hpp"
#include "semdr/error.hpp"

namespace semdr {

namespace fs = std::filesystem;

namespace {

bool is_numeric_word(const std::string& w) {
  return std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool keep_word(const std::string& w, const Stopwords& stopwords) {
  return w.size() >= 2 && !is_numeric_word(w) && !stopwords.contains(w);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::UnreadableFile, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void apply_sidecar(DocumentMetadata& doc, const fs::path& file) {
  const auto sidecar = file.parent_path() / (file.stem().string() + ".meta.json");
  if (!fs::exists(sidecar)) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(sidecar.string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, sidecar.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(Errc::ParseError, sidecar.string() + ": expected an object");
  try {
    if (j.contains("description")) doc.description = j.at("description").get<std::string>();
    if (j.contains("geo")) doc.geo = normalize_label(j.at("geo").get<std::string>());
    if (j.contains("year")) doc.year = j.at("year").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, sidecar.string() + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(SourceKind kind) { return kind == SourceKind::Structured ? "structured" : "unstructured"; }

DocumentMetadata extract_metadata(const std::string& path, std::optional<SourceKind> kind_hint,
                                  const Stopwords& stopwords) {
  const fs::path file(path);
  auto ext = file.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext != ".csv" && ext != ".txt") throw Error(Errc::UnsupportedFormat, path);
  if (!fs::is_regular_file(file)) throw Error(Errc::UnreadableFile, path);
  const auto kind = kind_hint.value_or(ext == ".csv" ? SourceKind::Structured : SourceKind::Unstructured);

  DocumentMetadata doc;
  doc.id = file.filename().string();
  doc.path = path;
  doc.kind = kind;
  const auto text = read_text(path);

  if (kind == SourceKind::Structured) {
    const auto table = csv::parse(text, path);
    if (table.header.empty()) throw Error(Errc::EmptyDocument, path);
    doc.attributes = table.header;
    std::vector<std::set<std::string>> domains(table.header.size());
    for (const auto& row : table.rows)
      for (std::size_t c = 0; c < row.fields.size(); ++c) {
        auto value = normalize_label(row.fields[c]);
        if (!value.empty() && domains[c].size() < kValueDomainCap) domains[c].insert(std::move(value));
      }
    for (auto& d : domains) doc.value_domains.emplace_back(d.begin(), d.end());
  } else {
    std::map<std::string, int> counts;
    for (auto& w : split_words(text))
      if (keep_word(w, stopwords)) ++counts[w];
    for (auto& [w, n] : counts) doc.frequent_words.push_back({w, n});
    std::stable_sort(doc.frequent_words.begin(), doc.frequent_words.end(),
                     [](const WordCount& a, const WordCount& b) { return a.count > b.count; });
    if (doc.frequent_words.size() > kFrequentWordLimit) doc.frequent_words.resize(kFrequentWordLimit);
  }

  apply_sidecar(doc, file);
  if (kind == SourceKind::Unstructured && doc.frequent_words.empty() && doc.description.empty())
    throw Error(Errc::EmptyDocument, path);
  return doc;
}

std::vector<DocumentMetadata> load_corpus(const std::string& dir, const Stopwords& stopwords) {
  if (!fs::is_directory(dir)) throw Error(Errc::UnreadableFile, dir + " is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.' || ends_with(name, ".meta.json")) continue;
    files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<DocumentMetadata> docs;
  for (const auto& f : files) docs.push_back(extract_metadata(f, std::nullopt, stopwords));
  return docs;
}

std::vector<std::string> metadata_terms(const DocumentMetadata& doc, const Stopwords& stopwords) {
  std::set<std::string> terms;
  auto add_text = [&](const std::string& text) {
    for (auto& w : split_words(text))
      if (keep_word(w, stopwords)) terms.insert(std::move(w));
  };
  for (const auto& wc : doc.frequent_words) terms.insert(wc.word);
  add_text(doc.description);
  for (const auto& a : doc.attributes) add_text(a);
  for (const auto& domain : doc.value_domains)
    for (const auto& v : domain) add_text(v);
  return {terms.begin(), terms.end()};
}

std::map<std::string, double> cluster_terms(const DocumentMetadata& doc, const Stopwords& stopwords) {
  std::map<std::string, double> weights;
  for (const auto& wc : doc.frequent_words) weights[wc.word] += wc.count;
  for (auto& w : split_words(doc.description))
    if (keep_word(w, stopwords)) weights[w] += 1.0;
  for (const auto& a : doc.attributes)
    for (auto& w : split_words(a))
      if (keep_word(w, stopwords)) weights[w] += 1.0;
  return weights;
}

void DocumentRegistry::upsert(DocumentMetadata doc) {
  auto id = doc.id;
  docs_.insert_or_assign(std::move(id), std::move(doc));
}

const DocumentMetadata& DocumentRegistry::at(const DocId& id) const {
  auto it = docs_.find(id);
  if (it == docs_.end()) throw Error(Errc::UnknownDocument, "unknown document '" + id + "'");
  return it->second;
}

std::vector<DocumentMetadata> DocumentRegistry::list() const {
  std::vector<DocumentMetadata> out;
  out.reserve(docs_.size());
  for (const auto& [id, doc] : docs_) out.push_back(doc);
  return out;
}

}  // namespace semdr
