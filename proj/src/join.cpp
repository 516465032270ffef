#include "semdr/join.hpp"

#include <charconv>
#include <map>
#include <ostream>
#include <set>

#include "semdr/csv.hpp"
#include "semdr/error.hpp"
#include "semdr/similarity.hpp"
#include "semdr/text.hpp"

namespace semdr {
namespace {

struct Column {
  std::string name;  // bare attribute name
  std::set<std::string> values;
};

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool numeric_column(const std::set<std::string>& values) {
  bool any = false;
  for (const auto& v : values) {
    if (v.empty()) continue;
    if (!is_number(v)) return false;
    any = true;
  }
  return any;
}

double overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& v : a) inter += b.count(v);
  const auto uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Column> columns_of(const csv::Table& t) {
  std::vector<Column> cols(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) cols[i].name = t.header[i];
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < cols.size(); ++i) {
      auto v = normalize_label(r.fields[i]);
      if (!v.empty()) cols[i].values.insert(std::move(v));
    }
  return cols;
}

}  // namespace

JoinedTable join_structured(const std::vector<DocId>& docs, const DocumentRegistry& registry, const Taxonomy& tax) {
  std::vector<const DocumentMetadata*> structured;
  for (const auto& id : docs) {
    const auto& d = registry.at(id);
    if (d.kind == SourceKind::Structured) structured.push_back(&d);
  }
  if (structured.size() < 2)
    throw Error(Errc::NoLinkCondition, "need at least two structured documents, got " + std::to_string(structured.size()));

  JoinedTable out;
  std::vector<Column> cols;  // parallel to out.header
  {
    const auto t = csv::read_file(structured[0]->path);
    for (auto& c : columns_of(t)) {
      out.header.push_back(structured[0]->id + "." + c.name);
      cols.push_back(std::move(c));
    }
    for (const auto& r : t.rows) out.rows.push_back(r.fields);
    out.sources.push_back(structured[0]->id);
  }

  for (std::size_t di = 1; di < structured.size(); ++di) {
    const auto& doc = *structured[di];
    const auto t = csv::read_file(doc.path);
    const auto right = columns_of(t);

    bool found = false;
    std::size_t best_l = 0, best_r = 0;
    double best_name = 0, best_overlap = 0;
    for (std::size_t l = 0; l < cols.size(); ++l)
      for (std::size_t r = 0; r < right.size(); ++r) {
        const double name = word_similarity(cols[l].name, right[r].name, tax);
        if (name < kJoinNameThreshold) continue;
        const double ov = overlap(cols[l].values, right[r].values);
        if (ov <= 0.0) continue;
        if (!found || name > best_name || (name == best_name && ov > best_overlap)) {
          found = true;
          best_l = l;
          best_r = r;
          best_name = name;
          best_overlap = ov;
        }
      }
    if (!found) {
      if (out.sources.size() == 1)
        throw Error(Errc::NoLinkCondition, "no linkable columns between " + out.sources[0] + " and " + doc.id);
      break;
    }
    if (numeric_column(cols[best_l].values) != numeric_column(right[best_r].values))
      throw Error(Errc::TypeMismatch, out.header[best_l] + " and " + doc.id + "." + right[best_r].name);

    std::multimap<std::string, const std::vector<std::string>*> by_key;
    for (const auto& r : t.rows) by_key.emplace(normalize_label(r.fields[best_r]), &r.fields);
    std::vector<std::vector<std::string>> rows;
    for (const auto& left : out.rows) {
      const auto key = normalize_label(left[best_l]);
      if (key.empty()) continue;
      auto [lo, hi] = by_key.equal_range(key);
      for (auto it = lo; it != hi; ++it) {
        auto joined = left;
        joined.insert(joined.end(), it->second->begin(), it->second->end());
        rows.push_back(std::move(joined));
      }
    }
    out.steps.push_back({doc.id, out.header[best_l], right[best_r].name, best_name, best_overlap});
    out.rows = std::move(rows);
    for (const auto& c : right) {
      out.header.push_back(doc.id + "." + c.name);
      cols.push_back(c);
    }
    // values of the joined table shrink to what survived the join
    for (std::size_t i = 0; i < cols.size(); ++i) {
      cols[i].values.clear();
      for (const auto& r : out.rows) {
        auto v = normalize_label(r[i]);
        if (!v.empty()) cols[i].values.insert(std::move(v));
      }
    }
    out.sources.push_back(doc.id);
  }
  return out;
}

void write_joined_csv(std::ostream& out, const JoinedTable& table) {
  out << "# sources: ";
  for (std::size_t i = 0; i < table.sources.size(); ++i) out << (i ? ", " : "") << table.sources[i];
  out << "\n";
  for (const auto& s : table.steps)
    out << "# join " << s.doc << " on " << s.left_column << " = " << s.doc << "." << s.right_column << "\n";
  csv::write_row(out, table.header);
  for (const auto& r : table.rows) csv::write_row(out, r);
}

}  // namespace semdr
