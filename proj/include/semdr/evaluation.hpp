#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdr/documents.hpp"
#include "semdr/semantic_index.hpp"

namespace semdr {

struct Engine;

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
};

Confusion confusion(const DocSet& reference, const DocSet& retrieved, std::size_t universe);
Metrics metrics(const Confusion& c);

struct Type2Error {
  double percent = 0.0;
  std::vector<std::size_t> excluded;  // run indices with an empty reference
};

/// Mean share of reference docs that were missed, x100. Runs with an empty
/// reference are skipped; AllReferencesEmpty if nothing is left.
Type2Error type2_error(const std::vector<std::pair<DocSet, DocSet>>& runs);

/// Mean top-k precision against the reference, x100. Empty rankings score 0.
double topk_analysis(const std::vector<std::pair<DocSet, std::vector<DocId>>>& runs, std::size_t k);

/// Exact keyword matching: docs whose terms contain every non-stopword query
/// word. Terms are the metadata terms plus the geo and year tags.
DocSet keyword_baseline(std::string_view query, const DocumentRegistry& registry, const Stopwords& stopwords);

/// One decimal place, half-up.
double round_percent(double percent);

struct QuerySpec {
  std::string id;
  std::string query;
  std::optional<std::string> geo;
  std::optional<int> year;
  std::string set_label;
};

struct ReferenceEntry {
  std::string query;
  DocSet relevant;
};

using ReferenceSolution = std::map<std::string, ReferenceEntry>;

/// `query_id,query,set_label` plus optional `geo` and `year` columns.
std::vector<QuerySpec> read_queries_csv(const std::string& path);
/// `query_id,query,doc_id`; an empty doc_id declares a query with no relevant docs.
ReferenceSolution read_reference_csv(const std::string& path);

inline constexpr std::size_t kTopKs[] = {3, 5, 7, 10};

struct SystemSummary {
  double precision = 0.0;  // percent, one decimal
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  std::optional<double> type2;
  std::map<std::size_t, double> topk;

  bool operator==(const SystemSummary&) const = default;
};

struct SetSummary {
  std::string label;
  std::size_t queries = 0;
  SystemSummary semdr;
  SystemSummary baseline;

  bool operator==(const SetSummary&) const = default;
};

struct QueryRow {
  std::string id;
  std::string set_label;
  std::string query;
  Confusion semdr;
  Confusion baseline;
  std::vector<DocId> ranked;  // SemDR ranking
  std::string error;          // retrieval failure, empty if none

  bool operator==(const QueryRow&) const = default;
};

struct EvalReport {
  std::size_t universe = 0;
  std::vector<QueryRow> rows;     // query id order
  std::vector<SetSummary> sets;   // label order
  SetSummary overall;             // label "all"

  bool operator==(const EvalReport&) const = default;
};

/// Retrieval per query on up to `jobs` threads, folded in query-id order.
/// IdMismatch when the two files disagree on query ids.
EvalReport run_evaluation(const Engine& engine, const std::vector<QuerySpec>& queries,
                          const ReferenceSolution& reference, std::size_t jobs = 1);

std::string render_report_json(const EvalReport& report);
EvalReport parse_report_json(std::string_view text);
std::string render_report_table(const EvalReport& report);

/// "metric>=X" style threshold on the overall SemDR summary. Metrics:
/// precision, recall, accuracy, f1, type2. Operators: >=, <=, >, <.
struct Assertion {
  std::string metric;
  std::string op;
  double value = 0.0;
};

Assertion parse_assertion(std::string_view text);
/// Empty string when it holds, otherwise a description of the failure.
std::string check_assertion(const Assertion& a, const EvalReport& report);

}  // namespace semdr
