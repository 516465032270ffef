#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semdr/documents.hpp"
#include "semdr/taxonomy.hpp"

namespace semdr {

inline constexpr double kJoinNameThreshold = 0.9;

struct JoinStep {
  DocId doc;
  std::string left_column;   // qualified "doc.column" already in the joined table
  std::string right_column;  // column of `doc`
  double name_score = 0.0;
  double overlap = 0.0;  // Jaccard of the two value domains
};

struct JoinedTable {
  std::vector<DocId> sources;  // docs that made it into the join, in order
  std::vector<JoinStep> steps;
  std::vector<std::string> header;  // "doc.column"
  std::vector<std::vector<std::string>> rows;
};

/// Inner equijoin over the Structured docs in `docs`, chained greedily in the
/// given order. Chaining stops at the first doc that cannot be linked.
JoinedTable join_structured(const std::vector<DocId>& docs, const DocumentRegistry& registry, const Taxonomy& tax);

/// Provenance as '#' comment lines, then the header and rows as CSV.
void write_joined_csv(std::ostream& out, const JoinedTable& table);

}  // namespace semdr
