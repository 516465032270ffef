#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace semdr::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct Table {
  std::string source;  // file path or "<string>", used in error messages
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Index of a header column, or npos.
  std::size_t column(std::string_view name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// RFC 4180 style: comma separated, double-quote escaping, quoted fields may
/// span lines. A UTF-8 BOM is skipped. Blank records are dropped.
Table parse(std::string_view text, std::string source = "<string>");
Table read_file(const std::string& path);

/// Checks that `required` columns are present (case-insensitive header
/// match is done by normalizing the header on read).
void require_columns(const Table& table, const std::vector<std::string>& required);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace semdr::csv
