#include "semdr/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "semdr/error.hpp"
#include "semdr/text.hpp"

namespace semdr::csv {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return npos;
}

Table parse(std::string_view text, std::string source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  Table table;
  table.source = std::move(source);
  std::vector<Row> records;
  Row current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Row{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw Error(Errc::ParseError, table.source + ":" + std::to_string(line) + ": stray quote");
        in_quotes = true;
        field_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw Error(Errc::ParseError, table.source + ":" + std::to_string(current.line) + ": unterminated quote");
  if (!field.empty() || !current.fields.empty()) end_record();

  if (records.empty()) return table;
  for (auto& h : records.front().fields) table.header.push_back(normalize_label(h));
  for (std::size_t i = 1; i < records.size(); ++i) {
    auto& r = records[i];
    if (r.fields.size() > table.header.size())
      throw Error(Errc::ParseError, table.source + ":" + std::to_string(r.line) + ": expected " +
                                        std::to_string(table.header.size()) + " fields, got " +
                                        std::to_string(r.fields.size()));
    r.fields.resize(table.header.size());
    table.rows.push_back(std::move(r));
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::UnreadableFile, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void require_columns(const Table& table, const std::vector<std::string>& required) {
  for (const auto& name : required)
    if (table.column(name) == Table::npos)
      throw Error(Errc::ParseError, table.source + ":1: missing column '" + name + "'");
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace semdr::csv
