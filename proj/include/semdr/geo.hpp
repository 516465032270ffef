#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semdr/documents.hpp"

namespace semdr {

enum class GeoLevel { Country = 0, State = 1, District = 2, Taluk = 3, Village = 4 };

std::string_view to_string(GeoLevel level);
GeoLevel parse_geo_level(std::string_view text);

struct GeoNode {
  std::string name;
  GeoLevel level = GeoLevel::Country;
  std::optional<std::string> parent;
  std::set<std::string> neighbors;

  bool operator==(const GeoNode&) const = default;
};

/// Country > State > District > Taluk > Village hierarchy with same-level
/// neighbour links.
class GeoOntology {
 public:
  /// Validates and symmetrises neighbour links.
  static GeoOntology from_nodes(std::vector<GeoNode> nodes);

  bool empty() const { return nodes_.empty(); }
  bool contains(std::string_view name) const { return nodes_.count(std::string(name)) > 0; }
  const GeoNode& at(std::string_view name) const;
  const std::map<std::string, GeoNode>& nodes() const { return nodes_; }
  std::set<std::string> locations() const;

  /// True when `name` equals `ancestor` or lies beneath it.
  bool within(std::string_view name, std::string_view ancestor) const;

  bool operator==(const GeoOntology&) const = default;

 private:
  std::map<std::string, GeoNode> nodes_;
};

/// Reads a `name,level,parent,neighbors` CSV (neighbours ';'-separated).
GeoOntology read_geo_csv(const std::string& path);

/// Keeps documents tagged with `tag` or a place beneath it. When that keeps
/// nothing, one fallback round keeps documents under the tag's neighbours or
/// its parent instead. Input order is preserved.
std::vector<DocId> geo_filter(const std::vector<DocId>& docs, std::string_view tag, const GeoOntology& onto,
                              const DocumentRegistry& registry);

}  // namespace semdr
