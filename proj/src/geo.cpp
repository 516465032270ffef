#include "semdr/geo.hpp"

#include "semdr/csv.hpp"
#include "semdr/error.hpp"
#include "semdr/text.hpp"

namespace semdr {

std::string_view to_string(GeoLevel level) {
  switch (level) {
    case GeoLevel::Country: return "country";
    case GeoLevel::State: return "state";
    case GeoLevel::District: return "district";
    case GeoLevel::Taluk: return "taluk";
    case GeoLevel::Village: return "village";
  }
  return "country";
}

GeoLevel parse_geo_level(std::string_view text) {
  const auto t = normalize_label(text);
  if (t == "country") return GeoLevel::Country;
  if (t == "state") return GeoLevel::State;
  if (t == "district") return GeoLevel::District;
  if (t == "taluk" || t == "county") return GeoLevel::Taluk;
  if (t == "village") return GeoLevel::Village;
  throw Error(Errc::ParseError, "unknown geographic level '" + std::string(text) + "'");
}

GeoOntology GeoOntology::from_nodes(std::vector<GeoNode> nodes) {
  GeoOntology onto;
  for (auto& n : nodes) {
    auto name = n.name;
    if (!onto.nodes_.emplace(name, std::move(n)).second)
      throw Error(Errc::ParseError, "duplicate location '" + name + "'");
  }
  for (auto& [name, node] : onto.nodes_) {
    if (node.parent) {
      auto it = onto.nodes_.find(*node.parent);
      if (it == onto.nodes_.end())
        throw Error(Errc::ParseError, "location '" + name + "' has unknown parent '" + *node.parent + "'");
      if (static_cast<int>(it->second.level) >= static_cast<int>(node.level))
        throw Error(Errc::ParseError, "parent of '" + name + "' is not at a broader level");
    }
    for (const auto& nb : node.neighbors) {
      auto it = onto.nodes_.find(nb);
      if (it == onto.nodes_.end())
        throw Error(Errc::ParseError, "location '" + name + "' has unknown neighbour '" + nb + "'");
      if (it->second.level != node.level)
        throw Error(Errc::ParseError, "neighbours '" + name + "' and '" + nb + "' differ in level");
    }
  }
  for (auto& [name, node] : onto.nodes_)
    for (const auto& nb : std::set<std::string>(node.neighbors)) onto.nodes_.at(nb).neighbors.insert(name);
  return onto;
}

const GeoNode& GeoOntology::at(std::string_view name) const {
  auto it = nodes_.find(std::string(name));
  if (it == nodes_.end()) throw Error(Errc::UnknownLocation, std::string(name));
  return it->second;
}

std::set<std::string> GeoOntology::locations() const {
  std::set<std::string> out;
  for (const auto& [name, node] : nodes_) out.insert(name);
  return out;
}

bool GeoOntology::within(std::string_view name, std::string_view ancestor) const {
  auto it = nodes_.find(std::string(name));
  while (it != nodes_.end()) {
    if (it->first == ancestor) return true;
    if (!it->second.parent) break;
    it = nodes_.find(*it->second.parent);
  }
  return false;
}

GeoOntology read_geo_csv(const std::string& path) {
  const auto table = csv::read_file(path);
  csv::require_columns(table, {"name", "level", "parent", "neighbors"});
  const auto name_col = table.column("name");
  const auto level_col = table.column("level");
  const auto parent_col = table.column("parent");
  const auto nb_col = table.column("neighbors");
  std::vector<GeoNode> nodes;
  for (const auto& row : table.rows) {
    GeoNode node;
    node.name = normalize_label(row.fields[name_col]);
    if (node.name.empty()) throw Error(Errc::ParseError, path + ":" + std::to_string(row.line) + ": empty name");
    try {
      node.level = parse_geo_level(row.fields[level_col]);
    } catch (const Error& e) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(row.line) + ": " + e.what());
    }
    auto parent = normalize_label(row.fields[parent_col]);
    if (!parent.empty()) node.parent = std::move(parent);
    std::string current;
    for (char c : row.fields[nb_col] + ";") {
      if (c == ';') {
        auto nb = normalize_label(current);
        if (!nb.empty()) node.neighbors.insert(std::move(nb));
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    nodes.push_back(std::move(node));
  }
  try {
    return GeoOntology::from_nodes(std::move(nodes));
  } catch (const Error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

std::vector<DocId> geo_filter(const std::vector<DocId>& docs, std::string_view tag, const GeoOntology& onto,
                              const DocumentRegistry& registry) {
  const auto& node = onto.at(tag);
  auto keep_if = [&](auto&& predicate) {
    std::vector<DocId> out;
    for (const auto& d : docs) {
      const auto& geo = registry.at(d).geo;
      if (geo && predicate(*geo)) out.push_back(d);
    }
    return out;
  };
  auto direct = keep_if([&](const std::string& g) { return onto.within(g, tag); });
  if (!direct.empty()) return direct;
  return keep_if([&](const std::string& g) {
    if (node.parent && onto.within(g, *node.parent)) return true;
    for (const auto& nb : node.neighbors)
      if (onto.within(g, nb)) return true;
    return false;
  });
}

}  // namespace semdr
