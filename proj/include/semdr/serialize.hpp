#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "semdr/engine.hpp"
#include "semdr/join.hpp"

namespace semdr {

inline constexpr std::string_view kStateFormat = "semdr-state";
inline constexpr int kStateVersion = 1;

/// Pretty JSON with sorted keys and a trailing newline.
std::string render_json(const nlohmann::json& j);

/// {cost, edges: [[u, v, w]], groups: {token: [...]}, nodes: [...]}, labels throughout.
nlohmann::json tree_json(const GroupSteinerTree& tree, const SemanticConceptGraph& graph);

/// {query, concepts, docs: [{id, score, tier}], tree?}; `explain` adds the
/// tree, the anchor groups and per-token matches.
nlohmann::json result_json(const RetrievalResult& result, const SemanticConceptGraph& graph, bool explain,
                           std::size_t top = 0);

nlohmann::json graph_json(const SemanticConceptGraph& graph);
nlohmann::json joined_json(const JoinedTable& table);

/// Self-describing engine snapshot.
std::string serialize_state(const Engine& engine);
/// CorruptState on malformed input or a format/version mismatch.
Engine deserialize_state(std::string_view text);

void save_state(const Engine& engine, const std::string& path);
Engine load_state(const std::string& path);

}  // namespace semdr
