#include "semdr/serialize.hpp"

#include <fstream>
#include <sstream>

#include "semdr/error.hpp"

namespace semdr {

using nlohmann::json;

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

json tree_json(const GroupSteinerTree& tree, const SemanticConceptGraph& graph) {
  json j;
  j["cost"] = tree.cost;
  j["edges"] = json::array();
  for (const auto& e : tree.edges) j["edges"].push_back({graph.label(e.a), graph.label(e.b), e.weight});
  j["groups"] = json::object();
  for (const auto& [token, terms] : tree.groups) {
    json labels = json::array();
    for (auto c : terms) labels.push_back(graph.label(c));
    j["groups"][token] = labels;
  }
  std::vector<std::string> nodes;
  for (auto c : tree.nodes) nodes.push_back(graph.label(c));
  std::sort(nodes.begin(), nodes.end());
  j["nodes"] = nodes;
  return j;
}

json result_json(const RetrievalResult& result, const SemanticConceptGraph& graph, bool explain, std::size_t top) {
  json j;
  j["query"] = result.query;
  j["concepts"] = json::array();
  for (auto c : result.concepts) j["concepts"].push_back(graph.label(c));
  j["docs"] = json::array();
  const std::size_t n = top ? std::min(top, result.docs.size()) : result.docs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = result.docs[i];
    json doc = {{"id", d.id}, {"score", d.score}, {"tier", d.tier}};
    if (explain) {
      doc["matches"] = json::array();
      for (const auto& m : d.matches) doc["matches"].push_back({{"token", m.token}, {"term", m.term}, {"score", m.score}});
    }
    j["docs"].push_back(std::move(doc));
  }
  if (explain) {
    if (result.tree) j["tree"] = tree_json(*result.tree, graph);
    j["tokens"] = result.tokens.tokens;
    if (result.tokens.geo) j["geo"] = *result.tokens.geo;
    if (result.tokens.year) j["year"] = *result.tokens.year;
    j["anchors"] = json::object();
    for (const auto& g : result.groups) {
      json a = json::object();
      for (const auto& [c, s] : g.terminals) a[graph.label(c)] = s;
      j["anchors"][g.token] = a;
    }
  }
  return j;
}

json graph_json(const SemanticConceptGraph& graph) {
  json j;
  j["concepts"] = json::array();
  for (const auto& c : graph.concepts()) {
    json cj = {{"id", c.id.value}, {"label", c.label}, {"kind", std::string(to_string(c.kind))}};
    if (c.description) cj["description"] = *c.description;
    if (c.kind == ConceptKind::Latent) {
      json members = json::array();
      for (auto m : c.members) members.push_back(m.value);
      cj["members"] = members;
      if (c.medoid) cj["medoid"] = c.medoid->value;
    }
    j["concepts"].push_back(std::move(cj));
  }
  j["relations"] = json::array();
  for (const auto& r : graph.relations())
    j["relations"].push_back({{"a", r.a.value},
                              {"b", r.b.value},
                              {"kind", std::string(to_string(r.kind))},
                              {"predicate", r.predicate},
                              {"weight", r.weight}});
  j["hierarchy"] = json::array();
  for (const auto& [child, parent] : graph.hierarchy_links()) j["hierarchy"].push_back({child.value, parent.value});
  j["weighted"] = graph.weighted();
  return j;
}

json joined_json(const JoinedTable& table) {
  json steps = json::array();
  for (const auto& s : table.steps)
    steps.push_back({{"doc", s.doc}, {"left", s.left_column}, {"right", s.right_column}, {"name_score", s.name_score},
                     {"overlap", s.overlap}});
  return {{"sources", table.sources}, {"steps", steps}, {"header", table.header}, {"rows", table.rows}};
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

ConceptKind concept_kind(const std::string& s) {
  if (s == "direct") return ConceptKind::Direct;
  if (s == "latent") return ConceptKind::Latent;
  throw Error(Errc::CorruptState, "unknown concept kind '" + s + "'");
}

RelationKind relation_kind(const std::string& s) {
  if (s == "contextual") return RelationKind::Contextual;
  if (s == "semantic") return RelationKind::Semantic;
  if (s == "membership") return RelationKind::Membership;
  throw Error(Errc::CorruptState, "unknown relation kind '" + s + "'");
}

json config_json(const EngineConfig& c) {
  return {{"anchor_threshold", c.anchor_threshold},
          {"group_threshold", c.group_threshold},
          {"map_threshold", c.map_threshold},
          {"k", c.k},
          {"seed", c.seed},
          {"triples", c.triples_path},
          {"corpus", c.corpus_path},
          {"taxonomy", opt(c.taxonomy_path)},
          {"geo", opt(c.geo_path)},
          {"stopwords", opt(c.stopwords_path)},
          {"cluster_corpus", opt(c.cluster_corpus_path)}};
}

EngineConfig config_from(const json& j) {
  EngineConfig c;
  c.anchor_threshold = j.at("anchor_threshold").get<double>();
  c.group_threshold = j.at("group_threshold").get<double>();
  c.map_threshold = j.at("map_threshold").get<double>();
  c.k = j.at("k").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.triples_path = j.at("triples").get<std::string>();
  c.corpus_path = j.at("corpus").get<std::string>();
  c.taxonomy_path = get_opt<std::string>(j, "taxonomy");
  c.geo_path = get_opt<std::string>(j, "geo");
  c.stopwords_path = get_opt<std::string>(j, "stopwords");
  c.cluster_corpus_path = get_opt<std::string>(j, "cluster_corpus");
  return c;
}

json document_json(const DocumentMetadata& d) {
  json words = json::array();
  for (const auto& wc : d.frequent_words) words.push_back({wc.word, wc.count});
  return {{"id", d.id},
          {"path", d.path},
          {"kind", std::string(to_string(d.kind))},
          {"attributes", d.attributes},
          {"value_domains", d.value_domains},
          {"frequent_words", words},
          {"description", d.description},
          {"geo", opt(d.geo)},
          {"year", opt(d.year)}};
}

DocumentMetadata document_from(const json& j) {
  DocumentMetadata d;
  d.id = j.at("id").get<std::string>();
  d.path = j.at("path").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "structured") {
    d.kind = SourceKind::Structured;
  } else if (kind == "unstructured") {
    d.kind = SourceKind::Unstructured;
  } else {
    throw Error(Errc::CorruptState, "unknown source kind '" + kind + "'");
  }
  d.attributes = j.at("attributes").get<std::vector<std::string>>();
  d.value_domains = j.at("value_domains").get<std::vector<std::vector<std::string>>>();
  for (const auto& wc : j.at("frequent_words")) d.frequent_words.push_back({wc.at(0).get<std::string>(), wc.at(1).get<int>()});
  d.description = j.at("description").get<std::string>();
  d.geo = get_opt<std::string>(j, "geo");
  d.year = get_opt<int>(j, "year");
  return d;
}

json model_json(const ClusterModel& m) {
  return {{"k", m.k},
          {"seed", m.seed},
          {"vocabulary", m.vocabulary},
          {"idf", m.idf},
          {"centroids", m.centroids},
          {"top_terms", m.top_terms},
          {"training_docs", m.training_docs},
          {"training_assignments", m.training_assignments}};
}

ClusterModel model_from(const json& j) {
  ClusterModel m;
  m.k = j.at("k").get<std::size_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  m.idf = j.at("idf").get<std::vector<double>>();
  m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
  m.top_terms = j.at("top_terms").get<std::vector<std::vector<std::string>>>();
  m.training_docs = j.at("training_docs").get<std::vector<std::string>>();
  m.training_assignments = j.at("training_assignments").get<std::vector<std::size_t>>();
  return m;
}

SemanticConceptGraph graph_from(const json& j) {
  SemanticConceptGraph g;
  for (const auto& cj : j.at("concepts")) {
    std::vector<ConceptId> members;
    if (cj.contains("members"))
      for (const auto& m : cj.at("members")) members.push_back(ConceptId{m.get<std::uint32_t>()});
    std::optional<ConceptId> medoid;
    if (cj.contains("medoid")) medoid = ConceptId{cj.at("medoid").get<std::uint32_t>()};
    const auto id = g.add_concept(cj.at("label").get<std::string>(), concept_kind(cj.at("kind").get<std::string>()),
                                  std::move(members), medoid);
    if (id.value != cj.at("id").get<std::uint32_t>()) throw Error(Errc::CorruptState, "concept ids out of order");
    if (cj.contains("description")) g.set_description(id, cj.at("description").get<std::string>());
  }
  std::size_t i = 0;
  for (const auto& rj : j.at("relations")) {
    if (!g.add_relation(ConceptId{rj.at("a").get<std::uint32_t>()}, ConceptId{rj.at("b").get<std::uint32_t>()},
                        relation_kind(rj.at("kind").get<std::string>()), rj.at("predicate").get<std::string>()))
      throw Error(Errc::CorruptState, "duplicate relation");
    g.set_weight(i++, rj.at("weight").get<double>());
  }
  for (const auto& h : j.at("hierarchy"))
    g.add_hierarchy_link(ConceptId{h.at(0).get<std::uint32_t>()}, ConceptId{h.at(1).get<std::uint32_t>()});
  g.mark_weighted(j.at("weighted").get<bool>());
  return g;
}

json geo_json(const GeoOntology& geo) {
  json out = json::array();
  for (const auto& [name, n] : geo.nodes())
    out.push_back({{"name", name}, {"level", std::string(to_string(n.level))}, {"parent", opt(n.parent)}, {"neighbors", n.neighbors}});
  return out;
}

GeoOntology geo_from(const json& j) {
  std::vector<GeoNode> nodes;
  for (const auto& nj : j) {
    GeoNode n;
    n.name = nj.at("name").get<std::string>();
    n.level = parse_geo_level(nj.at("level").get<std::string>());
    n.parent = get_opt<std::string>(nj, "parent");
    n.neighbors = nj.at("neighbors").get<std::set<std::string>>();
    nodes.push_back(std::move(n));
  }
  return GeoOntology::from_nodes(std::move(nodes));
}

}  // namespace

std::string serialize_state(const Engine& e) {
  json j;
  j["format"] = kStateFormat;
  j["version"] = kStateVersion;
  j["config"] = config_json(e.config);
  j["stopwords"] = e.stopwords.words();
  j["graph"] = graph_json(e.graph);
  j["taxonomy"] = e.taxonomy.external_links();
  j["documents"] = json::array();
  for (const auto& [id, d] : e.registry.all()) j["documents"].push_back(document_json(d));
  j["clusters"] = model_json(e.model);
  j["index"] = json::array();
  for (const auto& [c, docs] : e.index.forward()) j["index"].push_back({c.value, docs});
  j["index_built"] = e.index.built();
  j["geo"] = geo_json(e.geo);
  return render_json(j);
}

Engine deserialize_state(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw Error(Errc::CorruptState, std::string("state is not valid JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != kStateFormat)
    throw Error(Errc::CorruptState, "not a state file (missing format header)");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kStateVersion)
    throw Error(Errc::CorruptState, "state version " + (j.contains("version") ? j["version"].dump() : std::string("?")) +
                                        ", this build reads version " + std::to_string(kStateVersion));
  try {
    Engine e;
    e.config = config_from(j.at("config"));
    e.stopwords = Stopwords(j.at("stopwords").get<std::set<std::string>>());
    e.graph = graph_from(j.at("graph"));
    e.taxonomy = Taxonomy::build(e.graph, j.at("taxonomy").get<std::vector<std::pair<std::string, std::string>>>());
    for (const auto& dj : j.at("documents")) e.registry.upsert(document_from(dj));
    e.model = model_from(j.at("clusters"));
    for (const auto& entry : j.at("index")) {
      const ConceptId c{entry.at(0).get<std::uint32_t>()};
      for (const auto& d : entry.at(1)) e.index.add(c, d.get<std::string>());
    }
    if (j.at("index_built").get<bool>()) e.index.mark_built();
    e.geo = geo_from(j.at("geo"));
    return e;
  } catch (const json::exception& ex) {
    throw Error(Errc::CorruptState, std::string("malformed state: ") + ex.what());
  } catch (const Error& ex) {
    if (ex.code() == Errc::CorruptState) throw;
    throw Error(Errc::CorruptState, std::string("inconsistent state: ") + ex.what());
  }
}

void save_state(const Engine& engine, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::UnreadableFile, "cannot write " + path);
  out << serialize_state(engine);
  if (!out) throw Error(Errc::UnreadableFile, "failed writing " + path);
}

Engine load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::UnreadableFile, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_state(ss.str());
}

}  // namespace semdr
