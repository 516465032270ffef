#include "semdr/engine.hpp"

#include <algorithm>
#include <filesystem>

#include "semdr/error.hpp"
#include "semdr/indexing.hpp"

namespace semdr {
namespace {

void require_threshold(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0))
    throw Error(Errc::InvalidConfig, std::string(name) + " must be in (0,1], got " + std::to_string(v));
}

void require_path(const std::string& p, const char* name) {
  if (p.empty()) throw Error(Errc::InvalidConfig, std::string(name) + " path is required");
  if (!std::filesystem::exists(p)) throw Error(Errc::InvalidConfig, std::string(name) + " path does not exist: " + p);
}

}  // namespace

void EngineConfig::validate(bool check_paths) const {
  require_threshold(anchor_threshold, "anchor threshold");
  require_threshold(group_threshold, "group threshold");
  require_threshold(map_threshold, "map threshold");
  if (k < 2) throw Error(Errc::InvalidConfig, "k must be at least 2, got " + std::to_string(k));
  if (!check_paths) return;
  require_path(triples_path, "triples");
  require_path(corpus_path, "corpus");
  if (taxonomy_path) require_path(*taxonomy_path, "taxonomy");
  if (geo_path) require_path(*geo_path, "geo");
  if (stopwords_path) require_path(*stopwords_path, "stopwords");
  if (cluster_corpus_path) require_path(*cluster_corpus_path, "cluster corpus");
}

Engine build_engine(const EngineConfig& config) {
  config.validate();
  Engine e;
  e.config = config;
  if (config.stopwords_path) e.stopwords = Stopwords::from_file(*config.stopwords_path);

  e.graph = build_concept_graph(read_triples_csv(config.triples_path));
  std::vector<std::pair<std::string, std::string>> external;
  if (config.taxonomy_path) external = read_taxonomy_csv(*config.taxonomy_path);
  e.taxonomy = Taxonomy::build(e.graph, external);

  const auto& tax = e.taxonomy;
  const auto base = e.graph;  // proximity only ever sees Direct concepts, which keep their ids
  Proximity proximity = [&](ConceptId a, ConceptId b) { return wu_palmer(a, b, base, tax); };
  e.graph = compute_semantic_groups(std::move(e.graph), proximity, config.group_threshold);
  e.graph = add_semantic_relations(std::move(e.graph), proximity, config.group_threshold);

  auto docs = load_corpus(config.corpus_path, e.stopwords);
  if (docs.empty()) throw Error(Errc::EmptyCorpus, "no documents in " + config.corpus_path);
  if (config.cluster_corpus_path) {
    auto cluster_docs = load_corpus(*config.cluster_corpus_path, e.stopwords);
    e.model = fit_clusters(cluster_docs, config.k, config.seed, e.stopwords);
  } else {
    e.model = fit_clusters(docs, config.k, config.seed, e.stopwords);
  }
  e.index = build_semantic_index(docs, e.graph, e.model, e.taxonomy, config.map_threshold, e.stopwords);
  for (auto& d : docs) e.registry.upsert(std::move(d));
  e.graph = assign_weights(std::move(e.graph), e.index);
  if (config.geo_path) e.geo = read_geo_csv(*config.geo_path);
  return e;
}

double document_score(const Engine& engine, const std::vector<std::string>& tokens, const DocumentMetadata& doc,
                      std::vector<TokenMatch>* matches) {
  const auto terms = metadata_terms(doc, engine.stopwords);
  double total = 0.0;
  for (const auto& tok : tokens) {
    TokenMatch best{tok, {}, 0.0};
    for (const auto& term : terms) {
      const double s = word_similarity(tok, term, engine.taxonomy);
      if (s > best.score) {
        best.score = s;
        best.term = term;
      }
    }
    total += best.score;
    if (matches) matches->push_back(std::move(best));
  }
  return total;
}

RetrievalResult retrieve(const Engine& engine, std::string_view query, const QueryOptions& options) {
  if (!engine.index.built()) throw Error(Errc::IndexMissing, "engine has no semantic index");
  if (!engine.graph.weighted()) throw Error(Errc::NotBuilt, "graph weights not assigned");

  RetrievalResult r;
  r.query = std::string(query);
  r.tokens = engine.tokenizer().tokenize(query);
  if (options.geo) r.tokens.geo = normalize_label(*options.geo);
  if (options.year) r.tokens.year = options.year;

  r.groups = expand_to_latent(engine.graph,
                              identify_anchors(engine.graph, engine.taxonomy, r.tokens, engine.config.anchor_threshold));
  const bool any_anchor =
      std::any_of(r.groups.begin(), r.groups.end(), [](const TerminalGroup& g) { return !g.terminals.empty(); });
  if (!any_anchor) return r;

  r.tree = greedy_gst(engine.graph, r.groups);
  r.concepts = relevant_concepts(*r.tree, engine.graph);

  DocSet candidates;
  for (auto c : r.concepts) {
    auto d = concept_domain(c, engine.index, engine.graph);
    candidates.insert(d.begin(), d.end());
  }
  std::optional<DocSet> common;
  for (const auto& [anchor, score] : r.tree->anchor_scores) {
    auto d = concept_domain(anchor, engine.index, engine.graph);
    if (!common) {
      common = std::move(d);
      continue;
    }
    DocSet both;
    std::set_intersection(common->begin(), common->end(), d.begin(), d.end(), std::inserter(both, both.end()));
    common = std::move(both);
  }

  std::vector<DocId> kept(candidates.begin(), candidates.end());
  if (r.tokens.geo && !engine.geo.empty()) kept = geo_filter(kept, *r.tokens.geo, engine.geo, engine.registry);
  if (r.tokens.year) {
    std::erase_if(kept, [&](const DocId& id) { return engine.registry.at(id).year != r.tokens.year; });
  }

  for (const auto& id : kept) {
    RankedDoc doc;
    doc.id = id;
    doc.tier = common && common->count(id) ? 1 : 2;
    doc.score = document_score(engine, r.tokens.tokens, engine.registry.at(id), &doc.matches);
    r.docs.push_back(std::move(doc));
  }
  std::sort(r.docs.begin(), r.docs.end(), [](const RankedDoc& a, const RankedDoc& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return r;
}

}  // namespace semdr
