#include "semdr/graph.hpp"

#include <algorithm>

#include "semdr/csv.hpp"
#include "semdr/error.hpp"
#include "semdr/text.hpp"

namespace semdr {

std::string_view to_string(ConceptKind kind) { return kind == ConceptKind::Direct ? "direct" : "latent"; }

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Contextual: return "contextual";
    case RelationKind::Semantic: return "semantic";
    case RelationKind::Membership: return "membership";
  }
  return "contextual";
}

ConceptId SemanticConceptGraph::add_concept(std::string label, ConceptKind kind, std::vector<ConceptId> members,
                                            std::optional<ConceptId> medoid) {
  ConceptId id{static_cast<std::uint32_t>(concepts_.size())};
  std::sort(members.begin(), members.end());
  by_label_.emplace(label, id);
  concepts_.push_back(Concept{id, std::move(label), kind, std::nullopt, std::move(members), medoid});
  adjacency_.emplace_back();
  return id;
}

bool SemanticConceptGraph::add_relation(ConceptId a, ConceptId b, RelationKind kind, std::string predicate) {
  if (!contains(a) || !contains(b)) throw Error(Errc::UnknownConcept, "relation endpoint out of range");
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  auto [it, inserted] = by_pair_.emplace(std::make_pair(a.value, b.value), relations_.size());
  if (!inserted) return false;
  const std::size_t index = relations_.size();
  relations_.push_back(Relation{a, b, kind, std::move(predicate), 1.0});
  adjacency_[a.value].push_back({b, index});
  adjacency_[b.value].push_back({a, index});
  return true;
}

void SemanticConceptGraph::add_hierarchy_link(ConceptId child, ConceptId parent) {
  const auto link = std::make_pair(child, parent);
  if (std::find(hierarchy_.begin(), hierarchy_.end(), link) == hierarchy_.end()) hierarchy_.push_back(link);
}

void SemanticConceptGraph::set_description(ConceptId id, std::string text) {
  if (!contains(id)) throw Error(Errc::UnknownConcept, "concept #" + std::to_string(id.value));
  concepts_[id.value].description = std::move(text);
}

void SemanticConceptGraph::set_weight(std::size_t relation, double weight) { relations_.at(relation).weight = weight; }

std::optional<ConceptId> SemanticConceptGraph::find(std::string_view label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

const Concept& SemanticConceptGraph::concept_at(ConceptId id) const {
  if (!contains(id)) throw Error(Errc::UnknownConcept, "concept #" + std::to_string(id.value));
  return concepts_[id.value];
}

std::optional<std::size_t> SemanticConceptGraph::relation_between(ConceptId a, ConceptId b) const {
  if (b < a) std::swap(a, b);
  auto it = by_pair_.find({a.value, b.value});
  if (it == by_pair_.end()) return std::nullopt;
  return it->second;
}

std::size_t SemanticConceptGraph::count(ConceptKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(concepts_.begin(), concepts_.end(), [kind](const Concept& c) { return c.kind == kind; }));
}

std::vector<SpoTriple> read_triples_csv(const std::string& path) {
  const auto table = csv::read_file(path);
  csv::require_columns(table, {"subject", "predicate", "object"});
  const auto s = table.column("subject");
  const auto p = table.column("predicate");
  const auto o = table.column("object");
  std::vector<SpoTriple> triples;
  triples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (normalize_label(row.fields[s]).empty())
      throw Error(Errc::MalformedTriple, path + ":" + std::to_string(row.line) + ": empty subject");
    triples.push_back({row.fields[s], row.fields[p], row.fields[o]});
  }
  return triples;
}

SemanticConceptGraph build_concept_graph(const std::vector<SpoTriple>& triples) {
  if (triples.empty()) throw Error(Errc::EmptyInput, "no triples");
  SemanticConceptGraph graph;
  auto intern = [&graph](const std::string& label) {
    if (auto id = graph.find(label)) return *id;
    return graph.add_concept(label);
  };
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    const auto subject = normalize_label(t.subject);
    if (subject.empty()) throw Error(Errc::MalformedTriple, "triple #" + std::to_string(i + 1) + ": empty subject");
    const auto trimmed_predicate = normalize_label(t.predicate);
    const auto s = intern(subject);
    if (trimmed_predicate == normalize_label(kDescribes)) {
      graph.set_description(s, t.object);
      continue;
    }
    const auto object = normalize_label(t.object);
    if (object.empty())
      throw Error(Errc::MalformedTriple, "triple #" + std::to_string(i + 1) + ": empty object");
    const auto o = intern(object);
    const bool subclass = trimmed_predicate == normalize_label(kSubClassOf);
    graph.add_relation(s, o, RelationKind::Contextual, subclass ? std::string(kSubClassOf) : trimmed_predicate);
    if (subclass && s != o) graph.add_hierarchy_link(s, o);
  }
  return graph;
}

SemanticConceptGraph compute_semantic_groups(SemanticConceptGraph graph, const Proximity& proximity,
                                             double threshold) {
  if (graph.empty()) throw Error(Errc::NotBuilt, "concept graph is empty");

  std::vector<ConceptId> direct;
  std::vector<std::vector<ConceptId>> emitted;
  for (const auto& c : graph.concepts()) {
    if (c.kind == ConceptKind::Direct)
      direct.push_back(c.id);
    else
      emitted.push_back(c.members);
  }

  struct Star {
    ConceptId medoid;
    std::vector<ConceptId> members;
  };
  std::vector<Star> stars;
  for (auto d : direct) {
    Star star{d, {d}};
    for (auto c : direct)
      if (c != d && proximity(c, d) > threshold) star.members.push_back(c);
    if (star.members.size() < 2) continue;
    std::sort(star.members.begin(), star.members.end());
    stars.push_back(std::move(star));
  }
  std::stable_sort(stars.begin(), stars.end(), [&graph](const Star& x, const Star& y) {
    if (x.members.size() != y.members.size()) return x.members.size() > y.members.size();
    return graph.label(x.medoid) < graph.label(y.medoid);
  });

  for (auto& star : stars) {
    const bool covered = std::any_of(emitted.begin(), emitted.end(), [&star](const std::vector<ConceptId>& group) {
      return std::includes(group.begin(), group.end(), star.members.begin(), star.members.end());
    });
    if (covered) continue;
    std::string label = "group:" + graph.label(star.medoid);
    while (graph.find(label)) label += "'";
    const auto latent = graph.add_concept(label, ConceptKind::Latent, star.members, star.medoid);
    for (auto m : star.members) graph.add_relation(latent, m, RelationKind::Membership, "memberOf");
    emitted.push_back(std::move(star.members));
  }
  return graph;
}

SemanticConceptGraph add_semantic_relations(SemanticConceptGraph graph, const Proximity& proximity,
                                            double threshold) {
  if (graph.empty()) throw Error(Errc::NotBuilt, "concept graph is empty");
  const auto n = graph.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (graph.concept_at({i}).kind != ConceptKind::Direct) continue;
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (graph.concept_at({j}).kind != ConceptKind::Direct) continue;
      if (graph.relation_between({i}, {j})) continue;
      if (proximity({i}, {j}) > threshold) graph.add_relation({i}, {j}, RelationKind::Semantic, "similarTo");
    }
  }
  return graph;
}

}  // namespace semdr
