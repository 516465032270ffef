#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semdr {

struct ConceptId {
  std::uint32_t value = 0;
  auto operator<=>(const ConceptId&) const = default;
};

enum class ConceptKind { Direct, Latent };
enum class RelationKind { Contextual, Semantic, Membership };

std::string_view to_string(ConceptKind kind);
std::string_view to_string(RelationKind kind);

struct SpoTriple {
  std::string subject;
  std::string predicate;
  std::string object;
};

inline constexpr std::string_view kSubClassOf = "subClassOf";
inline constexpr std::string_view kDescribes = "describes";

struct Concept {
  ConceptId id;
  std::string label;
  ConceptKind kind = ConceptKind::Direct;
  std::optional<std::string> description;
  std::vector<ConceptId> members;   // sorted; non-empty iff Latent
  std::optional<ConceptId> medoid;  // Latent only
};

struct Relation {
  ConceptId a;  // a < b
  ConceptId b;
  RelationKind kind = RelationKind::Contextual;
  std::string predicate;
  double weight = 1.0;
};

/// G = (C, R, W): undirected, at most one relation per unordered pair.
class SemanticConceptGraph {
 public:
  struct Neighbor {
    ConceptId to;
    std::size_t relation;
  };

  ConceptId add_concept(std::string label, ConceptKind kind = ConceptKind::Direct,
                        std::vector<ConceptId> members = {}, std::optional<ConceptId> medoid = {});

  /// Returns false (and changes nothing) when the pair is already related.
  bool add_relation(ConceptId a, ConceptId b, RelationKind kind, std::string predicate = {});

  /// Records a child -> parent hierarchy link (subClassOf), kept separately
  /// from relations so the taxonomy keeps its direction.
  void add_hierarchy_link(ConceptId child, ConceptId parent);

  void set_description(ConceptId id, std::string text);
  void set_weight(std::size_t relation, double weight);
  void mark_weighted(bool weighted = true) { weighted_ = weighted; }

  std::optional<ConceptId> find(std::string_view label) const;
  bool contains(ConceptId id) const { return id.value < concepts_.size(); }
  const Concept& concept_at(ConceptId id) const;
  const std::string& label(ConceptId id) const { return concept_at(id).label; }
  std::optional<std::size_t> relation_between(ConceptId a, ConceptId b) const;

  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<Neighbor>& neighbors(ConceptId id) const { return adjacency_.at(id.value); }
  const std::vector<std::pair<ConceptId, ConceptId>>& hierarchy_links() const { return hierarchy_; }

  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }
  bool weighted() const { return weighted_; }
  std::size_t count(ConceptKind kind) const;

 private:
  std::vector<Concept> concepts_;
  std::vector<Relation> relations_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::pair<ConceptId, ConceptId>> hierarchy_;
  std::map<std::string, ConceptId, std::less<>> by_label_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> by_pair_;
  bool weighted_ = false;
};

/// Reads a `subject,predicate,object` CSV.
std::vector<SpoTriple> read_triples_csv(const std::string& path);

SemanticConceptGraph build_concept_graph(const std::vector<SpoTriple>& triples);

using Proximity = std::function<double(ConceptId, ConceptId)>;

/// Adds one Latent concept per maximal medoid star
/// S_d = {d} + {c : proximity(c, d) > threshold} over Direct concepts, skipping
/// stars contained in an already emitted (or pre-existing) group. Stars are
/// emitted largest first, ties by medoid label.
SemanticConceptGraph compute_semantic_groups(SemanticConceptGraph graph, const Proximity& proximity,
                                             double threshold);

/// Semantic relations between Direct pairs above the threshold that are not
/// already related.
SemanticConceptGraph add_semantic_relations(SemanticConceptGraph graph, const Proximity& proximity,
                                            double threshold);

}  // namespace semdr
