#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "semdr/error.hpp"
#include "semdr/graph.hpp"
#include "semdr/semantic_index.hpp"
#include "support.hpp"

using namespace semdr;

namespace {

ConceptId id_of(const SemanticConceptGraph& g, const std::string& label) {
  auto id = g.find(label);
  EXPECT_TRUE(id.has_value()) << label;
  return id.value_or(ConceptId{});
}

std::set<std::pair<std::string, std::string>> edge_labels(const SemanticConceptGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& r : g.relations()) {
    auto a = g.label(r.a), b = g.label(r.b);
    if (b < a) std::swap(a, b);
    out.emplace(a, b);
  }
  return out;
}

}  // namespace

TEST(ConceptGraph, SingleSubclassTriple) {
  const auto g = build_concept_graph({{"cotton", "subClassOf", "crops"}});
  EXPECT_EQ(g.size(), 2u);
  ASSERT_EQ(g.relations().size(), 1u);
  EXPECT_EQ(g.relations()[0].kind, RelationKind::Contextual);
  EXPECT_DOUBLE_EQ(g.relations()[0].weight, 1.0);
  ASSERT_EQ(g.hierarchy_links().size(), 1u);
  EXPECT_EQ(g.label(g.hierarchy_links()[0].first), "cotton");
  EXPECT_EQ(g.label(g.hierarchy_links()[0].second), "crops");
}

TEST(ConceptGraph, DescriptionOnlyTriple) {
  const auto g = build_concept_graph({{"silk", "describes", "animal-based thread"}});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.concepts()[0].label, "silk");
  EXPECT_EQ(g.concepts()[0].description, std::optional<std::string>("animal-based thread"));
  EXPECT_TRUE(g.relations().empty());
}

TEST(ConceptGraph, TwelveTripleFixtureMatchesHandAdjacency) {
  const std::vector<SpoTriple> triples{
      {"Kharif", "subClassOf", "Crops"},
      {"Rabi", "subClassOf", "Crops"},
      {"Cotton", "subClassOf", "Kharif"},
      {"Rice", "subClassOf", "Kharif"},
      {"Wheat", "subClassOf", "Rabi"},
      {"Cotton", "subClassOf", "Fiber"},
      {"Jute", "subClassOf", "Fiber"},
      {"Silk", "subClassOf", "Animal Fiber"},
      {"Animal Fiber", "subClassOf", "Fiber"},
      {"Jute Export", "partOf", "Agriculture Export"},
      {"Jute", "exportedAs", "Jute Export"},
      {"Silk", "describes", "thread spun by silkworms"},
  };
  const auto g = build_concept_graph(triples);
  const std::set<std::string> nodes{"kharif", "crops",  "rabi", "cotton",      "rice",       "wheat",
                                    "fiber",  "jute",   "silk", "animal fiber", "jute export", "agriculture export"};
  std::set<std::string> got;
  for (const auto& c : g.concepts()) got.insert(c.label);
  EXPECT_EQ(got, nodes);

  const std::set<std::pair<std::string, std::string>> edges{
      {"crops", "kharif"},       {"crops", "rabi"},       {"cotton", "kharif"},
      {"kharif", "rice"},        {"rabi", "wheat"},       {"cotton", "fiber"},
      {"fiber", "jute"},         {"animal fiber", "silk"}, {"animal fiber", "fiber"},
      {"agriculture export", "jute export"}, {"jute", "jute export"},
  };
  EXPECT_EQ(edge_labels(g), edges);
  EXPECT_EQ(g.hierarchy_links().size(), 9u);
  EXPECT_EQ(g.concept_at(id_of(g, "silk")).description, std::optional<std::string>("thread spun by silkworms"));
  EXPECT_EQ(g.relations()[*g.relation_between(id_of(g, "jute"), id_of(g, "jute export"))].predicate, "exportedas");
}

TEST(ConceptGraph, DuplicateRelationKeepsFirst) {
  const auto g = build_concept_graph({{"a", "p1", "b"}, {"b", "p2", "a"}, {"a", "subClassOf", "b"}});
  ASSERT_EQ(g.relations().size(), 1u);
  EXPECT_EQ(g.relations()[0].predicate, "p1");
}

TEST(ConceptGraph, Errors) {
  auto code_of = [](const std::vector<SpoTriple>& t) {
    try {
      build_concept_graph(t);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;
  };
  EXPECT_EQ(code_of({}), Errc::EmptyInput);
  EXPECT_EQ(code_of({{" ", "p", "b"}}), Errc::MalformedTriple);
  EXPECT_EQ(code_of({{"a", "p", ""}}), Errc::MalformedTriple);

  fx::TempDir dir;
  fx::write_text(dir.path() / "t.csv", "subject,predicate,object\ncotton,subClassOf,crops\n,x,y\n");
  try {
    read_triples_csv(dir / "t.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedTriple);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
  }
  fx::write_text(dir.path() / "bad.csv", "subject,object\na,b\n");
  EXPECT_THROW(read_triples_csv(dir / "bad.csv"), Error);
}

TEST(SemanticGroups, NoPairAboveThreshold) {
  auto g = build_concept_graph({{"a", "r", "b"}, {"b", "r", "c"}});
  const auto before = g.relations().size();
  g = compute_semantic_groups(std::move(g), [](ConceptId, ConceptId) { return 0.5; }, 0.9);
  EXPECT_EQ(g.count(ConceptKind::Latent), 0u);
  EXPECT_EQ(g.relations().size(), before);
}

TEST(SemanticGroups, StarAroundMedoid) {
  // silk and wool are each 0.95 from thread but only 0.6 from each other.
  auto g = build_concept_graph({{"silk", "r", "thread"}, {"wool", "r", "thread"}, {"rice", "r", "crops"}});
  const auto thread = *g.find("thread");
  const auto silk = *g.find("silk"), wool = *g.find("wool");
  auto prox = [&](ConceptId x, ConceptId y) {
    if (x == y) return 1.0;
    if (x == thread || y == thread) {
      const auto other = x == thread ? y : x;
      return other == silk || other == wool ? 0.95 : 0.1;
    }
    if ((x == silk && y == wool) || (x == wool && y == silk)) return 0.6;
    return 0.1;
  };
  const auto before = g;
  g = compute_semantic_groups(std::move(g), prox, 0.9);
  ASSERT_EQ(g.count(ConceptKind::Latent), 1u);
  const auto& latent = g.concepts().back();
  EXPECT_EQ(latent.kind, ConceptKind::Latent);
  EXPECT_EQ(latent.medoid, std::optional<ConceptId>(thread));
  EXPECT_EQ(latent.members, (std::vector<ConceptId>{silk, thread, wool}));
  std::size_t membership = 0;
  for (const auto& r : g.relations()) membership += r.kind == RelationKind::Membership;
  EXPECT_EQ(membership, 3u);

  // Nothing removed, only additions.
  for (std::size_t i = 0; i < before.relations().size(); ++i) {
    EXPECT_EQ(g.relations()[i].a, before.relations()[i].a);
    EXPECT_EQ(g.relations()[i].b, before.relations()[i].b);
  }
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(g.concepts()[i].label, before.concepts()[i].label);

  // Star condition holds post hoc.
  for (auto m : latent.members)
    if (m != *latent.medoid) EXPECT_GT(prox(m, *latent.medoid), 0.9);

  // Rerunning adds nothing: the star is contained in an existing group.
  const auto again = compute_semantic_groups(g, prox, 0.9);
  EXPECT_EQ(again.size(), g.size());
}

TEST(SemanticGroups, SemanticRelationsSkipRelatedPairs) {
  auto g = build_concept_graph({{"a", "r", "b"}, {"c", "r", "d"}});
  g = add_semantic_relations(std::move(g), [](ConceptId, ConceptId) { return 0.95; }, 0.9);
  // 4 choose 2 = 6 pairs, 2 already related.
  EXPECT_EQ(g.relations().size(), 6u);
  std::size_t semantic = 0;
  for (const auto& r : g.relations()) semantic += r.kind == RelationKind::Semantic;
  EXPECT_EQ(semantic, 4u);
}

TEST(Domains, ConceptDomainCases) {
  auto g = build_concept_graph({{"m1", "r", "m2"}, {"lonely", "r", "m1"}});
  const auto m1 = *g.find("m1"), m2 = *g.find("m2"), lonely = *g.find("lonely");
  const auto group = g.add_concept("group:m1", ConceptKind::Latent, {m1, m2}, m1);
  auto index = SemanticIndex::empty_built();
  index.add(m1, "d1");
  index.add(m2, "d2");
  index.add(m2, "d3");
  EXPECT_TRUE(concept_domain(lonely, index, g).empty());
  EXPECT_EQ(concept_domain(m2, index, g), (DocSet{"d2", "d3"}));
  EXPECT_EQ(concept_domain(group, index, g), (DocSet{"d1", "d2", "d3"}));
}

TEST(Domains, JaccardExamples) {
  EXPECT_NEAR(jaccard({"a", "b"}, {"a", "b"}), 1.0, 1e-9);
  EXPECT_NEAR(jaccard({"a"}, {"b"}), 0.0, 1e-9);
  EXPECT_NEAR(jaccard({"a", "b", "c"}, {"b", "c", "d"}), 0.5, 1e-9);
  EXPECT_EQ(jaccard({}, {}), 0.0);
}

TEST(Domains, RelationScoreExamples) {
  auto g = build_concept_graph({{"x", "r", "y"}, {"y", "r", "z"}, {"z", "r", "w"}});
  const auto x = *g.find("x"), y = *g.find("y"), z = *g.find("z"), w = *g.find("w");
  auto index = SemanticIndex::empty_built();
  for (auto d : {"a", "b"}) {
    index.add(x, d);
    index.add(y, d);
  }
  for (auto d : {"a", "b", "c"}) index.add(z, d);
  for (auto d : {"b", "c", "d"}) index.add(w, d);
  EXPECT_NEAR(relation_score(x, y, index, g), 0.0, 1e-9);
  EXPECT_NEAR(relation_score(z, w, index, g), 0.5, 1e-9);

  auto e = build_concept_graph({{"p", "r", "q"}});
  auto idx2 = SemanticIndex::empty_built();
  idx2.add(*e.find("p"), "a");
  idx2.add(*e.find("q"), "b");
  EXPECT_NEAR(relation_score(*e.find("p"), *e.find("q"), idx2, e), 1.0, 1e-9);
}

TEST(Domains, JaccardPropertiesOnRandomSets) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(0, 6), elem(0, 9);
  for (int i = 0; i < 500; ++i) {
    DocSet a, b;
    for (int k = size(rng); k > 0; --k) a.insert("d" + std::to_string(elem(rng)));
    for (int k = size(rng); k > 0; --k) b.insert("d" + std::to_string(elem(rng)));
    const double j = jaccard(a, b);
    EXPECT_EQ(j, jaccard(b, a));
    EXPECT_GE(j, 0.0);
    EXPECT_LE(j, 1.0);
    if (!a.empty()) EXPECT_EQ(jaccard(a, a), 1.0);
  }
}

TEST(Weights, HandComputedTable) {
  // Four edges: a-b, b-c, c-d, d-e. Domains below.
  auto g = build_concept_graph({{"a", "r", "b"}, {"b", "r", "c"}, {"c", "r", "d"}, {"d", "r", "e"}});
  auto index = SemanticIndex::empty_built();
  auto put = [&](const char* label, std::initializer_list<const char*> docs) {
    for (auto d : docs) index.add(*g.find(label), d);
  };
  put("a", {"d1", "d2"});
  put("b", {"d1", "d2"});
  put("c", {"d2", "d3", "d4"});
  put("d", {"d5"});
  // e has no documents.
  const auto weighted = assign_weights(g, index);
  ASSERT_TRUE(weighted.weighted());
  std::map<std::pair<std::string, std::string>, double> expected{
      {{"a", "b"}, 0.0},            // identical domains
      {{"b", "c"}, 1.0 - 1.0 / 4},  // {d2} over {d1,d2,d3,d4}
      {{"c", "d"}, 1.0},            // disjoint
      {{"d", "e"}, 1.0},            // J({d5}, {}) = 0
  };
  for (const auto& r : weighted.relations())
    EXPECT_NEAR(r.weight, expected.at({weighted.label(r.a), weighted.label(r.b)}), 1e-9);

  // Both domains empty gives 1 as well.
  auto h = build_concept_graph({{"p", "r", "q"}});
  EXPECT_DOUBLE_EQ(assign_weights(h, SemanticIndex::empty_built()).relations()[0].weight, 1.0);

  // Idempotent.
  const auto twice = assign_weights(weighted, index);
  for (std::size_t i = 0; i < twice.relations().size(); ++i)
    EXPECT_EQ(twice.relations()[i].weight, weighted.relations()[i].weight);
}

TEST(Weights, RequiresBuiltIndex) {
  auto g = build_concept_graph({{"p", "r", "q"}});
  try {
    assign_weights(g, SemanticIndex{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexMissing);
  }
}

TEST(Index, ReverseMappingStaysConsistent) {
  auto index = SemanticIndex::empty_built();
  index.add(ConceptId{1}, "d1");
  index.add(ConceptId{2}, "d1");
  index.add(ConceptId{2}, "d2");
  index.remove_document("d1");
  EXPECT_FALSE(index.contains(ConceptId{1}));
  EXPECT_EQ(index.documents_of(ConceptId{2}), DocSet{"d2"});
  EXPECT_TRUE(index.concepts_of("d1").empty());
  EXPECT_EQ(index.pair_count(), 1u);
}
