#include <gtest/gtest.h>

#include <map>

#include "semdr/clustering.hpp"
#include "semdr/documents.hpp"
#include "semdr/error.hpp"
#include "semdr/indexing.hpp"
#include "support.hpp"

using namespace semdr;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ParseError;
}

// Four topics, five docs each; vocabularies only overlap on filler words.
const std::map<std::string, std::vector<std::string>> kTopics{
    {"silk", {"silk", "cocoon", "reeling", "mulberry", "silkworm", "sericulture"}},
    {"rice", {"rice", "paddy", "irrigation", "transplanting", "harvest", "grain"}},
    {"jute", {"jute", "hessian", "retting", "bast", "gunny", "sacks"}},
    {"wool", {"wool", "sheep", "shearing", "fleece", "flock", "merino"}},
};

std::string topic_text(const std::vector<std::string>& words, int variant) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const int reps = 1 + static_cast<int>((i + static_cast<std::size_t>(variant)) % 3);
    for (int r = 0; r < reps; ++r) text += words[i] + " ";
  }
  return text + "report district season";
}

void write_topic_corpus(const std::filesystem::path& dir) {
  for (const auto& [topic, words] : kTopics)
    for (int v = 0; v < 5; ++v)
      fx::write_text(dir / (topic + "_" + std::to_string(v) + ".txt"), topic_text(words, v));
}

}  // namespace

TEST(Metadata, EmptyTextIsEmptyDocument) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "empty.txt", "");
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "empty.txt"); }), Errc::EmptyDocument);
  fx::write_text(dir.path() / "stop.txt", "the of and 2016 a");
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "stop.txt"); }), Errc::EmptyDocument);
  fx::write_text(dir.path() / "empty.csv", "");
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "empty.csv"); }), Errc::EmptyDocument);
}

TEST(Metadata, CsvHeaderAndValueDomains) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "yield.csv", "district,crop,yield\nMandya,Rice,3.1\nMysuru,Rice,2.7\nMandya,Ragi,\n");
  const auto doc = extract_metadata(dir / "yield.csv");
  EXPECT_EQ(doc.kind, SourceKind::Structured);
  EXPECT_EQ(doc.id, "yield.csv");
  EXPECT_EQ(doc.attributes, (std::vector<std::string>{"district", "crop", "yield"}));
  ASSERT_EQ(doc.value_domains.size(), 3u);
  EXPECT_EQ(doc.value_domains[0], (std::vector<std::string>{"mandya", "mysuru"}));
  EXPECT_EQ(doc.value_domains[1], (std::vector<std::string>{"ragi", "rice"}));
  EXPECT_EQ(doc.value_domains[2], (std::vector<std::string>{"2.7", "3.1"}));
}

TEST(Metadata, ValueDomainCap) {
  fx::TempDir dir;
  std::string text = "id\n";
  for (int i = 0; i < 1500; ++i) text += "v" + std::to_string(i) + "\n";
  fx::write_text(dir.path() / "big.csv", text);
  EXPECT_EQ(extract_metadata(dir / "big.csv").value_domains[0].size(), kValueDomainCap);
}

TEST(Metadata, FrequentWordsMatchHandCount) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "jute.txt",
                      "Jute export rose. Jute export markets in Kolkata took raw jute and hessian; "
                      "the hessian trade grew. Export of jute goods in 2017.");
  const auto doc = extract_metadata(dir / "jute.txt");
  EXPECT_EQ(doc.kind, SourceKind::Unstructured);
  // jute x4, export x3, hessian x2, then singletons alphabetically.
  const std::vector<WordCount> expected{{"jute", 4},    {"export", 3},  {"hessian", 2}, {"goods", 1},
                                        {"grew", 1},    {"kolkata", 1}, {"markets", 1}, {"raw", 1},
                                        {"rose", 1},    {"took", 1},    {"trade", 1}};
  EXPECT_EQ(doc.frequent_words, expected);
}

TEST(Metadata, FrequentWordLimitAndSidecar) {
  fx::TempDir dir;
  std::string text;
  for (int i = 0; i < 40; ++i) text += "word" + std::string(1, static_cast<char>('a' + i % 26)) + std::to_string(i) + " ";
  fx::write_text(dir.path() / "many.txt", text);
  fx::write_text(dir.path() / "many.meta.json",
                      R"({"description": "Survey notes", "geo": "  Mandya ", "year": 2018})");
  const auto doc = extract_metadata(dir / "many.txt");
  EXPECT_EQ(doc.frequent_words.size(), kFrequentWordLimit);
  EXPECT_EQ(doc.description, "Survey notes");
  EXPECT_EQ(doc.geo, std::optional<std::string>("mandya"));
  EXPECT_EQ(doc.year, std::optional<int>(2018));
  for (const auto& wc : doc.frequent_words) EXPECT_EQ(wc.word, normalize_label(wc.word));

  fx::write_text(dir.path() / "many.meta.json", "{not json");
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "many.txt"); }), Errc::ParseError);
}

TEST(Metadata, UnsupportedAndMissing) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "x.pdf", "binary");
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "x.pdf"); }), Errc::UnsupportedFormat);
  EXPECT_EQ(code_of([&] { extract_metadata(dir / "missing.txt"); }), Errc::UnreadableFile);
  EXPECT_EQ(code_of([&] { load_corpus(dir / "nowhere"); }), Errc::UnreadableFile);
  EXPECT_EQ(code_of([&] { load_corpus(dir.path().string()); }), Errc::UnsupportedFormat);
}

TEST(Metadata, MetadataTermsDropStopwordsAndNumbers) {
  DocumentMetadata doc;
  doc.kind = SourceKind::Structured;
  doc.attributes = {"district", "crop yield"};
  doc.value_domains = {{"mandya"}, {"3", "high"}};
  doc.description = "The rice table";
  EXPECT_EQ(metadata_terms(doc, Stopwords{}),
            (std::vector<std::string>{"crop", "district", "high", "mandya", "rice", "table", "yield"}));
}

TEST(Registry, UpsertReplacesAndUnknownThrows) {
  DocumentRegistry reg;
  DocumentMetadata d;
  d.id = "a.txt";
  d.description = "first";
  reg.upsert(d);
  d.description = "second";
  reg.upsert(d);
  EXPECT_EQ(reg.size(), 1u);
  EXPECT_EQ(reg.at("a.txt").description, "second");
  EXPECT_EQ(code_of([&] { reg.at("b.txt"); }), Errc::UnknownDocument);
}

TEST(Clusters, DisjointPairSplits) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "a.txt", "silk cocoon reeling silk");
  fx::write_text(dir.path() / "b.txt", "tractor plough diesel tractor");
  const auto corpus = load_corpus(dir.path().string());
  const auto model = fit_clusters(corpus, 2, 42);
  ASSERT_EQ(model.training_assignments.size(), 2u);
  EXPECT_NE(model.training_assignments[0], model.training_assignments[1]);
  for (const auto& c : model.centroids) EXPECT_EQ(c.size(), model.vocabulary.size());
  for (const auto& t : model.top_terms) EXPECT_FALSE(t.empty());
}

TEST(Clusters, SameSeedIsBitIdentical) {
  fx::TempDir dir;
  write_topic_corpus(dir.path());
  const auto corpus = load_corpus(dir.path().string());
  const auto a = fit_clusters(corpus, 4, 7);
  const auto b = fit_clusters(corpus, 4, 7);
  EXPECT_TRUE(a == b);
}

TEST(Clusters, TwentyDocsFourTopics) {
  fx::TempDir dir;
  write_topic_corpus(dir.path());
  const auto corpus = load_corpus(dir.path().string());
  ASSERT_EQ(corpus.size(), 20u);
  const auto model = fit_clusters(corpus, 4, 42);
  // Every topic lands in exactly one cluster and no two topics share one.
  std::map<std::string, std::set<std::size_t>> by_topic;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto topic = corpus[i].id.substr(0, corpus[i].id.find('_'));
    by_topic[topic].insert(model.training_assignments[i]);
    EXPECT_EQ(assign_cluster(model, corpus[i]), model.training_assignments[i]);
  }
  std::set<std::size_t> used;
  for (const auto& [topic, clusters] : by_topic) {
    EXPECT_EQ(clusters.size(), 1u) << topic;
    used.insert(*clusters.begin());
    // The topic's own name is among its cluster's top terms.
    const auto& top = model.top_terms[*clusters.begin()];
    EXPECT_NE(std::find(top.begin(), top.end(), topic), top.end()) << topic;
  }
  EXPECT_EQ(used.size(), 4u);
}

TEST(Clusters, Errors) {
  fx::TempDir dir;
  fx::write_text(dir.path() / "a.txt", "silk");
  const auto corpus = load_corpus(dir.path().string());
  EXPECT_EQ(code_of([&] { fit_clusters(corpus, 1, 1); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([&] { fit_clusters(corpus, 2, 1); }), Errc::TooFewDocuments);
  EXPECT_EQ(code_of([&] { assign_cluster(ClusterModel{}, corpus[0]); }), Errc::ModelMissing);
}

namespace {

struct IndexFixture {
  fx::TempDir dir;
  std::vector<DocumentMetadata> corpus;
  SemanticConceptGraph graph;
  Taxonomy tax;
  ClusterModel model;

  IndexFixture() {
    write_topic_corpus(dir.path());
    corpus = load_corpus(dir.path().string());
    graph = build_concept_graph({{"silk", "subClassOf", "animal fiber"},
                                 {"wool", "subClassOf", "animal fiber"},
                                 {"cocoon", "producedBy", "silk"},
                                 {"rice", "subClassOf", "cereal"},
                                 {"paddy", "stageOf", "rice"},
                                 {"jute", "subClassOf", "plant fiber"},
                                 {"hessian", "madeFrom", "jute"},
                                 {"sheep", "yields", "wool"},
                                 {"tractor", "usedFor", "harvest"},
                                 {"fertilizer", "appliedTo", "cereal"}});
    tax = Taxonomy::build(graph);
    model = fit_clusters(corpus, 4, 42);
  }
};

}  // namespace

TEST(SemanticIndexBuild, EmptyCorpusGivesEmptyBuiltIndex) {
  IndexFixture f;
  const auto index = build_semantic_index({}, f.graph, f.model, f.tax, 0.5);
  EXPECT_TRUE(index.built());
  EXPECT_EQ(index.pair_count(), 0u);
}

TEST(SemanticIndexBuild, MatchesBruteForceTable) {
  IndexFixture f;
  const auto index = build_semantic_index(f.corpus, f.graph, f.model, f.tax, 0.5);
  // Independent enumeration of both conditions.
  std::map<ConceptId, DocSet> expected;
  for (const auto& c : f.graph.concepts()) {
    std::set<std::size_t> clusters;
    for (std::size_t k = 0; k < f.model.k; ++k)
      for (const auto& t : f.model.top_terms[k])
        if (semantic_score(t, c.id, f.graph, f.tax) > 0.5) clusters.insert(k);
    for (const auto& doc : f.corpus) {
      if (!clusters.count(assign_cluster(f.model, doc))) continue;
      for (const auto& term : metadata_terms(doc, Stopwords{}))
        if (semantic_score(term, c.id, f.graph, f.tax) > 0.5) {
          expected[c.id].insert(doc.id);
          break;
        }
    }
  }
  EXPECT_EQ(index.forward(), expected);

  // Hand-checked rows. Silk and wool are siblings (4/6 > 0.5), so wool docs count for silk.
  const DocSet silk_docs{"silk_0.txt", "silk_1.txt", "silk_2.txt", "silk_3.txt", "silk_4.txt"};
  DocSet animal_fiber = silk_docs;
  for (int i = 0; i < 5; ++i) animal_fiber.insert("wool_" + std::to_string(i) + ".txt");
  EXPECT_EQ(index.documents_of(*f.graph.find("silk")), animal_fiber);
  EXPECT_EQ(index.documents_of(*f.graph.find("wool")), animal_fiber);
  EXPECT_EQ(index.documents_of(*f.graph.find("cocoon")), silk_docs);
  EXPECT_EQ(index.documents_of(*f.graph.find("hessian")).size(), 5u);
  EXPECT_TRUE(index.documents_of(*f.graph.find("fertilizer")).empty());
}

TEST(SemanticIndexBuild, ConsistencyAndMonotonicity) {
  IndexFixture f;
  SemanticIndex previous = SemanticIndex::empty_built();
  for (double th : {0.95, 0.8, 0.6, 0.5, 0.3, 0.1}) {
    const auto index = build_semantic_index(f.corpus, f.graph, f.model, f.tax, th);
    for (const auto& [c, docs] : index.forward())
      for (const auto& d : docs) EXPECT_TRUE(index.concepts_of(d).count(c));
    for (const auto& [d, cs] : index.reverse()) {
      for (auto c : cs) EXPECT_TRUE(index.documents_of(c).count(d));
      EXPECT_TRUE(std::any_of(f.corpus.begin(), f.corpus.end(), [&](const auto& doc) { return doc.id == d; }));
    }
    for (const auto& [c, docs] : previous.forward())
      for (const auto& d : docs) EXPECT_TRUE(index.documents_of(c).count(d)) << "threshold " << th;
    previous = index;
  }
}

TEST(SemanticIndexBuild, ReindexDocumentAndPublisher) {
  IndexFixture f;
  const auto index = build_semantic_index(f.corpus, f.graph, f.model, f.tax, 0.5);
  const auto same = reindex_document(index, f.corpus[0], f.graph, f.model, f.tax, 0.5);
  EXPECT_EQ(same, index);

  auto changed = f.corpus[0];
  changed.frequent_words = {{"tractor", 3}};
  const auto next = reindex_document(index, changed, f.graph, f.model, f.tax, 0.5);
  for (auto c : next.concepts_of(changed.id)) EXPECT_NE(f.graph.label(c), "silk");

  IndexPublisher pub(index);
  const auto snap = pub.snapshot();
  pub.publish(next);
  EXPECT_EQ(*snap, index);
  EXPECT_EQ(*pub.snapshot(), next);
}
