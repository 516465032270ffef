// semdr: build, query, evaluate and inspect a semantic document retrieval engine.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semdr/csv.hpp"
#include "semdr/engine.hpp"
#include "semdr/error.hpp"
#include "semdr/evaluation.hpp"
#include "semdr/join.hpp"
#include "semdr/serialize.hpp"

namespace {

constexpr const char* kDefaultState = "semdr.state.json";

struct BuildArgs {
  semdr::EngineConfig config;
  std::string state = kDefaultState;
  std::string taxonomy, geo, stopwords, cluster_corpus;
};

struct QueryArgs {
  std::string state = kDefaultState;
  std::string query;
  bool explain = false;
  std::size_t top = 0;
  bool join = false;
  std::string out;
  std::string geo;
  int year = 0;
  std::string format = "json";
};

struct EvalArgs {
  std::string state = kDefaultState;
  std::string queries, reference, out;
  std::size_t jobs = 1;
  std::vector<std::string> asserts;
  std::string format = "table";
};

std::optional<std::string> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw semdr::Error(semdr::Errc::UnreadableFile, "cannot write " + path);
  out << text;
}

int cmd_build(BuildArgs a) {
  a.config.taxonomy_path = opt_path(a.taxonomy);
  a.config.geo_path = opt_path(a.geo);
  a.config.stopwords_path = opt_path(a.stopwords);
  a.config.cluster_corpus_path = opt_path(a.cluster_corpus);
  const auto engine = semdr::build_engine(a.config);
  semdr::save_state(engine, a.state);
  std::cout << "concepts: " << engine.graph.count(semdr::ConceptKind::Direct) << "\n"
            << "latent concepts: " << engine.graph.count(semdr::ConceptKind::Latent) << "\n"
            << "edges: " << engine.graph.relations().size() << "\n"
            << "docs: " << engine.registry.size() << "\n"
            << "index pairs: " << engine.index.pair_count() << "\n";
  return 0;
}

int cmd_query(const QueryArgs& a) {
  const auto engine = semdr::load_state(a.state);
  semdr::QueryOptions options;
  if (!a.geo.empty()) options.geo = a.geo;
  if (a.year) options.year = a.year;
  const auto result = semdr::retrieve(engine, a.query, options);

  if (a.join) {
    std::vector<semdr::DocId> ids;
    const std::size_t n = a.top ? std::min(a.top, result.docs.size()) : result.docs.size();
    for (std::size_t i = 0; i < n; ++i) ids.push_back(result.docs[i].id);
    const auto table = semdr::join_structured(ids, engine.registry, engine.taxonomy);
    std::ostringstream csv;
    semdr::write_joined_csv(csv, table);
    write_output(a.out, csv.str());
    return 0;
  }

  if (a.format == "table") {
    std::ostringstream out;
    out << "concepts:";
    for (auto c : result.concepts) out << " [" << engine.graph.label(c) << "]";
    out << "\n";
    const std::size_t n = a.top ? std::min(a.top, result.docs.size()) : result.docs.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = result.docs[i];
      char score[32];
      std::snprintf(score, sizeof score, "%.4f", d.score);
      out << (i + 1) << "\t" << d.id << "\t" << score << "\ttier " << d.tier << "\n";
    }
    if (result.docs.empty()) out << "no relevant documents\n";
    write_output(a.out, out.str());
    return 0;
  }
  write_output(a.out, semdr::render_json(semdr::result_json(result, engine.graph, a.explain, a.top)));
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  std::vector<semdr::Assertion> asserts;
  for (const auto& s : a.asserts) asserts.push_back(semdr::parse_assertion(s));
  const auto engine = semdr::load_state(a.state);
  const auto queries = semdr::read_queries_csv(a.queries);
  const auto reference = semdr::read_reference_csv(a.reference);
  const auto report = semdr::run_evaluation(engine, queries, reference, a.jobs);
  if (!a.out.empty()) write_output(a.out, semdr::render_report_json(report));
  std::cout << (a.format == "json" ? semdr::render_report_json(report) : semdr::render_report_table(report));
  int rc = 0;
  for (const auto& as : asserts) {
    const auto failure = semdr::check_assertion(as, report);
    if (!failure.empty()) {
      std::cerr << "assertion " << failure << "\n";
      rc = 3;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semdr: semantic document retrieval over a concept graph"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build the engine and write a state file");
  b->add_option("--triples", build.config.triples_path, "subject,predicate,object CSV")->required();
  b->add_option("--corpus", build.config.corpus_path, "Directory of .csv/.txt documents")->required();
  b->add_option("--taxonomy", build.taxonomy, "Extra child,parent taxonomy CSV");
  b->add_option("--geo", build.geo, "name,level,parent,neighbors CSV");
  b->add_option("--stopwords", build.stopwords, "Stopword list, one per line");
  b->add_option("--cluster-corpus", build.cluster_corpus, "Documents for fitting clusters (default: --corpus)");
  b->add_option("--k", build.config.k, "Cluster count")->capture_default_str();
  b->add_option("--seed", build.config.seed, "Clustering seed")->capture_default_str();
  b->add_option("--anchor-threshold", build.config.anchor_threshold, "Anchor proximity threshold")
      ->capture_default_str();
  b->add_option("--group-threshold", build.config.group_threshold, "Semantic group threshold")->capture_default_str();
  b->add_option("--map-threshold", build.config.map_threshold, "Concept-cluster mapping threshold")
      ->capture_default_str();
  b->add_option("--state", build.state, "State file to write")->capture_default_str();

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Run a search");
  q->add_option("query", query.query, "Search text")->required();
  q->add_option("--state", query.state, "State file")->capture_default_str();
  q->add_flag("--explain", query.explain, "Include the Steiner tree, anchors and per-token matches");
  q->add_option("--top", query.top, "Keep at most N documents");
  q->add_flag("--join", query.join, "Join the structured results into one table (CSV)");
  q->add_option("--out", query.out, "Write output here instead of stdout");
  q->add_option("--geo-tag", query.geo, "Location filter, overrides one found in the text");
  q->add_option("--year", query.year, "Year filter, overrides one found in the text");
  q->add_option("--format", query.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score the engine and a keyword baseline against a reference");
  e->add_option("--state", eval.state, "State file")->capture_default_str();
  e->add_option("--queries", eval.queries, "query_id,query,geo,year,set_label CSV")->required();
  e->add_option("--reference", eval.reference, "query_id,query,doc_id CSV")->required();
  e->add_option("--jobs", eval.jobs, "Concurrent queries")->capture_default_str();
  e->add_option("--assert", eval.asserts, "metric>=X on the overall SemDR numbers, repeatable");
  e->add_option("--out", eval.out, "Also write the JSON report here");
  e->add_option("--format", eval.format, "table or json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();

  std::string dump_state = kDefaultState;
  auto* dg = app.add_subcommand("dump-graph", "Print the concept graph as JSON");
  dg->add_option("--state", dump_state, "State file")->capture_default_str();
  auto* di = app.add_subcommand("dump-index", "Print the semantic index as concept,doc_id CSV");
  di->add_option("--state", dump_state, "State file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    if (app.get_subcommands().empty()) {
      std::cout << app.help("", CLI::AppFormatMode::All);
      return 0;
    }
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex);
  }

  try {
    if (*b) return cmd_build(build);
    if (*q) return cmd_query(query);
    if (*e) return cmd_eval(eval);
    const auto engine = semdr::load_state(dump_state);
    if (*dg) std::cout << semdr::render_json(semdr::graph_json(engine.graph));
    if (*di) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& [c, docs] : engine.index.forward())
        for (const auto& d : docs) pairs.emplace_back(engine.graph.label(c), d);
      std::sort(pairs.begin(), pairs.end());
      semdr::csv::write_row(std::cout, {"concept", "doc_id"});
      for (const auto& [c, d] : pairs) semdr::csv::write_row(std::cout, {c, d});
    }
    return 0;
  } catch (const semdr::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
