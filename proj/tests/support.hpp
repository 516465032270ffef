#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "semdr/engine.hpp"
#include "semdr/gst.hpp"

namespace semdr::fx {

inline std::string source_path(const std::string& rel) { return std::string(SEMDR_SOURCE_DIR) + "/" + rel; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("semdr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& rel) const { return (path_ / rel).string(); }

 private:
  std::filesystem::path path_;
};

inline EngineConfig agri_config() {
  EngineConfig cfg;
  cfg.triples_path = source_path("data/agri/triples.csv");
  cfg.corpus_path = source_path("data/agri/corpus");
  cfg.taxonomy_path = source_path("data/agri/taxonomy.csv");
  cfg.geo_path = source_path("data/agri/geo.csv");
  return cfg;
}

/// Built once per process; the fixture build is cheap but many tests use it.
inline const Engine& agri_engine() {
  static const Engine engine = build_engine(agri_config());
  return engine;
}

struct CommandResult {
  int status = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout (stderr too when asked).
inline CommandResult run_command(const std::string& cmd, bool merge_stderr = false) {
  CommandResult r;
  FILE* pipe = ::popen((cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null")).c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

inline std::string cli() { return std::string("'") + SEMDR_CLI + "'"; }

/// Labels are "n0".."n{n-1}", so ConceptId order matches label order up to n=10.
struct GstInstance {
  SemanticConceptGraph graph;
  TerminalGroups groups;
};

inline TerminalGroup make_group(const std::string& token, std::initializer_list<ConceptId> terminals) {
  TerminalGroup g;
  g.token = token;
  for (auto t : terminals) {
    g.terminals.emplace(t, 1.0);
    g.latent.insert(t);
  }
  return g;
}

inline void add_weighted(SemanticConceptGraph& g, ConceptId a, ConceptId b, double w) {
  g.add_relation(a, b, RelationKind::Contextual, "rel");
  g.set_weight(*g.relation_between(a, b), w);
}

/// Connected random graph: a random spanning tree plus extra edges, weights
/// uniform in [0,1], 1-3 groups of 1-3 distinct terminals.
inline GstInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nodes_dist(6, 12);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  const int n = nodes_dist(rng);
  GstInstance inst;
  for (int i = 0; i < n; ++i) inst.graph.add_concept("n" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    add_weighted(inst.graph, ConceptId{static_cast<std::uint32_t>(pick(rng))}, ConceptId{static_cast<std::uint32_t>(i)},
                 weight(rng));
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  std::uniform_int_distribution<int> extra(0, n);
  for (int e = extra(rng); e > 0; --e) {
    const auto a = static_cast<std::uint32_t>(any(rng)), b = static_cast<std::uint32_t>(any(rng));
    if (a == b || inst.graph.relation_between(ConceptId{a}, ConceptId{b})) continue;
    add_weighted(inst.graph, ConceptId{a}, ConceptId{b}, weight(rng));
  }
  inst.graph.mark_weighted();
  std::uniform_int_distribution<int> count(1, 3);
  const int groups = count(rng);
  for (int gi = 0; gi < groups; ++gi) {
    TerminalGroup g;
    g.token = "g" + std::to_string(gi);
    const int terms = count(rng);
    while (static_cast<int>(g.terminals.size()) < terms) {
      const ConceptId c{static_cast<std::uint32_t>(any(rng))};
      g.terminals.emplace(c, 1.0);
      g.latent.insert(c);
    }
    inst.groups.push_back(std::move(g));
  }
  return inst;
}

}  // namespace semdr::fx
