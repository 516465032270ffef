#include "semdr/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "semdr/csv.hpp"
#include "semdr/engine.hpp"
#include "semdr/error.hpp"
#include "semdr/text.hpp"

namespace semdr {

Confusion confusion(const DocSet& reference, const DocSet& retrieved, std::size_t universe) {
  Confusion c;
  for (const auto& d : retrieved) (reference.count(d) ? c.tp : c.fp) += 1;
  for (const auto& d : reference)
    if (!retrieved.count(d)) ++c.fn;
  c.tn = static_cast<std::int64_t>(universe) - c.tp - c.fp - c.fn;
  return c;
}

Metrics metrics(const Confusion& c) {
  Metrics m;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.total() > 0) m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (m.precision + m.recall > 0) m.f1 = 2 * ((m.precision * m.recall) / (m.precision + m.recall));
  return m;
}

Type2Error type2_error(const std::vector<std::pair<DocSet, DocSet>>& runs) {
  Type2Error out;
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& [ref, got] = runs[i];
    if (ref.empty()) {
      out.excluded.push_back(i);
      continue;
    }
    std::size_t missed = 0;
    for (const auto& d : ref)
      if (!got.count(d)) ++missed;
    sum += static_cast<double>(missed) / static_cast<double>(ref.size());
    ++counted;
  }
  if (counted == 0) throw Error(Errc::AllReferencesEmpty, "every reference set is empty");
  out.percent = sum / static_cast<double>(counted) * 100.0;
  return out;
}

double topk_analysis(const std::vector<std::pair<DocSet, std::vector<DocId>>>& runs, std::size_t k) {
  if (k == 0) throw Error(Errc::InvalidConfig, "k must be at least 1");
  if (runs.empty()) return 0.0;
  double sum = 0;
  for (const auto& [ref, ranked] : runs) {
    const auto n = std::min(k, ranked.size());
    if (n == 0) continue;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += ref.count(ranked[i]);
    sum += static_cast<double>(hits) / static_cast<double>(n);
  }
  return sum / static_cast<double>(runs.size()) * 100.0;
}

DocSet keyword_baseline(std::string_view query, const DocumentRegistry& registry, const Stopwords& stopwords) {
  std::set<std::string> tokens;
  for (auto& w : split_words(query))
    if (!stopwords.contains(w)) tokens.insert(std::move(w));
  DocSet out;
  if (tokens.empty()) return out;
  for (const auto& [id, doc] : registry.all()) {
    auto list = metadata_terms(doc, stopwords);
    std::set<std::string> terms(list.begin(), list.end());
    if (doc.geo)
      for (auto& w : split_words(*doc.geo)) terms.insert(std::move(w));
    if (doc.year) terms.insert(std::to_string(*doc.year));
    if (std::all_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return terms.count(t) > 0; }))
      out.insert(id);
  }
  return out;
}

double round_percent(double percent) { return std::floor(percent * 10.0 + 0.5) / 10.0; }

std::vector<QuerySpec> read_queries_csv(const std::string& path) {
  const auto t = csv::read_file(path);
  csv::require_columns(t, {"query_id", "query", "set_label"});
  const auto id_col = t.column("query_id");
  const auto q_col = t.column("query");
  const auto set_col = t.column("set_label");
  const auto geo_col = t.column("geo");
  const auto year_col = t.column("year");
  std::vector<QuerySpec> out;
  std::set<std::string> seen;
  for (const auto& r : t.rows) {
    QuerySpec q;
    q.id = r.fields[id_col];
    q.query = r.fields[q_col];
    q.set_label = r.fields[set_col];
    const auto where = path + ":" + std::to_string(r.line);
    if (q.id.empty()) throw Error(Errc::ParseError, where + ": empty query_id");
    if (!seen.insert(q.id).second) throw Error(Errc::ParseError, where + ": duplicate query_id " + q.id);
    if (geo_col != csv::Table::npos && !normalize_label(r.fields[geo_col]).empty())
      q.geo = normalize_label(r.fields[geo_col]);
    if (year_col != csv::Table::npos && !r.fields[year_col].empty()) {
      if (!is_year_token(r.fields[year_col])) throw Error(Errc::ParseError, where + ": bad year '" + r.fields[year_col] + "'");
      q.year = std::stoi(r.fields[year_col]);
    }
    out.push_back(std::move(q));
  }
  return out;
}

ReferenceSolution read_reference_csv(const std::string& path) {
  const auto t = csv::read_file(path);
  csv::require_columns(t, {"query_id", "query", "doc_id"});
  const auto id_col = t.column("query_id");
  const auto q_col = t.column("query");
  const auto d_col = t.column("doc_id");
  ReferenceSolution out;
  for (const auto& r : t.rows) {
    if (r.fields[id_col].empty())
      throw Error(Errc::ParseError, path + ":" + std::to_string(r.line) + ": empty query_id");
    auto& e = out[r.fields[id_col]];
    e.query = r.fields[q_col];
    if (!r.fields[d_col].empty()) e.relevant.insert(r.fields[d_col]);
  }
  return out;
}

namespace {

struct Run {
  DocSet reference;
  DocSet semdr;
  std::vector<DocId> semdr_ranked;
  DocSet baseline;
};

SystemSummary summarize(const std::vector<const Run*>& runs, std::size_t universe, bool baseline) {
  SystemSummary s;
  if (runs.empty()) return s;
  Metrics sum;
  std::vector<std::pair<DocSet, DocSet>> t2;
  std::vector<std::pair<DocSet, std::vector<DocId>>> ranked;
  for (const auto* r : runs) {
    const auto& got = baseline ? r->baseline : r->semdr;
    const auto m = metrics(confusion(r->reference, got, universe));
    sum.precision += m.precision;
    sum.recall += m.recall;
    sum.accuracy += m.accuracy;
    sum.f1 += m.f1;
    t2.emplace_back(r->reference, got);
    ranked.emplace_back(r->reference, baseline ? std::vector<DocId>(got.begin(), got.end()) : r->semdr_ranked);
  }
  const double n = static_cast<double>(runs.size());
  s.precision = round_percent(sum.precision / n * 100.0);
  s.recall = round_percent(sum.recall / n * 100.0);
  s.accuracy = round_percent(sum.accuracy / n * 100.0);
  s.f1 = round_percent(sum.f1 / n * 100.0);
  try {
    s.type2 = round_percent(type2_error(t2).percent);
  } catch (const Error& e) {
    if (e.code() != Errc::AllReferencesEmpty) throw;
  }
  for (auto k : kTopKs) s.topk[k] = round_percent(topk_analysis(ranked, k));
  return s;
}

SetSummary summarize_set(std::string label, const std::vector<const Run*>& runs, std::size_t universe) {
  SetSummary s;
  s.label = std::move(label);
  s.queries = runs.size();
  s.semdr = summarize(runs, universe, false);
  s.baseline = summarize(runs, universe, true);
  return s;
}

}  // namespace

EvalReport run_evaluation(const Engine& engine, const std::vector<QuerySpec>& queries,
                          const ReferenceSolution& reference, std::size_t jobs) {
  std::vector<std::string> orphans;
  std::set<std::string> ids;
  for (const auto& q : queries) {
    ids.insert(q.id);
    if (!reference.count(q.id)) orphans.push_back(q.id + " (no reference)");
  }
  for (const auto& [id, e] : reference)
    if (!ids.count(id)) orphans.push_back(id + " (no query)");
  if (!orphans.empty()) {
    std::string msg = "query ids do not align:";
    for (const auto& o : orphans) msg += " " + o;
    throw Error(Errc::IdMismatch, msg);
  }
  for (const auto& [id, e] : reference)
    for (const auto& d : e.relevant)
      if (!engine.registry.contains(d))
        throw Error(Errc::IdMismatch, "reference for " + id + " names unknown document " + d);

  std::vector<const QuerySpec*> order;
  for (const auto& q : queries) order.push_back(&q);
  std::sort(order.begin(), order.end(), [](const QuerySpec* a, const QuerySpec* b) { return a->id < b->id; });

  std::vector<Run> runs(order.size());
  std::vector<std::string> errors(order.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < order.size(); i = next++) {
      const auto& q = *order[i];
      auto& run = runs[i];
      run.reference = reference.at(q.id).relevant;
      try {
        const auto res = retrieve(engine, q.query, QueryOptions{q.geo, q.year});
        for (const auto& d : res.docs) run.semdr_ranked.push_back(d.id);
        run.semdr.insert(run.semdr_ranked.begin(), run.semdr_ranked.end());
      } catch (const Error& e) {
        errors[i] = e.what();
      }
      run.baseline = keyword_baseline(q.query, engine.registry, engine.stopwords);
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, order.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  EvalReport report;
  report.universe = engine.registry.size();
  std::map<std::string, std::vector<const Run*>> by_set;
  std::vector<const Run*> all;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& q = *order[i];
    const auto& run = runs[i];
    report.rows.push_back({q.id, q.set_label, q.query, confusion(run.reference, run.semdr, report.universe),
                           confusion(run.reference, run.baseline, report.universe), run.semdr_ranked, errors[i]});
    by_set[q.set_label].push_back(&run);
    all.push_back(&run);
  }
  for (const auto& [label, set_runs] : by_set) report.sets.push_back(summarize_set(label, set_runs, report.universe));
  report.overall = summarize_set("all", all, report.universe);
  return report;
}

namespace {

using nlohmann::json;

json confusion_json(const Confusion& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}; }

Confusion confusion_from(const json& j) {
  return {j.at("tp").get<std::int64_t>(), j.at("fp").get<std::int64_t>(), j.at("fn").get<std::int64_t>(),
          j.at("tn").get<std::int64_t>()};
}

json system_json(const SystemSummary& s) {
  json topk = json::object();
  for (const auto& [k, v] : s.topk) topk[std::to_string(k)] = v;
  return {{"precision", s.precision}, {"recall", s.recall}, {"accuracy", s.accuracy}, {"f1", s.f1},
          {"type2", s.type2 ? json(*s.type2) : json(nullptr)},           {"topk", topk}};
}

SystemSummary system_from(const json& j) {
  SystemSummary s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.accuracy = j.at("accuracy").get<double>();
  s.f1 = j.at("f1").get<double>();
  if (!j.at("type2").is_null()) s.type2 = j.at("type2").get<double>();
  for (const auto& [k, v] : j.at("topk").items()) s.topk[std::stoul(k)] = v.get<double>();
  return s;
}

json set_json(const SetSummary& s) {
  return {{"label", s.label}, {"queries", s.queries}, {"semdr", system_json(s.semdr)}, {"baseline", system_json(s.baseline)}};
}

SetSummary set_from(const json& j) {
  return {j.at("label").get<std::string>(), j.at("queries").get<std::size_t>(), system_from(j.at("semdr")),
          system_from(j.at("baseline"))};
}

std::string pct(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_report_json(const EvalReport& r) {
  json j;
  j["universe"] = r.universe;
  j["queries"] = json::array();
  for (const auto& row : r.rows)
    j["queries"].push_back({{"id", row.id},
                            {"set", row.set_label},
                            {"query", row.query},
                            {"semdr", confusion_json(row.semdr)},
                            {"baseline", confusion_json(row.baseline)},
                            {"ranked", row.ranked},
                            {"error", row.error}});
  j["sets"] = json::array();
  for (const auto& s : r.sets) j["sets"].push_back(set_json(s));
  j["overall"] = set_json(r.overall);
  return j.dump(2) + "\n";
}

EvalReport parse_report_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    EvalReport r;
    r.universe = j.at("universe").get<std::size_t>();
    for (const auto& q : j.at("queries"))
      r.rows.push_back({q.at("id").get<std::string>(), q.at("set").get<std::string>(), q.at("query").get<std::string>(),
                        confusion_from(q.at("semdr")), confusion_from(q.at("baseline")),
                        q.at("ranked").get<std::vector<std::string>>(), q.at("error").get<std::string>()});
    for (const auto& s : j.at("sets")) r.sets.push_back(set_from(s));
    r.overall = set_from(j.at("overall"));
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("eval report: ") + e.what());
  }
}

std::string render_report_table(const EvalReport& r) {
  std::ostringstream out;
  out << "universe: " << r.universe << " documents\n\n";
  out << pad("query", 8, true) << pad("set", 6, true) << "  SemDR tp/fp/fn/tn      baseline tp/fp/fn/tn\n";
  auto cm = [](const Confusion& c) {
    return std::to_string(c.tp) + "/" + std::to_string(c.fp) + "/" + std::to_string(c.fn) + "/" + std::to_string(c.tn);
  };
  for (const auto& row : r.rows) {
    out << pad(row.id, 8, true) << pad(row.set_label, 6, true) << "  " << pad(cm(row.semdr), 20, true) << "   "
        << cm(row.baseline);
    if (!row.error.empty()) out << "   (" << row.error << ")";
    out << "\n";
  }
  out << "\n"
      << pad("set", 6, true) << pad("n", 4) << "  | " << pad("P", 6) << pad("R", 6) << pad("Acc", 6) << pad("F1", 6)
      << pad("T2", 6) << "  | " << pad("P", 6) << pad("R", 6) << pad("Acc", 6) << pad("F1", 6) << pad("T2", 6) << "\n";
  out << pad("", 10) << "  | " << pad("SemDR", 30, true) << "  | baseline\n";
  auto line = [&](const SetSummary& s) {
    out << pad(s.label, 6, true) << pad(std::to_string(s.queries), 4) << "  | " << pad(pct(s.semdr.precision), 6)
        << pad(pct(s.semdr.recall), 6) << pad(pct(s.semdr.accuracy), 6) << pad(pct(s.semdr.f1), 6)
        << pad(pct(s.semdr.type2), 6) << "  | " << pad(pct(s.baseline.precision), 6) << pad(pct(s.baseline.recall), 6)
        << pad(pct(s.baseline.accuracy), 6) << pad(pct(s.baseline.f1), 6) << pad(pct(s.baseline.type2), 6) << "\n";
  };
  for (const auto& s : r.sets) line(s);
  line(r.overall);
  out << "\ntop-k precision (SemDR / baseline)\n";
  for (auto k : kTopKs) {
    const auto a = r.overall.semdr.topk.count(k) ? std::optional<double>(r.overall.semdr.topk.at(k)) : std::nullopt;
    const auto b =
        r.overall.baseline.topk.count(k) ? std::optional<double>(r.overall.baseline.topk.at(k)) : std::nullopt;
    out << "  k=" << pad(std::to_string(k), 2, true) << pad(pct(a), 8) << pad(pct(b), 8) << "\n";
  }
  return out.str();
}

Assertion parse_assertion(std::string_view text) {
  static const std::vector<std::string> metrics_known = {"precision", "recall", "accuracy", "f1", "type2"};
  for (const char* op : {">=", "<=", ">", "<"}) {
    const auto pos = text.find(op);
    if (pos == std::string_view::npos) continue;
    Assertion a;
    a.metric = normalize_label(text.substr(0, pos));
    a.op = op;
    const auto value = std::string(text.substr(pos + std::string_view(op).size()));
    if (std::find(metrics_known.begin(), metrics_known.end(), a.metric) == metrics_known.end())
      throw Error(Errc::InvalidConfig, "unknown metric in assertion '" + std::string(text) + "'");
    try {
      std::size_t used = 0;
      a.value = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::InvalidConfig, "bad number in assertion '" + std::string(text) + "'");
    }
    return a;
  }
  throw Error(Errc::InvalidConfig, "assertion needs one of >=, <=, >, <: '" + std::string(text) + "'");
}

std::string check_assertion(const Assertion& a, const EvalReport& report) {
  const auto& s = report.overall.semdr;
  std::optional<double> v;
  if (a.metric == "precision") v = s.precision;
  if (a.metric == "recall") v = s.recall;
  if (a.metric == "accuracy") v = s.accuracy;
  if (a.metric == "f1") v = s.f1;
  if (a.metric == "type2") v = s.type2;
  const auto desc = a.metric + a.op + pct(a.value);
  if (!v) return desc + " failed: metric undefined";
  bool ok = false;
  if (a.op == ">=") ok = *v >= a.value;
  if (a.op == "<=") ok = *v <= a.value;
  if (a.op == ">") ok = *v > a.value;
  if (a.op == "<") ok = *v < a.value;
  return ok ? std::string() : desc + " failed: " + a.metric + " = " + pct(v);
}

}  // namespace semdr
