#include "semdr/gst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <numeric>
#include <functional>
#include <queue>
#include <tuple>

#include "semdr/error.hpp"

namespace semdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Costs closer than this are treated as ties (fewer hops, then label, win).
constexpr double kTieEps = 1e-12;

bool cost_less(double x, double y) { return x < y - kTieEps; }
bool cost_equal(double x, double y) { return !cost_less(x, y) && !cost_less(y, x); }

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<std::int64_t> pred;           // predecessor node, -1 at sources
  std::vector<std::int64_t> pred_relation;  // relation used to reach the node
};

ShortestPaths dijkstra(const SemanticConceptGraph& graph, const std::vector<ConceptId>& sources) {
  const auto n = graph.size();
  ShortestPaths sp{std::vector<double>(n, kInf), std::vector<int>(n, 0), std::vector<std::int64_t>(n, -1),
                   std::vector<std::int64_t>(n, -1)};
  std::vector<bool> done(n, false);
  using Entry = std::tuple<double, int, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (auto s : sources) {
    sp.dist[s.value] = 0.0;
    queue.emplace(0.0, 0, s.value);
  }
  while (!queue.empty()) {
    auto [d, h, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = true;
    for (const auto& nb : graph.neighbors(ConceptId{v})) {
      const auto u = nb.to.value;
      if (done[u]) continue;
      const double nd = d + graph.relations()[nb.relation].weight;
      const int nh = h + 1;
      if (cost_less(nd, sp.dist[u]) || (cost_equal(nd, sp.dist[u]) && nh < sp.hops[u])) {
        sp.dist[u] = nd;
        sp.hops[u] = nh;
        sp.pred[u] = v;
        sp.pred_relation[u] = static_cast<std::int64_t>(nb.relation);
        queue.emplace(nd, nh, u);
      }
    }
  }
  return sp;
}

std::vector<const TerminalGroup*> active_groups(const TerminalGroups& groups) {
  std::vector<const TerminalGroup*> active;
  for (const auto& g : groups)
    if (!g.terminals.empty()) active.push_back(&g);
  return active;
}

void fill_metadata(GroupSteinerTree& tree, const TerminalGroups& groups) {
  for (const auto& g : groups) {
    std::vector<ConceptId> terminals;
    for (const auto& [c, score] : g.terminals) {
      terminals.push_back(c);
      if (tree.nodes.count(c)) {
        auto [it, inserted] = tree.anchor_scores.emplace(c, score);
        if (!inserted) it->second = std::max(it->second, score);
      }
    }
    tree.groups.emplace_back(g.token, std::move(terminals));
  }
  std::sort(tree.edges.begin(), tree.edges.end(),
            [](const TreeEdge& x, const TreeEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  tree.cost = tree_cost(tree.edges);
}

ConceptId best_anchor(const SemanticConceptGraph& graph, const TerminalGroup& group) {
  const std::pair<const ConceptId, double>* best = nullptr;
  for (const auto& entry : group.terminals) {
    if (!best || entry.second > best->second ||
        (entry.second == best->second && graph.label(entry.first) < graph.label(best->first)))
      best = &entry;
  }
  return best->first;
}

GroupSteinerTree single_anchor_tree(const SemanticConceptGraph& graph, const TerminalGroup& group,
                                    const TerminalGroups& all) {
  GroupSteinerTree tree;
  tree.nodes.insert(best_anchor(graph, group));
  fill_metadata(tree, all);
  return tree;
}

bool hits(const TerminalGroup& g, const std::set<ConceptId>& nodes) {
  return std::any_of(g.latent.begin(), g.latent.end(), [&nodes](ConceptId c) { return nodes.count(c) > 0; });
}

}  // namespace

double tree_cost(const std::vector<TreeEdge>& edges) {
  std::vector<double> w;
  w.reserve(edges.size());
  for (const auto& e : edges) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  return std::accumulate(w.begin(), w.end(), 0.0);
}

TerminalGroups identify_anchors(const SemanticConceptGraph& graph, const Taxonomy& tax, const TokenList& tokens,
                                double threshold) {
  TerminalGroups groups;
  std::set<std::string> seen;
  for (const auto& token : tokens.tokens) {
    if (!seen.insert(token).second) continue;
    TerminalGroup group{token, {}, {}};
    for (const auto& c : graph.concepts()) {
      if (c.kind != ConceptKind::Direct) continue;
      const double score = semantic_score(token, c.id, graph, tax);
      if (score > threshold) {
        group.terminals.emplace(c.id, score);
        group.latent.insert(c.id);
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

TerminalGroups expand_to_latent(const SemanticConceptGraph& graph, TerminalGroups groups) {
  for (auto& g : groups) {
    g.latent.clear();
    for (const auto& [t, score] : g.terminals) g.latent.insert(t);
    for (const auto& c : graph.concepts()) {
      if (c.kind != ConceptKind::Latent) continue;
      const bool has_terminal = std::any_of(c.members.begin(), c.members.end(),
                                            [&g](ConceptId m) { return g.terminals.count(m) > 0; });
      if (has_terminal) g.latent.insert(c.members.begin(), c.members.end());
    }
  }
  return groups;
}

// Mapping onto the two loops of the published pseudocode:
//  * first loop (one Steiner tree per anchor group, unioned): choose the seed
//    anchor whose shortest-path distances to all other groups sum lowest;
//  * second loop (pick a group, connect it, merge with the main tree, remove
//    it from the pending set): repeatedly connect the pending group with the
//    cheapest path from the current tree to any of its members, reusing tree
//    vertices so common vertices merge instead of duplicating;
//  * finally prune leaves that belong to no group.
GroupSteinerTree greedy_gst(const SemanticConceptGraph& graph, const TerminalGroups& groups) {
  const auto active = active_groups(groups);
  if (active.empty()) throw Error(Errc::NoAnchors, "no query word matched a concept");
  if (active.size() == 1) return single_anchor_tree(graph, *active.front(), groups);

  // Seed.
  ConceptId seed{};
  double seed_cost = kInf;
  bool have_seed = false;
  for (std::size_t gi = 0; gi < active.size(); ++gi) {
    for (const auto& [t, score] : active[gi]->terminals) {
      const auto sp = dijkstra(graph, {t});
      double total = 0.0;
      for (std::size_t hi = 0; hi < active.size() && total < kInf; ++hi) {
        if (hi == gi) continue;
        double best = kInf;
        for (auto m : active[hi]->latent) best = std::min(best, sp.dist[m.value]);
        total += best;
      }
      if (!have_seed || cost_less(total, seed_cost) ||
          (cost_equal(total, seed_cost) && graph.label(t) < graph.label(seed))) {
        seed = t;
        seed_cost = total;
        have_seed = true;
      }
    }
  }

  GroupSteinerTree tree;
  tree.nodes.insert(seed);
  std::vector<bool> covered(active.size(), false);
  auto refresh_coverage = [&] {
    for (std::size_t i = 0; i < active.size(); ++i)
      if (!covered[i]) covered[i] = hits(*active[i], tree.nodes);
  };
  refresh_coverage();

  while (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    const auto sp = dijkstra(graph, std::vector<ConceptId>(tree.nodes.begin(), tree.nodes.end()));
    auto better_member = [&](std::uint32_t x, std::uint32_t y) {
      if (!cost_equal(sp.dist[x], sp.dist[y])) return cost_less(sp.dist[x], sp.dist[y]);
      if (sp.hops[x] != sp.hops[y]) return sp.hops[x] < sp.hops[y];
      return graph.label(ConceptId{x}) < graph.label(ConceptId{y});
    };
    std::int64_t best_member = -1;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (covered[i]) continue;
      for (auto m : active[i]->latent) {
        if (sp.dist[m.value] == kInf) continue;
        if (best_member < 0 || better_member(m.value, static_cast<std::uint32_t>(best_member))) best_member = m.value;
      }
    }
    if (best_member < 0) {
      for (std::size_t i = 0; i < active.size(); ++i)
        if (!covered[i]) throw Error(Errc::UnreachableGroup, active[i]->token);
    }
    for (auto v = best_member; sp.pred[static_cast<std::size_t>(v)] >= 0;) {
      const auto u = sp.pred[static_cast<std::size_t>(v)];
      const auto& rel = graph.relations()[static_cast<std::size_t>(sp.pred_relation[static_cast<std::size_t>(v)])];
      tree.edges.push_back({rel.a, rel.b, rel.weight});
      tree.nodes.insert(ConceptId{static_cast<std::uint32_t>(v)});
      v = u;
    }
    tree.nodes.insert(ConceptId{static_cast<std::uint32_t>(best_member)});
    refresh_coverage();
  }

  // Prune leaves that no group needs: outside every group, or in groups
  // that other tree nodes still cover. Heaviest leaf edge goes first.
  for (bool changed = true; changed && tree.nodes.size() > 1;) {
    changed = false;
    std::map<ConceptId, int> degree;
    std::map<ConceptId, double> leaf_weight;
    for (const auto& e : tree.edges) {
      ++degree[e.a];
      ++degree[e.b];
      leaf_weight[e.a] = e.weight;
      leaf_weight[e.b] = e.weight;
    }
    std::optional<ConceptId> drop;
    for (auto v : tree.nodes) {
      if (degree[v] != 1) continue;
      auto rest = tree.nodes;
      rest.erase(v);
      const bool needed =
          std::any_of(active.begin(), active.end(), [&](const TerminalGroup* g) { return !hits(*g, rest); });
      if (needed) continue;
      if (!drop || leaf_weight[v] > leaf_weight[*drop] ||
          (leaf_weight[v] == leaf_weight[*drop] && graph.label(v) > graph.label(*drop)))
        drop = v;
    }
    if (drop) {
      const auto v = *drop;
      tree.nodes.erase(v);
      tree.edges.erase(std::remove_if(tree.edges.begin(), tree.edges.end(),
                                      [v](const TreeEdge& e) { return e.a == v || e.b == v; }),
                       tree.edges.end());
      changed = true;
    }
  }

  fill_metadata(tree, groups);
  return tree;
}

GroupSteinerTree exact_gst(const SemanticConceptGraph& graph, const TerminalGroups& groups, std::size_t max_nodes) {
  const auto n = graph.size();
  if (n > max_nodes)
    throw Error(Errc::TooLarge, std::to_string(n) + " concepts exceed the exact-solver guard of " +
                                    std::to_string(max_nodes));
  const auto active = active_groups(groups);
  if (active.empty()) throw Error(Errc::NoAnchors, "no query word matched a concept");
  if (active.size() == 1) return single_anchor_tree(graph, *active.front(), groups);

  std::vector<std::uint32_t> group_masks;
  for (const auto* g : active) {
    std::uint32_t mask = 0;
    for (auto c : g->latent) mask |= 1u << c.value;
    group_masks.push_back(mask);
  }

  // Relations sorted once for Kruskal.
  std::vector<std::size_t> order(graph.relations().size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&graph](std::size_t x, std::size_t y) {
    const auto& rx = graph.relations()[x];
    const auto& ry = graph.relations()[y];
    return std::tie(rx.weight, rx.a, rx.b) < std::tie(ry.weight, ry.a, ry.b);
  });

  bool found = false;
  double best_cost = kInf;
  int best_size = 0;
  std::vector<std::string> best_labels;
  std::vector<TreeEdge> best_edges;
  std::uint32_t best_mask = 0;

  std::vector<std::uint32_t> parent(n);
  auto find_root = [&parent](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  auto mask_labels = [&graph, n](std::uint32_t mask) {
    std::vector<std::string> labels;
    for (std::uint32_t v = 0; v < n; ++v)
      if (mask >> v & 1u) labels.push_back(graph.label(ConceptId{v}));
    std::sort(labels.begin(), labels.end());
    return labels;
  };

  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    bool hits_all = true;
    for (auto gm : group_masks)
      if (!(gm & mask)) {
        hits_all = false;
        break;
      }
    if (!hits_all) continue;
    const int size = __builtin_popcount(mask);
    for (std::uint32_t v = 0; v < n; ++v) parent[v] = v;
    std::vector<TreeEdge> edges;
    double cost = 0.0;
    for (auto r : order) {
      const auto& rel = graph.relations()[r];
      if (!(mask >> rel.a.value & 1u) || !(mask >> rel.b.value & 1u)) continue;
      const auto ra = find_root(rel.a.value);
      const auto rb = find_root(rel.b.value);
      if (ra == rb) continue;
      parent[ra] = rb;
      edges.push_back({rel.a, rel.b, rel.weight});
      cost += rel.weight;
      if (found && cost_less(best_cost, cost)) break;
    }
    if (static_cast<int>(edges.size()) != size - 1) continue;
    cost = tree_cost(edges);
    bool better = !found || cost_less(cost, best_cost);
    bool by_labels = false;
    if (!better && cost_equal(cost, best_cost)) {
      if (size != best_size) {
        better = size < best_size;
      } else {
        if (best_labels.empty()) best_labels = mask_labels(best_mask);
        auto labels = mask_labels(mask);
        better = by_labels = labels < best_labels;
        if (better) best_labels = std::move(labels);
      }
    }
    if (better) {
      if (!by_labels) best_labels.clear();
      found = true;
      best_cost = cost;
      best_size = size;
      best_edges = std::move(edges);
      best_mask = mask;
    }
  }

  if (!found) {
    // Report the first group that cannot reach the first one.
    const auto sp = dijkstra(graph, std::vector<ConceptId>(active.front()->latent.begin(), active.front()->latent.end()));
    for (const auto* g : active) {
      const bool reachable =
          std::any_of(g->latent.begin(), g->latent.end(), [&sp](ConceptId c) { return sp.dist[c.value] < kInf; });
      if (!reachable) throw Error(Errc::UnreachableGroup, g->token);
    }
    throw Error(Errc::UnreachableGroup, active.back()->token);
  }

  GroupSteinerTree tree;
  for (std::uint32_t v = 0; v < n; ++v)
    if (best_mask >> v & 1u) tree.nodes.insert(ConceptId{v});
  tree.edges = std::move(best_edges);
  fill_metadata(tree, groups);
  return tree;
}

std::vector<ConceptId> relevant_concepts(const GroupSteinerTree& tree, const SemanticConceptGraph& graph) {
  std::map<ConceptId, int> degree;
  for (const auto& e : tree.edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  std::vector<ConceptId> anchors, connectors;
  for (auto v : tree.nodes) (tree.anchor_scores.count(v) ? anchors : connectors).push_back(v);
  std::sort(anchors.begin(), anchors.end(), [&](ConceptId x, ConceptId y) {
    const double sx = tree.anchor_scores.at(x), sy = tree.anchor_scores.at(y);
    if (sx != sy) return sx > sy;
    return graph.label(x) < graph.label(y);
  });
  std::sort(connectors.begin(), connectors.end(), [&](ConceptId x, ConceptId y) {
    if (degree[x] != degree[y]) return degree[x] > degree[y];
    return graph.label(x) < graph.label(y);
  });
  anchors.insert(anchors.end(), connectors.begin(), connectors.end());
  return anchors;
}

std::string check_tree(const SemanticConceptGraph& graph, const GroupSteinerTree& tree, const TerminalGroups& groups) {
  if (tree.nodes.empty()) return "tree has no nodes";
  if (tree.edges.size() != tree.nodes.size() - 1) return "edge count is not |nodes| - 1";
  std::map<ConceptId, ConceptId> parent;
  for (auto v : tree.nodes) parent[v] = v;
  std::function<ConceptId(ConceptId)> root = [&](ConceptId x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  double cost = 0.0;
  for (const auto& e : tree.edges) {
    if (!tree.nodes.count(e.a) || !tree.nodes.count(e.b)) return "edge endpoint outside the node set";
    const auto rel = graph.relation_between(e.a, e.b);
    if (!rel) return "edge " + graph.label(e.a) + "-" + graph.label(e.b) + " is not a graph relation";
    if (graph.relations()[*rel].weight != e.weight) return "edge weight differs from the graph";
    if (e.weight < 0) return "negative edge weight";
    const auto ra = root(e.a), rb = root(e.b);
    if (ra == rb) return "edges contain a cycle";
    parent[ra] = rb;
    cost += e.weight;
  }
  const auto r0 = root(*tree.nodes.begin());
  for (auto v : tree.nodes)
    if (root(v) != r0) return "tree is disconnected";
  for (const auto& g : groups)
    if (!g.terminals.empty() && !hits(g, tree.nodes)) return "group '" + g.token + "' is not covered";
  if (std::abs(cost - tree.cost) > 1e-9) return "cost does not equal the edge-weight sum";
  if (tree.cost < 0) return "negative cost";
  return {};
}

}  // namespace semdr
