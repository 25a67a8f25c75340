#include "dgr/paths.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

// Lexicographically smallest shortest path from s to t (ids ascend with keys).
std::vector<NodeId> smallest_shortest_path(const UndirectedGraph& g, NodeId s, NodeId t) {
  auto to_target = bfs_distances(g, t);
  if (to_target[s] < 0) throw NotConnected("no path between the requested nodes");
  std::vector<NodeId> path{s};
  NodeId cur = s;
  while (cur != t) {
    for (NodeId w : g.neighbors(cur)) {
      if (to_target[w] == to_target[cur] - 1) {
        cur = w;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::size_t eccentricity(const std::vector<int>& dist) {
  int ecc = 0;
  for (int d : dist) ecc = std::max(ecc, d);
  return static_cast<std::size_t>(ecc);
}

ExtractedPath make_path(const KnowledgeGraph& g, const NodeMetricTable& table,
                        const std::vector<NodeId>& ids, std::size_t source_ecc,
                        std::size_t target_ecc) {
  ExtractedPath p;
  for (NodeId v : ids) {
    p.keys.push_back(table.view.key(v));
    p.labels.push_back(table.view.label(v));
    p.metrics.push_back({table.degree[v], table.betweenness[v], table.closeness[v]});
  }
  for (std::size_t i = 0; i + 1 < p.keys.size(); ++i) {
    p.relations.push_back(relation_between(g, p.keys[i], p.keys[i + 1]));
  }
  p.source_eccentricity = source_ecc;
  p.target_eccentricity = target_ecc;
  return p;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
  };
  if (constant(x) || constant(y)) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

NodeMetricTable node_metric_table(const KnowledgeGraph& g) {
  if (g.empty()) throw EmptyGraph("node metrics of an empty graph");
  NodeMetricTable t;
  t.view = undirected_view(g);
  const std::size_t n = t.view.node_count();
  t.degree.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    t.degree[v] = static_cast<double>(t.view.degree(v) + (t.view.has_self_loop(v) ? 2 : 0));
  }
  auto c = centralities(t.view);
  t.betweenness = std::move(c.betweenness);
  t.closeness = std::move(c.closeness);
  t.eigenvector = std::move(c.eigenvector);
  t.pagerank = pagerank(g);
  t.clustering = clustering_coefficients(t.view);
  return t;
}

std::string describe_relation(const KnowledgeGraph& g, const Relation& r) {
  return g.display(r.source) + " -- " + r.kind + " -- " + g.display(r.target);
}

Relation relation_between(const KnowledgeGraph& g, std::string_view a, std::string_view b) {
  const auto& edges = g.edges();
  for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
    auto it = edges.lower_bound(Relation{std::string(from), "", ""});
    for (; it != edges.end() && it->source == from; ++it) {
      if (it->target == to) return *it;
    }
  }
  throw std::invalid_argument("nodes are not adjacent: " + std::string(a) + ", " + std::string(b));
}

ExtractedPath diameter_path(const KnowledgeGraph& g) { return diameter_path(g, node_metric_table(g)); }

ExtractedPath diameter_path(const KnowledgeGraph& g, const NodeMetricTable& table) {
  if (g.empty()) throw EmptyGraph("diameter path of an empty graph");
  const auto& view = table.view;
  auto members = largest_component_members(view);
  if (members.size() < 2) throw TrivialPath("largest component is a single node");

  NodeId source = members.front();
  std::size_t best_ecc = 0;
  std::vector<int> source_dist;
  for (NodeId v : members) {
    auto dist = bfs_distances(view, v);
    std::size_t ecc = eccentricity(dist);
    if (ecc > best_ecc) {
      best_ecc = ecc;
      source = v;
      source_dist = std::move(dist);
    }
  }
  NodeId target = source;
  for (NodeId v : members) {
    if (static_cast<std::size_t>(source_dist[v]) == best_ecc) {
      target = v;
      break;
    }
  }
  auto ids = smallest_shortest_path(view, source, target);
  return make_path(g, table, ids, best_ecc, eccentricity(bfs_distances(view, target)));
}

std::vector<ExtractedPath> top_k_longest_paths(const KnowledgeGraph& g, std::size_t k) {
  return top_k_longest_paths(g, node_metric_table(g), k);
}

std::vector<ExtractedPath> top_k_longest_paths(const KnowledgeGraph& g,
                                               const NodeMetricTable& table, std::size_t k) {
  if (g.empty()) throw EmptyGraph("longest paths of an empty graph");
  const auto& view = table.view;
  const std::size_t n = view.node_count();
  using Candidate = std::tuple<int, NodeId, NodeId>;
  // a ranks before b: longer first, then smaller endpoint ids.
  auto better = [](const Candidate& a, const Candidate& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::make_pair(std::get<1>(a), std::get<2>(a)) <
           std::make_pair(std::get<1>(b), std::get<2>(b));
  };
  // Top of the heap is the worst kept candidate.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(better)> heap(better);
  std::vector<std::size_t> ecc(n, 0);
  for (NodeId u = 0; u < n && k > 0; ++u) {
    auto dist = bfs_distances(view, u);
    ecc[u] = eccentricity(dist);
    for (NodeId v = u + 1; v < n; ++v) {
      if (dist[v] <= 0) continue;
      Candidate c{dist[v], u, v};
      if (heap.size() < k) {
        heap.push(c);
      } else if (better(c, heap.top())) {
        heap.pop();
        heap.push(c);
      }
    }
  }
  std::vector<Candidate> chosen;
  while (!heap.empty()) {
    chosen.push_back(heap.top());
    heap.pop();
  }
  std::reverse(chosen.begin(), chosen.end());
  std::vector<ExtractedPath> out;
  for (const auto& [d, u, v] : chosen) {
    out.push_back(make_path(g, table, smallest_shortest_path(view, u, v), ecc[u], ecc[v]));
  }
  return out;
}

std::vector<double> pagerank(const KnowledgeGraph& g, double damping, double tolerance,
                             std::size_t max_iterations) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  std::vector<std::string_view> keys;
  keys.reserve(n);
  for (const auto& [key, display] : g.nodes()) keys.push_back(key);
  auto id_of = [&](std::string_view key) {
    return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
  };
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& r : g.edges()) out[id_of(r.source)].push_back(id_of(r.target));
  for (auto& o : out) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
  }

  const double nd = static_cast<double>(n);
  std::vector<double> x(n, 1.0 / nd), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (out[v].empty()) dangling += x[v];
    }
    std::fill(next.begin(), next.end(), (1.0 - damping) / nd + damping * dangling / nd);
    for (std::size_t v = 0; v < n; ++v) {
      if (out[v].empty()) continue;
      double share = damping * x[v] / static_cast<double>(out[v].size());
      for (std::size_t w : out[v]) next[w] += share;
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - x[v]);
    x.swap(next);
    if (change < nd * tolerance) break;
  }
  return x;
}

std::array<double, 7> path_metrics(const ExtractedPath& path, const NodeMetricTable& table) {
  std::array<double, 7> m{};
  std::vector<NodeId> ids;
  for (const auto& key : path.keys) {
    auto id = table.view.find(key);
    if (!id) throw std::invalid_argument("path node not in graph: " + key);
    ids.push_back(*id);
  }
  if (ids.empty()) return m;
  for (NodeId v : ids) {
    m[0] += table.degree[v];
    m[1] += table.betweenness[v];
    m[2] += table.closeness[v];
    m[3] += table.eigenvector[v];
    m[4] += table.pagerank[v];
    m[5] += table.clustering[v];
  }
  const double len = static_cast<double>(ids.size());
  for (std::size_t i = 0; i < 6; ++i) m[i] /= len;
  std::size_t present = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (table.view.adjacent(ids[i], ids[j])) ++present;
    }
  }
  m[6] = ids.size() < 2 ? 0.0 : static_cast<double>(present) / (len * (len - 1.0) / 2.0);
  return m;
}

CorrelationMatrix path_metric_correlations(std::span<const ExtractedPath> paths,
                                           const NodeMetricTable& table) {
  if (paths.size() < 3) throw std::invalid_argument("path correlations need at least 3 paths");
  CorrelationMatrix out;
  for (const auto& p : paths) out.per_path.push_back(path_metrics(p, table));
  std::array<std::vector<double>, 7> columns;
  for (const auto& row : out.per_path) {
    for (std::size_t i = 0; i < 7; ++i) columns[i].push_back(row[i]);
  }
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = i; j < 7; ++j) {
      auto r = pearson(columns[i], columns[j]);
      if (i == j && r) r = 1.0;
      out.values[i][j] = r;
      out.values[j][i] = r;
    }
  }
  return out;
}

KnowledgeGraph path_subgraph(const KnowledgeGraph& g, const ExtractedPath& path) {
  return g.induced(path.keys);
}

}  // namespace dgr
