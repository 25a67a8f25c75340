#include "dgr/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

// Triangles through each node.
std::vector<std::size_t> triangles_per_node(const UndirectedGraph& g) {
  std::vector<std::size_t> tri(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto nv = g.neighbors(v);
    std::size_t twice = 0;
    for (NodeId u : nv) {
      auto nu = g.neighbors(u);
      // |N(v) ∩ N(u)| by sorted merge
      auto a = nv.begin();
      auto b = nu.begin();
      while (a != nv.end() && b != nu.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else {
          ++twice;
          ++a;
          ++b;
        }
      }
    }
    tri[v] = twice / 2;
  }
  return tri;
}

}  // namespace

std::vector<std::size_t> degree_sequence(const KnowledgeGraph& g) {
  auto view = undirected_view(g);
  std::vector<std::size_t> deg(view.node_count());
  for (NodeId v = 0; v < view.node_count(); ++v) {
    deg[v] = view.degree(v) + (view.has_self_loop(v) ? 2 : 0);
  }
  return deg;
}

BasicMetrics basic_metrics(const KnowledgeGraph& g) {
  if (g.empty()) throw EmptyGraph("basic metrics of an empty graph");
  auto view = undirected_view(g);
  BasicMetrics m;
  m.nodes = view.node_count();
  m.self_loops = view.self_loop_count();
  m.edges = view.edge_count() + m.self_loops;
  m.relations = g.edge_count();
  for (NodeId v = 0; v < view.node_count(); ++v) {
    std::size_t d = view.degree(v) + (view.has_self_loop(v) ? 2 : 0);
    m.max_degree = std::max(m.max_degree, d);
  }
  m.avg_degree = 2.0 * static_cast<double>(m.edges) / static_cast<double>(m.nodes);
  m.lcc_size = largest_component_members(view).size();
  m.avg_clustering = average_clustering(view);
  return m;
}

std::vector<double> clustering_coefficients(const UndirectedGraph& g) {
  auto tri = triangles_per_node(g);
  std::vector<double> c(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double k = static_cast<double>(g.degree(v));
    if (k >= 2) c[v] = 2.0 * static_cast<double>(tri[v]) / (k * (k - 1.0));
  }
  return c;
}

double average_clustering(const UndirectedGraph& g) {
  if (g.empty()) return 0.0;
  auto c = clustering_coefficients(g);
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

std::vector<int> bfs_distances(const UndirectedGraph& g, NodeId source) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeId> frontier{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    NodeId u = frontier[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

PathLengthSummary spl_and_diameter(const UndirectedGraph& connected) {
  const std::size_t n = connected.node_count();
  if (n == 0) throw EmptyGraph("path lengths of an empty graph");
  PathLengthSummary out;
  if (n == 1) return out;
  long double total = 0;
  for (NodeId s = 0; s < n; ++s) {
    auto dist = bfs_distances(connected, s);
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[t] < 0) throw NotConnected("average shortest path needs a connected graph");
      total += dist[t];
      out.diameter = std::max(out.diameter, static_cast<std::size_t>(dist[t]));
    }
  }
  long double pairs = static_cast<long double>(n) * static_cast<long double>(n - 1) / 2.0L;
  out.average = static_cast<double>(total / pairs);
  return out;
}

double degree_assortativity(const UndirectedGraph& g) {
  if (g.edge_count() == 0) throw UndefinedMetric("assortativity needs at least one edge");
  double sum = 0, sum_sq = 0, sum_prod = 0;
  std::size_t count = 0;
  bool varied = false;
  std::size_t first_degree = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    double du = static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u)) {
      // Each undirected edge is visited from both ends: both orientations.
      double dv = static_cast<double>(g.degree(v));
      if (count == 0) first_degree = g.degree(u);
      varied = varied || g.degree(u) != first_degree || g.degree(v) != first_degree;
      sum += du;
      sum_sq += du * du;
      sum_prod += du * dv;
      ++count;
    }
  }
  if (!varied) throw UndefinedMetric("assortativity undefined: all endpoint degrees are equal");
  double n = static_cast<double>(count);
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  double cov = sum_prod / n - mean * mean;
  return cov / var;
}

double transitivity(const UndirectedGraph& g) {
  auto tri = triangles_per_node(g);
  double closed = 0, triples = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double k = static_cast<double>(g.degree(v));
    closed += static_cast<double>(tri[v]);
    triples += k * (k - 1.0) / 2.0;
  }
  return triples == 0 ? 0.0 : closed / triples;
}

std::vector<std::size_t> core_numbers(const UndirectedGraph& g) {
  // Batagelj–Zaversnik bucket peeling.
  const std::size_t n = g.node_count();
  std::vector<std::size_t> deg(n), pos(n), order(n);
  std::size_t max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::size_t> bin(max_deg + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++bin[deg[v]];
  std::size_t start = 0;
  for (std::size_t d = 0; d <= max_deg; ++d) {
    std::size_t num = bin[d];
    bin[d] = start;
    start += num;
  }
  for (NodeId v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId v = static_cast<NodeId>(order[i]);
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        std::size_t du = deg[u];
        std::size_t pu = pos[u];
        std::size_t pw = bin[du];
        NodeId w = static_cast<NodeId>(order[pw]);
        if (u != w) {
          pos[u] = pw;
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return deg;
}

CoreSummary kcore(const UndirectedGraph& g) {
  CoreSummary out;
  if (g.empty()) return out;
  auto core = core_numbers(g);
  out.max_k = *std::max_element(core.begin(), core.end());
  out.largest_core_size =
      static_cast<std::size_t>(std::count(core.begin(), core.end(), out.max_k));
  return out;
}

std::vector<double> betweenness_centrality(const UndirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<int> dist(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      NodeId u = order[head];
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          order.push_back(v);
        }
        if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
      }
    }
    for (std::size_t i = order.size(); i-- > 1;) {
      NodeId w = order[i];
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      bc[w] += delta[w];
    }
  }
  // Ordered pairs were counted, so each undirected pair appears twice.
  if (n > 2) {
    double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (double& b : bc) b *= scale;
  } else {
    std::fill(bc.begin(), bc.end(), 0.0);
  }
  return bc;
}

std::vector<double> closeness_centrality(const UndirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> c(n, 0.0);
  if (n <= 1) return c;
  for (NodeId v = 0; v < n; ++v) {
    auto dist = bfs_distances(g, v);
    double total = 0;
    std::size_t reach = 0;
    for (int d : dist) {
      if (d >= 0) {
        total += d;
        ++reach;
      }
    }
    if (total > 0) {
      double r = static_cast<double>(reach - 1);
      c[v] = r / total * (r / static_cast<double>(n - 1));
    }
  }
  return c;
}

EigenvectorResult eigenvector_centrality(const UndirectedGraph& g, double tolerance,
                                         std::size_t max_iterations) {
  const std::size_t n = g.node_count();
  EigenvectorResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), next(n);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double s = x[v];
      for (NodeId u : g.neighbors(v)) s += x[u];
      next[v] = s;
    }
    double norm = 0;
    for (double value : next) norm += value * value;
    norm = std::sqrt(norm);
    double change = 0;
    for (NodeId v = 0; v < n; ++v) {
      next[v] /= norm;
      change += std::abs(next[v] - x[v]);
    }
    x.swap(next);
    out.iterations = it;
    if (change < tolerance) {
      out.converged = true;
      break;
    }
  }
  out.values = std::move(x);
  return out;
}

CentralityTable centralities(const UndirectedGraph& g) {
  if (g.empty()) throw EmptyGraph("centralities of an empty graph");
  CentralityTable t;
  t.betweenness = betweenness_centrality(g);
  t.closeness = closeness_centrality(g);
  auto eig = eigenvector_centrality(g);
  t.eigenvector = std::move(eig.values);
  t.eigenvector_converged = eig.converged;
  return t;
}

std::vector<NodeId> articulation_points(const UndirectedGraph& g) {
  const std::size_t n = g.node_count();
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> disc(n, kUnset), low(n, 0);
  std::vector<bool> is_cut(n, false);
  struct Frame {
    NodeId v;
    NodeId parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::size_t timer = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] != kUnset) continue;
    std::size_t root_children = 0;
    disc[root] = low[root] = timer++;
    stack.push_back({root, root, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto nbrs = g.neighbors(f.v);
      if (f.next < nbrs.size()) {
        NodeId w = nbrs[f.next++];
        if (disc[w] == kUnset) {
          disc[w] = low[w] = timer++;
          if (f.v == root) ++root_children;
          stack.push_back({w, f.v, 0});
        } else if (w != f.parent) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      NodeId v = f.v;
      NodeId parent = f.parent;
      stack.pop_back();
      if (v != root) {
        low[parent] = std::min(low[parent], low[v]);
        if (parent != root && low[v] >= disc[parent]) is_cut[parent] = true;
      }
    }
    if (root_children > 1) is_cut[root] = true;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v) {
    if (is_cut[v]) out.push_back(v);
  }
  return out;
}

PathLengthHistogram sampled_spl_distribution(const UndirectedGraph& g, std::size_t samples,
                                             std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("at least one sample is required");
  PathLengthHistogram hist;
  if (g.empty()) return hist;
  auto members = largest_component_members(g);
  if (members.size() < 2) return hist;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  std::map<NodeId, std::vector<int>> cache;
  for (std::size_t i = 0; i < samples; ++i) {
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    NodeId u = members[a], v = members[b];
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, bfs_distances(g, u)).first;
    int d = it->second[v];
    if (d < 0) ++hist.unreachable;
    else ++hist.counts[static_cast<std::size_t>(d)];
    ++hist.samples;
  }
  return hist;
}

PairUpdate PairDistanceLedger::observe(const Snapshot& s, PairSampling sampling) {
  if (last_iteration_ && s.iteration <= *last_iteration_) {
    throw std::invalid_argument("pair ledger snapshots must have increasing iterations");
  }
  auto view = undirected_view(*s.graph);
  const std::size_t n = view.node_count();

  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (sampling.exhaustive) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
  } else if (n >= 2) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (std::size_t i = 0; i < sampling.samples; ++i) {
      NodeId u = pick(rng_), v = pick(rng_);
      while (v == u) v = pick(rng_);
      pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }

  PairUpdate update;
  update.sampled = pairs.size();
  const bool baseline_only = !last_iteration_.has_value();
  std::map<NodeId, std::vector<int>> cache;
  for (auto [u, v] : pairs) {
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, bfs_distances(view, u)).first;
    int now = it->second[v] < 0 ? kUnreachable : it->second[v];
    auto key = std::make_pair(view.key(u), view.key(v));
    auto prior = distances_.find(key);
    if (!baseline_only && prior != distances_.end()) {
      ++update.compared;
      int before = prior->second;
      if (before == kUnreachable && now != kUnreachable) ++update.newly_connected;
      else if (before != kUnreachable && now != kUnreachable && now < before) ++update.shortened;
    }
    distances_[key] = now;
  }
  last_iteration_ = s.iteration;
  return update;
}

}  // namespace dgr
