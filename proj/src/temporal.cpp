#include "dgr/temporal.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dgr/analytics.hpp"
#include "dgr/errors.hpp"
#include "dgr/parallel.hpp"

namespace dgr {

namespace {

void require_non_empty(const SnapshotSeries& series) {
  if (series.empty()) throw EmptyGraph("analysis of an empty snapshot series");
}

std::vector<std::string> top_by_peak(const std::map<std::string, double>& peak, std::size_t n) {
  std::vector<std::pair<std::string, double>> ranked(peak.begin(), peak.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.push_back(ranked[i].first);
  return out;
}

}  // namespace

HubEmergence hub_emergence(const SnapshotSeries& series, std::size_t d_emerge, std::size_t top_n) {
  require_non_empty(series);
  const std::size_t T = series.size();
  std::vector<std::map<std::string, std::size_t>> degrees(T);
  HubEmergence out;
  out.mean_degree.assign(T, 0.0);
  parallel_for(T, [&](std::size_t t) {
    auto view = undirected_view(*series[t].graph);
    if (view.empty()) return;
    auto lcc = largest_component(view);
    double total = 0;
    for (NodeId v = 0; v < lcc.node_count(); ++v) {
      std::size_t d = lcc.degree(v) + (lcc.has_self_loop(v) ? 2 : 0);
      degrees[t][lcc.key(v)] = d;
      total += static_cast<double>(d);
    }
    out.mean_degree[t] = total / static_cast<double>(lcc.node_count());
  });

  std::map<std::string, double> peak;
  for (std::size_t t = 0; t < T; ++t) {
    out.iterations.push_back(series[t].iteration);
    for (const auto& [key, d] : degrees[t]) {
      double& p = peak[key];
      p = std::max(p, static_cast<double>(d));
      if (d > d_emerge) out.t_emerge.emplace(key, series[t].iteration);
    }
  }
  out.top_hubs = top_by_peak(peak, top_n);
  for (const auto& key : out.top_hubs) {
    auto& traj = out.trajectories[key];
    for (std::size_t t = 0; t < T; ++t) {
      auto it = degrees[t].find(key);
      traj.push_back(it == degrees[t].end() ? 0 : it->second);
    }
  }
  return out;
}

std::vector<NodeId> bridge_nodes(const UndirectedGraph& g, const Partition& p) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto nbrs = g.neighbors(v);
    if (nbrs.empty()) continue;
    std::size_t first = p.community[nbrs.front()];
    for (NodeId u : nbrs) {
      if (p.community[u] != first) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

BridgeSeries bridge_analysis(const SnapshotSeries& series, std::uint64_t seed,
                             std::size_t max_nodes, std::size_t max_iterations) {
  require_non_empty(series);
  std::vector<std::vector<std::string>> bridges(series.size());
  parallel_for(series.size(), [&](std::size_t t) {
    auto view = undirected_view(*series[t].graph);
    auto partition = louvain(view, seed);
    for (NodeId v : bridge_nodes(view, partition)) bridges[t].push_back(view.key(v));
  });
  return bridge_analysis(series, std::move(bridges), max_nodes, max_iterations);
}

BridgeSeries bridge_analysis(const SnapshotSeries& series,
                             std::vector<std::vector<std::string>> bridges,
                             std::size_t max_nodes, std::size_t max_iterations) {
  require_non_empty(series);
  const std::size_t T = series.size();
  if (bridges.size() != T) throw std::invalid_argument("one bridge set per snapshot expected");
  BridgeSeries out;
  out.bridges = std::move(bridges);

  std::map<std::string, std::size_t> first;
  const std::size_t window = std::min(T, max_iterations);
  for (std::size_t t = 0; t < T; ++t) {
    out.iterations.push_back(series[t].iteration);
    for (const auto& key : out.bridges[t]) {
      ++out.persistence[key];
      if (t < window) first.emplace(key, t);
    }
  }

  std::vector<std::pair<std::size_t, std::string>> rows;
  for (const auto& [key, t] : first) rows.emplace_back(t, key);
  std::sort(rows.begin(), rows.end());
  if (rows.size() > max_nodes) rows.resize(max_nodes);

  for (std::size_t t = 0; t < window; ++t) out.presence_iterations.push_back(series[t].iteration);
  for (const auto& [t_first, key] : rows) {
    out.presence_nodes.push_back(key);
    out.presence_first.push_back(series[t_first].iteration);
    std::vector<std::uint8_t> row(window, 0);
    for (std::size_t t = t_first; t < window; ++t) {
      row[t] = std::binary_search(out.bridges[t].begin(), out.bridges[t].end(), key) ? 1 : 0;
    }
    out.presence.push_back(std::move(row));
  }
  return out;
}

BetweennessSeries betweenness_timeseries(const SnapshotSeries& series, std::size_t top_n) {
  require_non_empty(series);
  const std::size_t T = series.size();
  std::vector<std::map<std::string, double>> values(T);
  BetweennessSeries out;
  out.mean.assign(T, 0.0);
  out.max.assign(T, 0.0);
  parallel_for(T, [&](std::size_t t) {
    auto view = undirected_view(*series[t].graph);
    if (view.empty()) return;
    auto lcc = largest_component(view);
    auto bc = betweenness_centrality(lcc);
    double total = 0;
    for (NodeId v = 0; v < lcc.node_count(); ++v) {
      values[t][lcc.key(v)] = bc[v];
      total += bc[v];
      out.max[t] = std::max(out.max[t], bc[v]);
    }
    out.mean[t] = total / static_cast<double>(lcc.node_count());
  });

  std::set<std::string> all;
  for (std::size_t t = 0; t < T; ++t) {
    out.iterations.push_back(series[t].iteration);
    for (const auto& [key, node] : series[t].graph->nodes()) all.insert(key);
  }
  out.nodes.assign(all.begin(), all.end());
  std::map<std::string, double> peak;
  for (const auto& key : out.nodes) peak[key] = 0.0;
  out.matrix.assign(T, std::vector<double>(out.nodes.size(), 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& [key, b] : values[t]) {
      auto idx = static_cast<std::size_t>(
          std::lower_bound(out.nodes.begin(), out.nodes.end(), key) - out.nodes.begin());
      out.matrix[t][idx] = b;
      peak[key] = std::max(peak[key], b);
    }
  }
  out.top_nodes = top_by_peak(peak, top_n);
  return out;
}

}  // namespace dgr
