#include "dgr/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "dgr/errors.hpp"
#include "dgr/louvain.hpp"
#include "dgr/parallel.hpp"

namespace dgr {

namespace {

std::string num(double v) { return fmt::format("{}", v); }
std::string num(std::size_t v) { return std::to_string(v); }

template <class T>
std::string opt(const std::optional<T>& v) {
  return v ? num(*v) : std::string("NA");
}

std::ofstream open_csv(const std::filesystem::path& path, std::string_view header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  return out;
}

}  // namespace

SnapshotMetrics snapshot_metrics(const Snapshot& s, std::uint64_t louvain_seed) {
  SnapshotMetrics m;
  m.iteration = s.iteration;
  const KnowledgeGraph& g = *s.graph;
  if (g.empty()) {
    m.empty = true;
    return m;
  }
  m.basic = basic_metrics(g);
  auto view = undirected_view(g);
  auto lcc = largest_component(view);
  auto spl = spl_and_diameter(lcc);
  m.avg_spl = spl.average;
  m.diameter = spl.diameter;
  if (view.edge_count() > 0) {
    auto p = louvain(view, louvain_seed);
    m.modularity = p.modularity;
    m.communities = p.community_count;
    for (NodeId v : bridge_nodes(view, p)) m.bridge_keys.push_back(view.key(v));
  } else {
    m.communities = view.node_count();
  }
  try {
    m.assortativity = degree_assortativity(view);
  } catch (const UndefinedMetric&) {
  }
  m.transitivity = transitivity(view);
  m.core = kcore(view);
  m.articulation_points = articulation_points(view).size();
  const auto degrees = to_u64(degree_sequence(g));
  try {
    m.fit = fit_power_law(degrees);
    m.verdict = compare_exponential(*m.fit, degrees);
  } catch (const InsufficientData&) {
  } catch (const DegenerateSequence&) {
  } catch (const InconclusiveTest&) {
  }
  return m;
}

SeriesAnalysis analyze_series(const SnapshotSeries& series, const AnalysisOptions& options) {
  if (series.empty()) throw EmptyGraph("analysis of an empty snapshot series");
  SeriesAnalysis a;
  const std::size_t T = series.size();
  a.snapshots.resize(T);
  parallel_for(T, [&](std::size_t t) {
    a.snapshots[t] = snapshot_metrics(series[t], options.louvain_seed);
  });

  a.hubs = hub_emergence(series, options.d_emerge, options.top_n);
  std::vector<std::vector<std::string>> bridge_sets(T);
  for (std::size_t t = 0; t < T; ++t) bridge_sets[t] = a.snapshots[t].bridge_keys;
  a.bridges = bridge_analysis(series, std::move(bridge_sets), options.presence_nodes,
                              options.presence_iterations);
  a.betweenness = betweenness_timeseries(series, options.top_n);

  PairDistanceLedger ledger(options.sampling_seed);
  for (std::size_t t = 0; t < T; ++t) {
    auto& m = a.snapshots[t];
    m.bridge_nodes = a.bridges.bridges[t].size();
    m.betweenness_mean = a.betweenness.mean[t];
    m.betweenness_max = a.betweenness.max[t];
    m.lcc_mean_degree = a.hubs.mean_degree[t];
    const bool baseline = !ledger.last_iteration().has_value();
    auto update = ledger.observe(series[t], PairSampling{options.pair_samples, options.exhaustive_pairs});
    if (!baseline) m.pairs = update;
  }

  const Snapshot& last = series.back();
  if (!last.graph->empty()) {
    a.final_spl = sampled_spl_distribution(undirected_view(*last.graph), options.spl_samples,
                                           options.sampling_seed);
    for (auto d : degree_sequence(*last.graph)) ++a.final_degree_distribution[d];
  }
  return a;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "nodes",          "edges",            "relations",         "avg_degree",
      "max_degree",     "self_loops",       "lcc_size",          "avg_clustering",
      "avg_spl",        "diameter",         "modularity",        "communities",
      "assortativity",  "transitivity",     "kcore_max_k",       "kcore_size",
      "articulation_points", "betweenness_mean", "betweenness_max", "bridge_nodes",
      "lcc_mean_degree", "newly_connected", "shortened_paths",  "powerlaw_alpha",
      "powerlaw_xmin",  "powerlaw_lr",      "powerlaw_p",        "scale_free"};
  return names;
}

std::vector<std::pair<std::string, std::string>> metric_values(const SnapshotMetrics& m) {
  const std::string na = "NA";
  auto defined = [&](auto v) { return m.empty ? na : num(v); };
  std::vector<std::string> v = {
      num(m.basic.nodes),
      num(m.basic.edges),
      num(m.basic.relations),
      defined(m.basic.avg_degree),
      num(m.basic.max_degree),
      num(m.basic.self_loops),
      num(m.basic.lcc_size),
      defined(m.basic.avg_clustering),
      opt(m.avg_spl),
      opt(m.diameter),
      opt(m.modularity),
      num(m.communities),
      opt(m.assortativity),
      defined(m.transitivity),
      num(m.core.max_k),
      num(m.core.largest_core_size),
      num(m.articulation_points),
      defined(m.betweenness_mean),
      defined(m.betweenness_max),
      num(m.bridge_nodes),
      defined(m.lcc_mean_degree),
      m.pairs ? num(m.pairs->newly_connected) : na,
      m.pairs ? num(m.pairs->shortened) : na,
      m.fit ? num(m.fit->alpha) : na,
      m.fit ? num(static_cast<std::size_t>(m.fit->xmin)) : na,
      m.verdict ? num(m.verdict->lr) : na,
      m.verdict ? num(m.verdict->p) : na,
      m.verdict ? std::string(m.verdict->is_scale_free ? "1" : "0") : na};
  std::vector<std::pair<std::string, std::string>> out;
  const auto& names = metric_names();
  for (std::size_t i = 0; i < names.size(); ++i) out.emplace_back(names[i], v[i]);
  return out;
}

std::vector<std::filesystem::path> write_analysis(const SeriesAnalysis& a,
                                                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto path = [&](const char* name) {
    written.push_back(out_dir / name);
    return written.back();
  };

  {
    auto out = open_csv(path("metrics.csv"), "iteration,metric,subject,value");
    for (const auto& m : a.snapshots) {
      for (const auto& [name, value] : metric_values(m)) {
        out << m.iteration << ',' << name << ",global," << value << '\n';
      }
    }
  }
  {
    auto out = open_csv(path("scalefree.csv"), "iteration,alpha,xmin,n_tail,ks_distance,lr,p,lambda,scale_free");
    for (const auto& m : a.snapshots) {
      out << m.iteration << ',';
      if (m.fit) {
        out << num(m.fit->alpha) << ',' << m.fit->xmin << ',' << m.fit->n_tail << ','
            << num(m.fit->ks_distance) << ',';
      } else {
        out << "NA,NA,NA,NA,";
      }
      if (m.verdict) {
        out << num(m.verdict->lr) << ',' << num(m.verdict->p) << ',' << num(m.verdict->lambda)
            << ',' << (m.verdict->is_scale_free ? 1 : 0) << '\n';
      } else {
        out << "NA,NA,NA,NA\n";
      }
    }
  }
  {
    auto out = open_csv(path("spl_histogram.csv"), "bin,count");
    for (const auto& [bin, count] : a.final_spl.counts) out << bin << ',' << count << '\n';
    out << "unreachable," << a.final_spl.unreachable << '\n';
  }
  {
    auto out = open_csv(path("degree_distribution.csv"), "degree,count");
    for (const auto& [d, count] : a.final_degree_distribution) out << d << ',' << count << '\n';
  }
  auto csv_text = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  {
    auto out = open_csv(path("hub_trajectories.csv"), "iteration,node,degree");
    for (std::size_t t = 0; t < a.hubs.iterations.size(); ++t) {
      for (const auto& key : a.hubs.top_hubs) {
        out << a.hubs.iterations[t] << ',' << csv_text(key) << ','
            << a.hubs.trajectories.at(key)[t] << '\n';
      }
    }
  }
  {
    auto out = open_csv(path("hub_emergence.csv"), "node,t_emerge");
    for (const auto& [key, t] : a.hubs.t_emerge) out << csv_text(key) << ',' << t << '\n';
  }
  {
    auto out = open_csv(path("bridge_persistence.csv"), "node,persistence");
    for (const auto& [key, p] : a.bridges.persistence) out << csv_text(key) << ',' << p << '\n';
  }
  {
    std::string header = "node,first_iteration";
    for (auto it : a.bridges.presence_iterations) header += fmt::format(",{}", it);
    auto out = open_csv(path("bridge_presence.csv"), header);
    for (std::size_t r = 0; r < a.bridges.presence_nodes.size(); ++r) {
      out << csv_text(a.bridges.presence_nodes[r]) << ',' << a.bridges.presence_first[r];
      for (auto cell : a.bridges.presence[r]) out << ',' << static_cast<int>(cell);
      out << '\n';
    }
  }
  {
    auto out = open_csv(path("betweenness_top.csv"), "iteration,node,betweenness");
    std::vector<std::size_t> columns;
    for (const auto& key : a.betweenness.top_nodes) {
      columns.push_back(static_cast<std::size_t>(
          std::lower_bound(a.betweenness.nodes.begin(), a.betweenness.nodes.end(), key) -
          a.betweenness.nodes.begin()));
    }
    for (std::size_t t = 0; t < a.betweenness.iterations.size(); ++t) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        out << a.betweenness.iterations[t] << ',' << csv_text(a.betweenness.top_nodes[i]) << ','
            << num(a.betweenness.matrix[t][columns[i]]) << '\n';
      }
    }
  }
  return written;
}

std::vector<std::pair<std::string, std::string>> summary_table(const SnapshotMetrics& m) {
  const std::string na = "NA";
  auto f4 = [&](const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : na; };
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("Number of nodes", num(m.basic.nodes));
  rows.emplace_back("Number of edges", num(m.basic.edges));
  rows.emplace_back("Average degree", m.empty ? na : fmt::format("{:.4f}", m.basic.avg_degree));
  rows.emplace_back("Number of self-loops", num(m.basic.self_loops));
  rows.emplace_back("Average clustering coefficient",
                    m.empty ? na : fmt::format("{:.4f}", m.basic.avg_clustering));
  rows.emplace_back("Average shortest path length (LCC)", f4(m.avg_spl));
  rows.emplace_back("Diameter (LCC)", m.diameter ? num(*m.diameter) : na);
  rows.emplace_back("Modularity (Louvain)", f4(m.modularity));
  rows.emplace_back("Log-likelihood ratio (LR)",
                    m.verdict ? fmt::format("{:.4f}", m.verdict->lr) : na);
  rows.emplace_back("p-value", m.verdict ? fmt::format("{:.4f}", m.verdict->p) : na);
  rows.emplace_back("Power-law exponent (α)", m.fit ? fmt::format("{:.4f}", m.fit->alpha) : na);
  rows.emplace_back("Lower bound (x_min)",
                    m.fit ? fmt::format("{:.1f}", static_cast<double>(m.fit->xmin)) : na);
  rows.emplace_back("Scale-free classification",
                    m.verdict ? (m.verdict->is_scale_free ? "Yes" : "No") : na);
  return rows;
}

std::string render_summary_markdown(const SnapshotMetrics& m) {
  std::string out = "| Metric | Value |\n|---|---|\n";
  for (const auto& [label, value] : summary_table(m)) out += fmt::format("| {} | {} |\n", label, value);
  return out;
}

}  // namespace dgr
