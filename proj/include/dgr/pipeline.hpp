#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgr/analytics.hpp"
#include "dgr/graph.hpp"
#include "dgr/scalefree.hpp"
#include "dgr/temporal.hpp"

namespace dgr {

struct AnalysisOptions {
  std::uint64_t sampling_seed = 0;
  std::uint64_t louvain_seed = 0;
  std::size_t pair_samples = 1000;
  bool exhaustive_pairs = false;
  std::size_t spl_samples = 2000;
  std::size_t top_n = 10;
  std::size_t d_emerge = 5;
  std::size_t presence_nodes = 100;
  std::size_t presence_iterations = 200;
};

struct SnapshotMetrics {
  std::size_t iteration = 0;
  bool empty = false;
  BasicMetrics basic;
  std::optional<double> avg_spl;        // on the LCC
  std::optional<std::size_t> diameter;  // on the LCC
  std::optional<double> modularity;
  std::size_t communities = 0;
  std::vector<std::string> bridge_keys;  // sorted
  std::optional<double> assortativity;
  double transitivity = 0.0;
  CoreSummary core;
  std::size_t articulation_points = 0;
  double betweenness_mean = 0.0;
  double betweenness_max = 0.0;
  std::size_t bridge_nodes = 0;
  double lcc_mean_degree = 0.0;
  std::optional<PairUpdate> pairs;  // absent for the baseline snapshot
  std::optional<PowerLawFit> fit;
  std::optional<ScaleFreeVerdict> verdict;
};

struct SeriesAnalysis {
  std::vector<SnapshotMetrics> snapshots;
  HubEmergence hubs;
  BridgeSeries bridges;
  BetweennessSeries betweenness;
  PathLengthHistogram final_spl;
  std::map<std::size_t, std::size_t> final_degree_distribution;
};

SnapshotMetrics snapshot_metrics(const Snapshot& s, std::uint64_t louvain_seed = 0);

/// Every per-snapshot and cross-snapshot analysis. Snapshots are processed in
/// parallel; the output does not depend on the number of threads.
SeriesAnalysis analyze_series(const SnapshotSeries& series, const AnalysisOptions& options = {});

/// Metric names of the tidy metrics table, in row order within an iteration.
const std::vector<std::string>& metric_names();

/// (metric, value) pairs for one snapshot; "NA" marks undefined values.
std::vector<std::pair<std::string, std::string>> metric_values(const SnapshotMetrics& m);

/// Writes metrics.csv, scalefree.csv, spl_histogram.csv,
/// degree_distribution.csv, hub_trajectories.csv, hub_emergence.csv,
/// bridge_persistence.csv, bridge_presence.csv and betweenness_top.csv.
/// Returns the written paths.
std::vector<std::filesystem::path> write_analysis(const SeriesAnalysis& a,
                                                  const std::filesystem::path& out_dir);

/// The summary table rows: (label, formatted value).
std::vector<std::pair<std::string, std::string>> summary_table(const SnapshotMetrics& m);
std::string render_summary_markdown(const SnapshotMetrics& m);

}  // namespace dgr
