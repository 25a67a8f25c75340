#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgr/graph.hpp"
#include "dgr/louvain.hpp"

namespace dgr {

struct HubEmergence {
  std::vector<std::size_t> iterations;
  /// Top hubs by maximum LCC degree over the series, ties by key.
  std::vector<std::string> top_hubs;
  /// Degree per snapshot for each top hub; 0 while the node is outside the LCC.
  std::map<std::string, std::vector<std::size_t>> trajectories;
  /// First iteration whose LCC degree exceeds the threshold, for every node
  /// that ever does.
  std::map<std::string, std::size_t> t_emerge;
  /// Mean degree over LCC nodes per snapshot.
  std::vector<double> mean_degree;
};

/// Degrees are taken on each snapshot's LCC of the undirected view
/// (a self-loop adds 2). Throws EmptyGraph for an empty series.
HubEmergence hub_emergence(const SnapshotSeries& series, std::size_t d_emerge = 5,
                           std::size_t top_n = 10);

/// Nodes whose neighbours fall into more than one community of `p`.
std::vector<NodeId> bridge_nodes(const UndirectedGraph& g, const Partition& p);

struct BridgeSeries {
  std::vector<std::size_t> iterations;
  std::vector<std::vector<std::string>> bridges;  // per snapshot, sorted keys
  std::map<std::string, std::size_t> persistence;  // snapshots in which a node bridges

  /// Presence matrix restricted to the first `max_iterations` snapshots and
  /// the `max_nodes` nodes that bridge earliest. Rows are ordered by first
  /// appearance (ties by key); presence[r][t] is 1 when row r bridges at
  /// column t.
  std::vector<std::string> presence_nodes;
  std::vector<std::size_t> presence_first;  // iteration of first appearance per row
  std::vector<std::size_t> presence_iterations;
  std::vector<std::vector<std::uint8_t>> presence;
};

/// Per snapshot: seeded Louvain on the undirected simple view, then
/// bridge_nodes. Snapshots are processed in parallel; results are identical
/// to a sequential pass.
BridgeSeries bridge_analysis(const SnapshotSeries& series, std::uint64_t seed = 0,
                             std::size_t max_nodes = 100, std::size_t max_iterations = 200);

/// Same as bridge_analysis, from bridge sets already computed per snapshot
/// (each sorted by key).
BridgeSeries bridge_analysis(const SnapshotSeries& series,
                             std::vector<std::vector<std::string>> bridges,
                             std::size_t max_nodes = 100, std::size_t max_iterations = 200);

struct BetweennessSeries {
  std::vector<std::size_t> iterations;
  std::vector<std::string> nodes;            // every key seen, sorted
  std::vector<std::vector<double>> matrix;   // [snapshot][node]; 0 when absent
  std::vector<std::string> top_nodes;        // by peak value, ties by key
  std::vector<double> mean;                  // over LCC nodes per snapshot
  std::vector<double> max;
};

/// Normalised betweenness computed within each snapshot's LCC.
BetweennessSeries betweenness_timeseries(const SnapshotSeries& series, std::size_t top_n = 10);

}  // namespace dgr
