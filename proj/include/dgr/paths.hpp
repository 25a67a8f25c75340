#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgr/analytics.hpp"
#include "dgr/graph.hpp"

namespace dgr {

/// Node-level properties of the whole graph, indexed like undirected_view(g).
struct NodeMetricTable {
  UndirectedGraph view;
  std::vector<double> degree;  // a self-loop adds 2
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> eigenvector;
  std::vector<double> pagerank;
  std::vector<double> clustering;
};

/// Throws EmptyGraph.
NodeMetricTable node_metric_table(const KnowledgeGraph& g);

struct PathNodeMetrics {
  double degree = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
};

struct ExtractedPath {
  std::vector<std::string> keys;
  std::vector<std::string> labels;
  /// One triple per consecutive pair, oriented as stored in the graph.
  std::vector<Relation> relations;
  std::vector<PathNodeMetrics> metrics;
  std::size_t source_eccentricity = 0;
  std::size_t target_eccentricity = 0;

  std::size_t length() const { return keys.empty() ? 0 : keys.size() - 1; }
};

/// "A -- KIND -- B" with display labels.
std::string describe_relation(const KnowledgeGraph& g, const Relation& r);

/// Smallest triple linking two keys in either direction, preferring a->b.
/// Throws std::invalid_argument when the nodes are not adjacent.
Relation relation_between(const KnowledgeGraph& g, std::string_view a, std::string_view b);

/// Shortest path realising the largest eccentricity in the LCC of the
/// undirected view. The source is the smallest key of maximum eccentricity,
/// the target its smallest farthest key, and among shortest paths the one
/// with the lexicographically smallest key sequence is returned.
/// Throws EmptyGraph, or TrivialPath when the LCC is a single node.
ExtractedPath diameter_path(const KnowledgeGraph& g);
ExtractedPath diameter_path(const KnowledgeGraph& g, const NodeMetricTable& table);

/// The k reachable unordered endpoint pairs with the longest shortest paths
/// (ties by endpoint keys), one lexicographically smallest path each.
std::vector<ExtractedPath> top_k_longest_paths(const KnowledgeGraph& g, std::size_t k = 5);
std::vector<ExtractedPath> top_k_longest_paths(const KnowledgeGraph& g,
                                               const NodeMetricTable& table, std::size_t k = 5);

/// PageRank on the directed simple graph (kinds collapsed, self-loops kept),
/// uniform teleport, dangling mass spread uniformly. Indexed like
/// undirected_view(g).
std::vector<double> pagerank(const KnowledgeGraph& g, double damping = 0.85,
                             double tolerance = 1e-8, std::size_t max_iterations = 1000);

inline constexpr std::array<std::string_view, 7> kPathMetricNames = {
    "degree", "betweenness", "closeness", "eigenvector", "pagerank", "clustering", "density"};

/// Means of node properties along a path plus the density of the path's
/// induced subgraph, in kPathMetricNames order.
std::array<double, 7> path_metrics(const ExtractedPath& path, const NodeMetricTable& table);

struct CorrelationMatrix {
  /// Pearson correlation across paths; empty when either metric is constant.
  std::array<std::array<std::optional<double>, 7>, 7> values{};
  std::vector<std::array<double, 7>> per_path;
};

/// Throws std::invalid_argument for fewer than 3 paths.
CorrelationMatrix path_metric_correlations(std::span<const ExtractedPath> paths,
                                           const NodeMetricTable& table);

/// Path subgraph: the path's nodes and every relation among them.
KnowledgeGraph path_subgraph(const KnowledgeGraph& g, const ExtractedPath& path);

}  // namespace dgr
