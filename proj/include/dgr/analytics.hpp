#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dgr/graph.hpp"

namespace dgr {

/// Whole-graph counts on the undirected view of a knowledge graph.
///
/// `edges` counts undirected edges including self-loops and a self-loop adds
/// 2 to its node's degree, so avg_degree == 2 * edges / nodes exactly.
/// `relations` is the number of typed directed triples.
struct BasicMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t relations = 0;
  double avg_degree = 0.0;
  std::size_t max_degree = 0;
  std::size_t self_loops = 0;
  std::size_t lcc_size = 0;
  double avg_clustering = 0.0;
};

/// Throws EmptyGraph.
BasicMetrics basic_metrics(const KnowledgeGraph& g);
inline BasicMetrics basic_metrics(const Snapshot& s) { return basic_metrics(*s.graph); }

/// Degree of every node in the undirected view, self-loops counting 2.
std::vector<std::size_t> degree_sequence(const KnowledgeGraph& g);

/// Local clustering per node, self-loops ignored; 0 for degree < 2.
std::vector<double> clustering_coefficients(const UndirectedGraph& g);
double average_clustering(const UndirectedGraph& g);

/// BFS hop counts from `source`; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const UndirectedGraph& g, NodeId source);

struct PathLengthSummary {
  double average = 0.0;
  std::size_t diameter = 0;
};

/// Exact mean over unordered pairs and maximum distance. Throws NotConnected
/// (or EmptyGraph). A single node gives {0, 0}.
PathLengthSummary spl_and_diameter(const UndirectedGraph& connected);

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. Throws UndefinedMetric without edges or with zero variance.
double degree_assortativity(const UndirectedGraph& g);

/// 3 * triangles / connected triples; 0 when there are no triples.
double transitivity(const UndirectedGraph& g);

/// Core number per node (self-loops are never counted).
std::vector<std::size_t> core_numbers(const UndirectedGraph& g);

struct CoreSummary {
  std::size_t max_k = 0;
  std::size_t largest_core_size = 0;
};

CoreSummary kcore(const UndirectedGraph& g);

/// Brandes betweenness normalised by (n-1)(n-2)/2.
std::vector<double> betweenness_centrality(const UndirectedGraph& g);

/// (r-1)/sum_d * (r-1)/(n-1) where r is the size of the node's reachable set.
std::vector<double> closeness_centrality(const UndirectedGraph& g);

struct EigenvectorResult {
  std::vector<double> values;  // unit Euclidean norm
  bool converged = false;
  std::size_t iterations = 0;
};

/// Power iteration on A + I from a uniform start. Stops when the L1 change
/// drops below `tolerance`.
EigenvectorResult eigenvector_centrality(const UndirectedGraph& g, double tolerance = 1e-8,
                                         std::size_t max_iterations = 1000);

struct CentralityTable {
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> eigenvector;
  bool eigenvector_converged = false;
};

/// Throws EmptyGraph. Non-convergence of the eigenvector stage is reported
/// through `eigenvector_converged`; the other tables are still filled.
CentralityTable centralities(const UndirectedGraph& g);

/// Cut vertices, ascending ids.
std::vector<NodeId> articulation_points(const UndirectedGraph& g);

struct PathLengthHistogram {
  std::map<std::size_t, std::size_t> counts;  // hop length -> pairs
  std::size_t unreachable = 0;
  std::size_t samples = 0;
};

/// Samples node pairs of the largest component with replacement (self-pairs
/// redrawn) and histograms their BFS distances.
PathLengthHistogram sampled_spl_distribution(const UndirectedGraph& g, std::size_t samples = 2000,
                                             std::uint64_t seed = 0);

struct PairSampling {
  std::size_t samples = 1000;
  bool exhaustive = false;  // compare every pair of current nodes instead
};

struct PairUpdate {
  std::size_t newly_connected = 0;
  std::size_t shortened = 0;
  std::size_t compared = 0;  // distinct pairs that had a prior record
  std::size_t sampled = 0;   // distinct pairs looked at this iteration
};

/// Last known shortest-path distance per unordered pair, carried across
/// snapshots of one series.
class PairDistanceLedger {
 public:
  static constexpr int kUnreachable = -1;

  explicit PairDistanceLedger(std::uint64_t seed = 0) : rng_(seed) {}

  /// Samples pairs of `s`, classifies them against their previous record and
  /// stores the new distances. The first observed snapshot only records
  /// baselines. Throws std::invalid_argument if `s` is not newer than the
  /// last observed snapshot.
  PairUpdate observe(const Snapshot& s, PairSampling sampling = {});

  std::optional<std::size_t> last_iteration() const { return last_iteration_; }
  const std::map<std::pair<std::string, std::string>, int>& distances() const {
    return distances_;
  }

 private:
  std::mt19937_64 rng_;
  std::optional<std::size_t> last_iteration_;
  std::map<std::pair<std::string, std::string>, int> distances_;
};

inline PairUpdate newly_connected_pairs(PairDistanceLedger& ledger, const Snapshot& s,
                                        std::size_t samples = 1000) {
  return ledger.observe(s, PairSampling{samples, false});
}

}  // namespace dgr
