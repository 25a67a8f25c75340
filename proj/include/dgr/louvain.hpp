#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dgr/graph.hpp"

namespace dgr {

struct Partition {
  std::vector<std::size_t> community;  // per node id
  std::size_t community_count = 0;
  double modularity = 0.0;
};

/// Multilevel greedy modularity optimisation on the simple view (self-loops
/// ignored). Several restarts with seeds derived from `seed` are refined with
/// node moves, pairwise merges and zero-gain perturbations; the best one wins.
/// The result is a pure function of (g, seed). Communities are numbered by their smallest member
/// and `modularity` is recomputed from the returned partition.
Partition louvain(const UndirectedGraph& g, std::uint64_t seed = 0);

/// Newman modularity of a partition given as community ids per node.
/// Graphs without edges have modularity 0.
double modularity(const UndirectedGraph& g, std::span<const std::size_t> community);

/// Relabels community ids so that communities are numbered 0.. in order of
/// their smallest member. Returns the number of communities.
std::size_t canonicalize_communities(std::vector<std::size_t>& community);

}  // namespace dgr
