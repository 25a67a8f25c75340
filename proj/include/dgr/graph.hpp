#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgr {

/// A concept name. `key` is the identity used for merging (trimmed,
/// whitespace-collapsed, ASCII case-folded); `display` keeps the original case.
struct ConceptLabel {
  std::string key;
  std::string display;
};

/// Throws InvalidLabel when nothing is left after trimming.
ConceptLabel normalize_label(std::string_view raw);

/// Uppercases a relation tag and turns whitespace runs into hyphens, so
/// "relates to" and "RELATES-TO" are the same kind. Throws InvalidLabel if empty.
std::string normalize_relation_kind(std::string_view raw);

inline constexpr std::string_view kDefaultRelation = "RELATES-TO";

/// Directed, typed edge between two identity keys.
struct Relation {
  std::string source;
  std::string kind;
  std::string target;

  auto operator<=>(const Relation&) const = default;
  bool operator==(const Relation&) const = default;
};

struct MergeDelta {
  std::size_t added_nodes = 0;
  std::size_t added_edges = 0;

  bool operator==(const MergeDelta&) const = default;
};

/// Directed multigraph on relation kinds: (source, kind, target) is unique,
/// but IS-A and RELATES-TO between the same pair coexist.
class KnowledgeGraph {
 public:
  using NodeMap = std::map<std::string, std::string, std::less<>>;

  /// Adds the node if its key is new; an existing display label is kept.
  /// Returns the identity key.
  std::string add_node(const ConceptLabel& label);
  std::string add_node(std::string_view raw_label);

  /// Endpoints are added as needed. Returns true when the triple was new.
  bool add_edge(const ConceptLabel& source, std::string_view kind, const ConceptLabel& target);
  bool add_edge(std::string_view raw_source, std::string_view kind, std::string_view raw_target);

  bool contains_node(std::string_view key) const;
  bool contains_edge(const Relation& r) const { return edges_.contains(r); }
  /// Display label for an identity key; throws std::out_of_range if absent.
  const std::string& display(std::string_view key) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t self_loop_count() const;
  bool empty() const { return nodes_.empty(); }

  const NodeMap& nodes() const { return nodes_; }
  const std::set<Relation>& edges() const { return edges_; }

  /// Subgraph induced by the given identity keys (unknown keys are ignored).
  KnowledgeGraph induced(std::span<const std::string> keys) const;

  /// True when every node and every edge of this graph is also in `other`.
  bool is_subgraph_of(const KnowledgeGraph& other) const;

  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;

 private:
  NodeMap nodes_;
  std::set<Relation> edges_;
};

/// global := global ∪ local. Counts only genuinely new nodes and triples.
MergeDelta merge_local(KnowledgeGraph& global, const KnowledgeGraph& local);

using NodeId = std::uint32_t;

/// Undirected simple graph with self-loops tracked separately.
///
/// Node ids follow lexicographic order of identity keys, so "smallest id"
/// and "lexicographically smallest label" are the same thing everywhere.
/// Adjacency lists are sorted and never contain the node itself.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;

  /// `keys` need not be sorted or unique; edges refer to keys and may repeat.
  /// An edge (k, k) becomes a self-loop.
  static UndirectedGraph from_edges(std::vector<std::string> keys,
                                    std::span<const std::pair<std::string, std::string>> edges);

  /// Keys become "0", "1", ... zero-padded to equal width so that numeric
  /// order and key order agree. Handy for generated test graphs.
  static UndirectedGraph from_index_edges(std::size_t n,
                                          std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return keys_.size(); }
  /// Simple edges, self-loops excluded.
  std::size_t edge_count() const { return edge_count_; }
  std::size_t self_loop_count() const { return self_loop_count_; }
  bool empty() const { return keys_.empty(); }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  /// Number of distinct neighbours, self excluded.
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool has_self_loop(NodeId v) const { return self_loops_[v]; }
  bool adjacent(NodeId u, NodeId v) const;

  const std::string& key(NodeId v) const { return keys_[v]; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  std::optional<NodeId> find(std::string_view key) const;

  /// Subgraph on `members` (any order); ids are renumbered by key order.
  UndirectedGraph induced(std::span<const NodeId> members) const;

 private:
  friend UndirectedGraph undirected_view(const KnowledgeGraph& g);

  // keys must be sorted and unique; edges are id pairs and may repeat.
  static UndirectedGraph build(std::vector<std::string> keys, std::vector<std::string> labels,
                               std::span<const std::pair<NodeId, NodeId>> edges);

  std::vector<std::string> keys_;
  std::vector<std::string> labels_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<bool> self_loops_;
  std::size_t edge_count_ = 0;
  std::size_t self_loop_count_ = 0;
};

/// Drops direction; A→B and B→A (of any kinds) collapse to one edge {A,B}.
UndirectedGraph undirected_view(const KnowledgeGraph& g);

/// Connected components, each sorted by id, listed by their smallest member.
std::vector<std::vector<NodeId>> connected_components(const UndirectedGraph& g);

/// Component ids per node, numbered as in connected_components().
std::vector<std::size_t> component_labels(const UndirectedGraph& g);

enum class Connectivity { Weak, Strong, Undirected };

/// Induced subgraph on the largest component. Ties go to the component
/// holding the lexicographically smallest key. Throws EmptyGraph.
KnowledgeGraph largest_component(const KnowledgeGraph& g, Connectivity mode);
UndirectedGraph largest_component(const UndirectedGraph& g);

/// Member ids of the largest component of `g` (same tie rule).
std::vector<NodeId> largest_component_members(const UndirectedGraph& g);

/// A frozen graph at one loop iteration.
struct Snapshot {
  std::size_t iteration = 0;
  std::shared_ptr<const KnowledgeGraph> graph;
};

/// Snapshots in strictly increasing iteration order.
class SnapshotSeries {
 public:
  /// Throws std::invalid_argument if `iteration` does not exceed the last one.
  void append(std::size_t iteration, KnowledgeGraph graph);
  void append(Snapshot snapshot);

  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }
  const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }
  const Snapshot& back() const { return snapshots_.back(); }

  auto begin() const { return snapshots_.begin(); }
  auto end() const { return snapshots_.end(); }

  /// Each snapshot's graph contains the previous one's.
  bool is_growing() const;

 private:
  std::vector<Snapshot> snapshots_;
};

}  // namespace dgr
