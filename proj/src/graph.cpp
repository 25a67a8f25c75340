#include "dgr/graph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse_whitespace(std::string_view raw, char joiner) {
  std::string out;
  out.reserve(raw.size());
  bool pending = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(joiner);
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

ConceptLabel normalize_label(std::string_view raw) {
  ConceptLabel label;
  label.display = collapse_whitespace(raw, ' ');
  if (label.display.empty()) throw InvalidLabel("concept label is empty after trimming");
  label.key = label.display;
  std::transform(label.key.begin(), label.key.end(), label.key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return label;
}

std::string normalize_relation_kind(std::string_view raw) {
  std::string kind = collapse_whitespace(raw, '-');
  if (kind.empty()) throw InvalidLabel("relation kind is empty");
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return kind;
}

// ---------------------------------------------------------------------------
// KnowledgeGraph

std::string KnowledgeGraph::add_node(const ConceptLabel& label) {
  nodes_.try_emplace(label.key, label.display);
  return label.key;
}

std::string KnowledgeGraph::add_node(std::string_view raw_label) {
  return add_node(normalize_label(raw_label));
}

bool KnowledgeGraph::add_edge(const ConceptLabel& source, std::string_view kind,
                              const ConceptLabel& target) {
  Relation r{source.key, normalize_relation_kind(kind), target.key};
  add_node(source);
  add_node(target);
  return edges_.insert(std::move(r)).second;
}

bool KnowledgeGraph::add_edge(std::string_view raw_source, std::string_view kind,
                              std::string_view raw_target) {
  return add_edge(normalize_label(raw_source), kind, normalize_label(raw_target));
}

bool KnowledgeGraph::contains_node(std::string_view key) const {
  return nodes_.find(key) != nodes_.end();
}

const std::string& KnowledgeGraph::display(std::string_view key) const {
  auto it = nodes_.find(key);
  if (it == nodes_.end()) throw std::out_of_range("unknown node key: " + std::string(key));
  return it->second;
}

std::size_t KnowledgeGraph::self_loop_count() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [](const Relation& r) { return r.source == r.target; }));
}

KnowledgeGraph KnowledgeGraph::induced(std::span<const std::string> keys) const {
  KnowledgeGraph sub;
  for (const auto& k : keys) {
    auto it = nodes_.find(k);
    if (it != nodes_.end()) sub.nodes_.emplace(it->first, it->second);
  }
  for (const auto& r : edges_) {
    if (sub.nodes_.contains(r.source) && sub.nodes_.contains(r.target)) sub.edges_.insert(r);
  }
  return sub;
}

bool KnowledgeGraph::is_subgraph_of(const KnowledgeGraph& other) const {
  for (const auto& [key, _] : nodes_) {
    if (!other.contains_node(key)) return false;
  }
  return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

MergeDelta merge_local(KnowledgeGraph& global, const KnowledgeGraph& local) {
  MergeDelta delta;
  for (const auto& [key, display] : local.nodes()) {
    if (!global.contains_node(key)) {
      global.add_node(ConceptLabel{key, display});
      ++delta.added_nodes;
    }
  }
  for (const auto& r : local.edges()) {
    ConceptLabel s{r.source, local.display(r.source)};
    ConceptLabel t{r.target, local.display(r.target)};
    if (global.add_edge(s, r.kind, t)) ++delta.added_edges;
  }
  return delta;
}

// ---------------------------------------------------------------------------
// UndirectedGraph

UndirectedGraph UndirectedGraph::build(std::vector<std::string> keys,
                                       std::vector<std::string> labels,
                                       std::span<const std::pair<NodeId, NodeId>> edges) {
  UndirectedGraph g;
  const std::size_t n = keys.size();
  g.keys_ = std::move(keys);
  g.labels_ = std::move(labels);
  g.adjacency_.assign(n, {});
  g.self_loops_.assign(n, false);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) {
      g.self_loops_[u] = true;
      continue;
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::size_t half_degree_sum = 0;
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    half_degree_sum += adj.size();
  }
  g.edge_count_ = half_degree_sum / 2;
  g.self_loop_count_ =
      static_cast<std::size_t>(std::count(g.self_loops_.begin(), g.self_loops_.end(), true));
  return g;
}

UndirectedGraph UndirectedGraph::from_edges(
    std::vector<std::string> keys, std::span<const std::pair<std::string, std::string>> edges) {
  for (const auto& [a, b] : edges) {
    keys.push_back(a);
    keys.push_back(b);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto id_of = [&](const std::string& k) {
    return static_cast<NodeId>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> ids;
  ids.reserve(edges.size());
  for (const auto& [a, b] : edges) ids.emplace_back(id_of(a), id_of(b));
  auto labels = keys;
  return build(std::move(keys), std::move(labels), ids);
}

UndirectedGraph UndirectedGraph::from_index_edges(std::size_t n,
                                                  std::span<const std::pair<NodeId, NodeId>> edges) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::vector<std::string> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    keys[i] = std::string(width - s.size(), '0') + s;
  }
  auto labels = keys;
  return build(std::move(keys), std::move(labels), edges);
}

bool UndirectedGraph::adjacent(NodeId u, NodeId v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<NodeId> UndirectedGraph::find(std::string_view key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<NodeId>(it - keys_.begin());
}

UndirectedGraph UndirectedGraph::induced(std::span<const NodeId> members) const {
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<NodeId> remap(node_count(), static_cast<NodeId>(-1));
  std::vector<std::string> keys;
  std::vector<std::string> labels;
  keys.reserve(sorted.size());
  labels.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    remap[sorted[i]] = static_cast<NodeId>(i);
    keys.push_back(keys_[sorted[i]]);
    labels.push_back(labels_[sorted[i]]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u : sorted) {
    if (self_loops_[u]) edges.emplace_back(remap[u], remap[u]);
    for (NodeId v : adjacency_[u]) {
      if (u < v && remap[v] != static_cast<NodeId>(-1)) edges.emplace_back(remap[u], remap[v]);
    }
  }
  return build(std::move(keys), std::move(labels), edges);
}

UndirectedGraph undirected_view(const KnowledgeGraph& g) {
  std::vector<std::string> keys;
  std::vector<std::string> labels;
  keys.reserve(g.node_count());
  labels.reserve(g.node_count());
  for (const auto& [key, display] : g.nodes()) {
    keys.push_back(key);
    labels.push_back(display);
  }
  auto id_of = [&](const std::string& k) {
    return static_cast<NodeId>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.edge_count());
  for (const auto& r : g.edges()) edges.emplace_back(id_of(r.source), id_of(r.target));
  return UndirectedGraph::build(std::move(keys), std::move(labels), edges);
}

std::vector<std::size_t> component_labels(const UndirectedGraph& g) {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.node_count(), kUnset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (comp[v] == kUnset) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::vector<std::vector<NodeId>> connected_components(const UndirectedGraph& g) {
  auto comp = component_labels(g);
  std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::vector<NodeId>> out(count);
  for (NodeId v = 0; v < g.node_count(); ++v) out[comp[v]].push_back(v);
  return out;
}

std::vector<NodeId> largest_component_members(const UndirectedGraph& g) {
  if (g.empty()) throw EmptyGraph("largest component of an empty graph");
  auto comps = connected_components(g);
  // Components are already ordered by smallest member, so the first
  // maximum wins ties lexicographically.
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].size() > comps[best].size()) best = i;
  }
  return comps[best];
}

UndirectedGraph largest_component(const UndirectedGraph& g) {
  return g.induced(largest_component_members(g));
}

namespace {

// Tarjan's SCC, iterative. Returns component id per node.
std::vector<std::size_t> strong_components(std::size_t n,
                                           const std::vector<std::vector<NodeId>>& out) {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::size_t counter = 0, comp_count = 0;
  struct Frame {
    NodeId v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < out[f.v].size()) {
        NodeId w = out[f.v][f.next_edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      NodeId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comp_count;
        } while (w != v);
        ++comp_count;
      }
    }
  }
  return comp;
}

}  // namespace

KnowledgeGraph largest_component(const KnowledgeGraph& g, Connectivity mode) {
  if (g.empty()) throw EmptyGraph("largest component of an empty graph");
  if (mode != Connectivity::Strong) {
    auto view = undirected_view(g);
    std::vector<std::string> keys;
    for (NodeId v : largest_component_members(view)) keys.push_back(view.key(v));
    return g.induced(keys);
  }

  std::vector<std::string> keys;
  for (const auto& [key, _] : g.nodes()) keys.push_back(key);
  auto id_of = [&](const std::string& k) {
    return static_cast<NodeId>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };
  std::vector<std::vector<NodeId>> out(keys.size());
  for (const auto& r : g.edges()) out[id_of(r.source)].push_back(id_of(r.target));
  auto comp = strong_components(keys.size(), out);

  // Size per component and smallest member (ids are in key order).
  std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> size(count, 0);
  std::vector<NodeId> smallest(count, static_cast<NodeId>(keys.size()));
  for (NodeId v = 0; v < keys.size(); ++v) {
    ++size[comp[v]];
    smallest[comp[v]] = std::min(smallest[comp[v]], v);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < count; ++c) {
    if (size[c] > size[best] || (size[c] == size[best] && smallest[c] < smallest[best])) best = c;
  }
  std::vector<std::string> members;
  for (NodeId v = 0; v < keys.size(); ++v) {
    if (comp[v] == best) members.push_back(keys[v]);
  }
  return g.induced(members);
}

// ---------------------------------------------------------------------------
// SnapshotSeries

void SnapshotSeries::append(std::size_t iteration, KnowledgeGraph graph) {
  append(Snapshot{iteration, std::make_shared<const KnowledgeGraph>(std::move(graph))});
}

void SnapshotSeries::append(Snapshot snapshot) {
  if (!snapshots_.empty() && snapshot.iteration <= snapshots_.back().iteration) {
    throw std::invalid_argument("snapshot iterations must strictly increase");
  }
  if (!snapshot.graph) throw std::invalid_argument("snapshot without graph");
  snapshots_.push_back(std::move(snapshot));
}

bool SnapshotSeries::is_growing() const {
  for (std::size_t i = 1; i < snapshots_.size(); ++i) {
    if (!snapshots_[i - 1].graph->is_subgraph_of(*snapshots_[i].graph)) return false;
  }
  return true;
}

}  // namespace dgr
