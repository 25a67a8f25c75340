#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dgr/graph.hpp"

namespace dgr {

/// Extra numeric node attributes: attribute name -> (node key -> value).
using NodeAttributes = std::map<std::string, std::map<std::string, double>>;

/// Directed GraphML with a "label" node attribute (the display label) and a
/// "relation" edge attribute. Nodes are written in key order and edges in
/// triple order, so equal graphs give identical bytes.
std::string to_graphml(const KnowledgeGraph& g, const NodeAttributes& extra = {});
void write_graphml(const KnowledgeGraph& g, const std::filesystem::path& path,
                   const NodeAttributes& extra = {});

struct GraphMLLoad {
  KnowledgeGraph graph;
  std::size_t defaulted_relations = 0;  // edges without a relation attribute
};

/// Parses GraphML text. Unknown attributes are ignored, labels are
/// re-normalised and edges without a relation become RELATES-TO.
/// Throws GraphMLError (with a line number for XML syntax errors).
GraphMLLoad parse_graphml(const std::string& text);
GraphMLLoad read_graphml_file(const std::filesystem::path& path);
KnowledgeGraph read_graphml(const std::filesystem::path& path);

std::string snapshot_filename(std::size_t iteration);

/// Iteration number of a `graph_iteration_{i}.graphml` file name.
std::optional<std::size_t> parse_snapshot_iteration(std::string_view filename);

/// Every snapshot file of `dir`, ordered by iteration number. Throws
/// GraphMLError when the directory holds none.
SnapshotSeries load_snapshot_series(const std::filesystem::path& dir);

}  // namespace dgr
