#include "dgr/graphml.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "dgr/errors.hpp"

namespace dgr {

namespace pt = boost::property_tree;

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

const pt::ptree* child(const pt::ptree& tree, const char* name) {
  auto it = tree.find(name);
  return it == tree.not_found() ? nullptr : &it->second;
}

std::string attribute(const pt::ptree& node, const char* name) {
  // '/' as separator: GraphML attribute names such as "attr.name" contain dots.
  if (const auto* attrs = child(node, "<xmlattr>")) {
    return attrs->get<std::string>(pt::ptree::path_type(name, '/'), "");
  }
  return "";
}

}  // namespace

std::string to_graphml(const KnowledgeGraph& g, const NodeAttributes& extra) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out += "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out += "  <key id=\"d1\" for=\"edge\" attr.name=\"relation\" attr.type=\"string\"/>\n";
  std::vector<std::string> extra_ids;
  std::size_t next_key = 2;
  for (const auto& [name, values] : extra) {
    extra_ids.push_back(fmt::format("d{}", next_key++));
    out += fmt::format("  <key id=\"{}\" for=\"node\" attr.name=\"{}\" attr.type=\"double\"/>\n",
                       extra_ids.back(), escape(name));
  }
  out += "  <graph edgedefault=\"directed\">\n";
  for (const auto& [key, display] : g.nodes()) {
    out += fmt::format("    <node id=\"{}\">\n      <data key=\"d0\">{}</data>\n", escape(key),
                       escape(display));
    std::size_t i = 0;
    for (const auto& [name, values] : extra) {
      if (auto it = values.find(key); it != values.end()) {
        out += fmt::format("      <data key=\"{}\">{}</data>\n", extra_ids[i], it->second);
      }
      ++i;
    }
    out += "    </node>\n";
  }
  for (const auto& r : g.edges()) {
    out += fmt::format(
        "    <edge source=\"{}\" target=\"{}\">\n      <data key=\"d1\">{}</data>\n    </edge>\n",
        escape(r.source), escape(r.target), escape(r.kind));
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

void write_graphml(const KnowledgeGraph& g, const std::filesystem::path& path,
                   const NodeAttributes& extra) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << to_graphml(g, extra);
  file.flush();
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

GraphMLLoad parse_graphml(const std::string& text) {
  pt::ptree doc;
  std::istringstream in(text);
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw GraphMLError("malformed GraphML: " + e.message(), e.line());
  }
  const pt::ptree* root = child(doc, "graphml");
  if (!root) throw GraphMLError("missing <graphml> root element", 0);

  std::string label_key, relation_key;
  for (const auto& [name, node] : *root) {
    if (name != "key") continue;
    std::string for_what = attribute(node, "for");
    std::string attr_name = attribute(node, "attr.name");
    if (for_what == "node" && attr_name == "label") label_key = attribute(node, "id");
    if (for_what == "edge" && attr_name == "relation") relation_key = attribute(node, "id");
  }
  const pt::ptree* graph = child(*root, "graph");
  if (!graph) throw GraphMLError("missing <graph> element", 0);

  auto data_value = [](const pt::ptree& element, const std::string& key) -> std::optional<std::string> {
    if (key.empty()) return std::nullopt;
    for (const auto& [name, data] : element) {
      if (name == "data" && attribute(data, "key") == key) return data.get_value<std::string>();
    }
    return std::nullopt;
  };

  GraphMLLoad load;
  std::map<std::string, ConceptLabel> by_id;
  for (const auto& [name, node] : *graph) {
    if (name != "node") continue;
    std::string id = attribute(node, "id");
    if (id.empty()) throw GraphMLError("node without an id", 0);
    auto label = data_value(node, label_key).value_or(id);
    ConceptLabel concept_label;
    try {
      concept_label = normalize_label(label);
    } catch (const InvalidLabel&) {
      concept_label = normalize_label(id);
    }
    load.graph.add_node(concept_label);
    by_id[id] = concept_label;
  }
  for (const auto& [name, edge] : *graph) {
    if (name != "edge") continue;
    auto resolve = [&](const char* which) {
      std::string id = attribute(edge, which);
      auto it = by_id.find(id);
      if (it != by_id.end()) return it->second;
      // GraphML allows edges to name nodes that were never declared.
      try {
        auto label = normalize_label(id);
        by_id[id] = label;
        return label;
      } catch (const InvalidLabel&) {
        throw GraphMLError(fmt::format("edge with an empty {}", which), 0);
      }
    };
    ConceptLabel source = resolve("source");
    ConceptLabel target = resolve("target");
    auto kind = data_value(edge, relation_key);
    std::string normalized;
    if (kind) {
      try {
        normalized = normalize_relation_kind(*kind);
      } catch (const InvalidLabel&) {
        kind.reset();
      }
    }
    if (!kind) {
      normalized = std::string(kDefaultRelation);
      ++load.defaulted_relations;
    }
    load.graph.add_edge(source, normalized, target);
  }
  return load;
}

GraphMLLoad read_graphml_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw GraphMLError("cannot open " + path.string(), 0);
  std::ostringstream text;
  text << file.rdbuf();
  return parse_graphml(text.str());
}

KnowledgeGraph read_graphml(const std::filesystem::path& path) {
  return read_graphml_file(path).graph;
}

std::string snapshot_filename(std::size_t iteration) {
  return fmt::format("graph_iteration_{}.graphml", iteration);
}

std::optional<std::size_t> parse_snapshot_iteration(std::string_view filename) {
  static const std::regex kPattern(R"(^graph_iteration_(\d+)\.graphml$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(filename.begin(), filename.end(), m, kPattern)) return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoull(m[1].str()));
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

SnapshotSeries load_snapshot_series(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw GraphMLError("not a directory: " + dir.string(), 0);
  }
  std::map<std::size_t, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto i = parse_snapshot_iteration(entry.path().filename().string())) {
      files[*i] = entry.path();
    }
  }
  if (files.empty()) throw GraphMLError("no graph_iteration_*.graphml files in " + dir.string(), 0);
  SnapshotSeries series;
  for (const auto& [i, path] : files) {
    try {
      series.append(i, read_graphml(path));
    } catch (const GraphMLError& e) {
      throw GraphMLError(path.filename().string() + ": " + e.what(), e.line());
    }
  }
  return series;
}

}  // namespace dgr
