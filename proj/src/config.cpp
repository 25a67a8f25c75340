#include "dgr/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "dgr/errors.hpp"

namespace dgr {

namespace pt = boost::property_tree;

namespace {

template <class T>
void read(const pt::ptree& tree, const char* path, T& target) {
  if (auto v = tree.get_optional<std::string>(path)) {
    try {
      target = tree.get<T>(path);
    } catch (const pt::ptree_bad_data&) {
      throw ConfigError(fmt::format("invalid value for {}: '{}'", path, *v));
    }
  }
}

pt::ptree to_tree(const RunConfig& cfg) {
  pt::ptree tree;
  tree.put("run.mode", cfg.mode == RunMode::Topic ? "topic" : "open-ended");
  tree.put("run.prompt", cfg.prompt);
  tree.put("run.topic", cfg.topic);
  tree.put("run.iterations", cfg.iterations);
  tree.put("run.max_retries", cfg.max_retries);
  tree.put("run.snapshot_dir", cfg.snapshot_dir.string());
  tree.put("generator.synthetic", cfg.synthetic);
  tree.put("generator.vocabulary_size", cfg.vocabulary_size);
  tree.put("generator.endpoint", cfg.endpoint.endpoint);
  tree.put("generator.model", cfg.endpoint.model);
  if (cfg.endpoint.max_tokens) tree.put("generator.max_tokens", *cfg.endpoint.max_tokens);
  if (cfg.endpoint.temperature) tree.put("generator.temperature", *cfg.endpoint.temperature);
  tree.put("generator.timeout_seconds", cfg.endpoint.timeout.count());
  tree.put("generator.transport_retries", cfg.endpoint.transport_retries);
  tree.put("generator.token_env", cfg.endpoint.token_env);
  tree.put("seeds.seed", cfg.seed);
  tree.put("seeds.sampling_seed", cfg.sampling_seed);
  tree.put("seeds.louvain_seed", cfg.louvain_seed);
  return tree;
}

std::string write_tree(const pt::ptree& tree) {
  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  RunConfig cfg;
  std::string mode = tree.get<std::string>("run.mode", "open-ended");
  if (mode == "topic") cfg.mode = RunMode::Topic;
  else if (mode == "open-ended" || mode == "open") cfg.mode = RunMode::OpenEnded;
  else throw ConfigError("run.mode must be 'open-ended' or 'topic', not '" + mode + "'");
  read(tree, "run.prompt", cfg.prompt);
  read(tree, "run.topic", cfg.topic);
  read(tree, "run.iterations", cfg.iterations);
  read(tree, "run.max_retries", cfg.max_retries);
  std::string dir = cfg.snapshot_dir.string();
  read(tree, "run.snapshot_dir", dir);
  cfg.snapshot_dir = dir;

  read(tree, "generator.synthetic", cfg.synthetic);
  read(tree, "generator.vocabulary_size", cfg.vocabulary_size);
  read(tree, "generator.endpoint", cfg.endpoint.endpoint);
  read(tree, "generator.model", cfg.endpoint.model);
  if (tree.get_optional<std::string>("generator.max_tokens")) {
    int v = 0;
    read(tree, "generator.max_tokens", v);
    cfg.endpoint.max_tokens = v;
  }
  if (tree.get_optional<std::string>("generator.temperature")) {
    double v = 0;
    read(tree, "generator.temperature", v);
    cfg.endpoint.temperature = v;
  }
  long long timeout = cfg.endpoint.timeout.count();
  read(tree, "generator.timeout_seconds", timeout);
  cfg.endpoint.timeout = std::chrono::seconds(timeout);
  read(tree, "generator.transport_retries", cfg.endpoint.transport_retries);
  read(tree, "generator.token_env", cfg.endpoint.token_env);

  read(tree, "seeds.seed", cfg.seed);
  read(tree, "seeds.sampling_seed", cfg.sampling_seed);
  read(tree, "seeds.louvain_seed", cfg.louvain_seed);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return parse_run_config(text.str());
}

std::string format_run_config(const RunConfig& cfg) { return write_tree(to_tree(cfg)); }

RunSummary summarize_run(const RunResult& result) {
  RunSummary s;
  s.iterations_completed = result.records.size();
  for (const auto& rec : result.records) {
    s.retries += rec.retries;
    s.seconds += rec.seconds;
    if (rec.skipped) {
      ++s.skipped;
      s.skipped_iterations.push_back(rec.iteration);
    }
  }
  s.nodes = result.final_graph.node_count();
  s.edges = result.final_graph.edge_count();
  return s;
}

std::string format_manifest(const RunConfig& cfg, const RunSummary& summary) {
  pt::ptree tree = to_tree(cfg);
  tree.put("summary.iterations_completed", summary.iterations_completed);
  tree.put("summary.skipped", summary.skipped);
  tree.put("summary.retries", summary.retries);
  tree.put("summary.nodes", summary.nodes);
  tree.put("summary.relations", summary.edges);
  tree.put("summary.seconds", fmt::format("{:.3f}", summary.seconds));
  std::string skipped;
  for (auto i : summary.skipped_iterations) skipped += (skipped.empty() ? "" : ",") + std::to_string(i);
  tree.put("summary.skipped_iterations", skipped);
  return write_tree(tree);
}

void write_manifest(const RunConfig& cfg, const RunSummary& summary,
                    const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << format_manifest(cfg, summary);
}

}  // namespace dgr
