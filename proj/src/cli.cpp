#include "dgr/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dgr/agent_loop.hpp"
#include "dgr/config.hpp"
#include "dgr/errors.hpp"
#include "dgr/graphml.hpp"
#include "dgr/paths.hpp"
#include "dgr/pipeline.hpp"
#include "dgr/reasoning.hpp"

namespace dgr {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestName = "manifest.ini";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunFlags {
  std::string config;
  std::string topic;
  std::string prompt;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::uint64_t sampling_seed = 0;
  std::uint64_t louvain_seed = 0;
  std::string endpoint;
  std::string model;
  int max_tokens = 0;
  double temperature = 0;
  long timeout = 0;
  bool synthetic = false;
  std::size_t vocabulary = 0;
  std::size_t max_retries = 0;
  std::string out;
  bool quiet = false;
};

struct AnalyzeFlags {
  std::string snapshots;
  std::string out;
  std::uint64_t sampling_seed = 0;
  std::uint64_t louvain_seed = 0;
  std::size_t pair_samples = 1000;
  bool exhaustive = false;
  std::size_t spl_samples = 2000;
  std::size_t top_n = 10;
};

struct PathFlags {
  std::string snapshots;
  std::string graph;
  std::string out;
  std::size_t k = 5;
  std::size_t correlate = 30;
  std::string mode = "none";
  bool synthetic = false;
  bool echo = false;
  std::uint64_t seed = 0;
  std::string endpoint;
  std::string model;
  std::string final_endpoint;
  std::string final_model;
  std::string context_task;
  std::uint64_t louvain_seed = 0;
};

struct ReportFlags {
  std::string snapshots;
  std::string analysis;
  std::string out;
  std::uint64_t louvain_seed = 0;
};

void do_run(const RunFlags& f, const CLI::App& cmd, std::ostream& out) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--topic")) {
    cfg.mode = RunMode::Topic;
    cfg.topic = f.topic;
  }
  if (given("--prompt")) {
    cfg.mode = RunMode::OpenEnded;
    cfg.prompt = f.prompt;
  }
  if (given("--iterations")) cfg.iterations = f.iterations;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--sampling-seed")) cfg.sampling_seed = f.sampling_seed;
  if (given("--louvain-seed")) cfg.louvain_seed = f.louvain_seed;
  if (given("--endpoint")) {
    cfg.endpoint.endpoint = f.endpoint;
    cfg.synthetic = false;
  }
  if (given("--model")) cfg.endpoint.model = f.model;
  if (given("--max-tokens")) cfg.endpoint.max_tokens = f.max_tokens;
  if (given("--temperature")) cfg.endpoint.temperature = f.temperature;
  if (given("--timeout")) cfg.endpoint.timeout = std::chrono::seconds(f.timeout);
  if (f.synthetic) cfg.synthetic = true;
  if (given("--vocabulary")) cfg.vocabulary_size = f.vocabulary;
  if (given("--max-retries")) cfg.max_retries = f.max_retries;
  if (given("--out")) cfg.snapshot_dir = f.out;
  cfg.validate();

  auto gen = make_generator(cfg);
  RunHooks hooks;
  hooks.keep_series = false;
  hooks.log = f.quiet ? nullptr : &out;
  RunResult result = run(cfg, *gen, hooks);

  write_manifest(cfg, summarize_run(result), cfg.snapshot_dir / kManifestName);
  std::string csv =
      "iteration,added_nodes,added_edges,retries,skipped,degraded,defaulted_relations,"
      "reasoning_length,question\n";
  for (const auto& r : result.records) {
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.iteration, r.delta.added_nodes,
                       r.delta.added_edges, r.retries, r.skipped ? 1 : 0, r.degraded ? 1 : 0,
                       r.defaulted_relations, r.reasoning_length, csv_field(r.question));
  }
  write_text(cfg.snapshot_dir / "iterations.csv", csv);
  out << fmt::format("wrote {} snapshots to {} ({} nodes, {} relations)\n", result.records.size(),
                     cfg.snapshot_dir.string(), result.final_graph.node_count(),
                     result.final_graph.edge_count());
}

void do_analyze(const AnalyzeFlags& f, const CLI::App& cmd, std::ostream& out) {
  AnalysisOptions opt;
  const fs::path dir = f.snapshots;
  if (fs::exists(dir / kManifestName)) {
    RunConfig manifest = load_run_config(dir / kManifestName);
    opt.sampling_seed = manifest.sampling_seed;
    opt.louvain_seed = manifest.louvain_seed;
  }
  if (cmd.count("--sampling-seed")) opt.sampling_seed = f.sampling_seed;
  if (cmd.count("--louvain-seed")) opt.louvain_seed = f.louvain_seed;
  opt.pair_samples = f.pair_samples;
  opt.exhaustive_pairs = f.exhaustive;
  opt.spl_samples = f.spl_samples;
  opt.top_n = f.top_n;

  SnapshotSeries series = load_snapshot_series(dir);
  SeriesAnalysis analysis = analyze_series(series, opt);
  const fs::path out_dir = f.out.empty() ? dir / "analysis" : fs::path(f.out);
  auto files = write_analysis(analysis, out_dir);
  out << fmt::format("analyzed {} snapshots; wrote {} files to {}\n", series.size(), files.size(),
                     out_dir.string());
}

std::unique_ptr<Generator> path_generator(const PathFlags& f, const std::string& endpoint,
                                          const std::string& model) {
  if (f.echo) return std::make_unique<EchoGenerator>();
  if (!endpoint.empty()) {
    HttpGeneratorOptions o;
    o.endpoint = endpoint;
    o.model = model;
    return std::make_unique<HttpGenerator>(o);
  }
  if (f.synthetic) return std::make_unique<SyntheticGenerator>(f.seed);
  throw ConfigError("path reasoning needs --endpoint, --synthetic or --echo");
}

void do_paths(const PathFlags& f, std::ostream& out) {
  KnowledgeGraph g;
  fs::path out_dir;
  if (!f.graph.empty()) {
    g = read_graphml(f.graph);
    out_dir = f.out.empty() ? fs::path(f.graph).parent_path() / "paths" : fs::path(f.out);
  } else if (!f.snapshots.empty()) {
    auto series = load_snapshot_series(f.snapshots);
    g = *series.back().graph;
    out_dir = f.out.empty() ? fs::path(f.snapshots) / "paths" : fs::path(f.out);
  } else {
    throw ConfigError("paths needs --graph or --snapshots");
  }
  fs::create_directories(out_dir);
  NodeMetricTable table = node_metric_table(g);

  auto with_attributes = [&](const ExtractedPath& p) {
    NodeAttributes attrs;
    for (std::size_t i = 0; i < p.keys.size(); ++i) {
      attrs["betweenness"][p.keys[i]] = p.metrics[i].betweenness;
      attrs["closeness"][p.keys[i]] = p.metrics[i].closeness;
      attrs["degree"][p.keys[i]] = p.metrics[i].degree;
    }
    return attrs;
  };

  ExtractedPath diameter = diameter_path(g, table);
  write_graphml(path_subgraph(g, diameter), out_dir / "diameter_path.graphml",
                with_attributes(diameter));

  auto ranked = top_k_longest_paths(g, table, std::max(f.k, f.correlate));
  std::string csv = "rank,length,source,target,nodes\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& p = ranked[i];
    std::string nodes;
    for (const auto& label : p.labels) nodes += (nodes.empty() ? "" : " > ") + label;
    csv += fmt::format("{},{},{},{},{}\n", i + 1, p.length(), csv_field(p.keys.front()),
                       csv_field(p.keys.back()), csv_field(nodes));
    if (i < f.k) {
      write_graphml(path_subgraph(g, p), out_dir / fmt::format("path_{}.graphml", i + 1),
                    with_attributes(p));
    }
  }
  write_text(out_dir / "paths.csv", csv);

  if (ranked.size() >= 3) {
    std::span<const ExtractedPath> sample(ranked.data(), std::min(ranked.size(), f.correlate));
    if (sample.size() >= 3) {
      auto corr = path_metric_correlations(sample, table);
      std::string metrics = "path";
      for (auto name : kPathMetricNames) metrics += fmt::format(",{}", name);
      metrics += "\n";
      for (std::size_t i = 0; i < corr.per_path.size(); ++i) {
        metrics += std::to_string(i + 1);
        for (double v : corr.per_path[i]) metrics += fmt::format(",{}", v);
        metrics += "\n";
      }
      write_text(out_dir / "path_metrics.csv", metrics);
      std::string c = "metric_a,metric_b,correlation\n";
      for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
          const auto& v = corr.values[i][j];
          c += fmt::format("{},{},{}\n", kPathMetricNames[i], kPathMetricNames[j],
                           v ? fmt::format("{}", *v) : std::string("NA"));
        }
      }
      write_text(out_dir / "correlations.csv", c);
    }
  }

  if (!f.context_task.empty()) {
    write_text(out_dir / "context_prompt.md", graph_context_prompt(g, f.context_task, f.louvain_seed));
  }

  if (f.mode != "none") {
    auto gen = path_generator(f, f.endpoint, f.model);
    ReasoningReport report;
    if (f.mode == "agentic") {
      report = agentic_path_report(diameter, g, *gen);
    } else {
      std::unique_ptr<Generator> final_gen;
      if (!f.final_endpoint.empty()) final_gen = path_generator(f, f.final_endpoint, f.final_model);
      report = compositional_pipeline(diameter, g, *gen, final_gen ? *final_gen : *gen);
    }
    write_text(out_dir / fmt::format("{}_report.md", f.mode), render_markdown(report));
    out << fmt::format("{} report: {} generator calls, {} failures\n", f.mode, report.calls,
                       report.failures.size());
  }
  out << fmt::format("diameter path length {}; wrote results to {}\n", diameter.length(),
                     out_dir.string());
}

void do_report(const ReportFlags& f, std::ostream& out) {
  const fs::path dir = f.snapshots;
  auto series = load_snapshot_series(dir);
  std::uint64_t louvain_seed = f.louvain_seed;
  std::string manifest;
  if (fs::exists(dir / kManifestName)) {
    manifest = read_text(dir / kManifestName);
    louvain_seed = parse_run_config(manifest).louvain_seed;
  }
  SnapshotMetrics final_metrics = snapshot_metrics(series.back(), louvain_seed);
  const fs::path out_dir = f.out.empty() ? dir / "report" : fs::path(f.out);
  fs::create_directories(out_dir);

  const std::string table = render_summary_markdown(final_metrics);
  std::string csv = "metric,value\n";
  for (const auto& [label, value] : summary_table(final_metrics)) {
    csv += csv_field(label) + "," + value + "\n";
  }
  write_text(out_dir / "summary.csv", csv);
  write_text(out_dir / "summary.md", table);

  std::string md = fmt::format("# Graph report\n\nFinal snapshot: iteration {} of {} snapshots.\n\n",
                               final_metrics.iteration, series.size());
  md += "## Network properties\n\n" + table;
  const fs::path analysis = f.analysis.empty() ? dir / "analysis" : fs::path(f.analysis);
  if (fs::is_directory(analysis)) {
    md += "\n## Analysis tables\n\n";
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(analysis)) {
      if (e.path().extension() == ".csv") names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) md += fmt::format("- `{}`\n", (analysis / n).string());
  }
  if (!manifest.empty()) md += "\n## Run manifest\n\n```ini\n" + manifest + "```\n";
  write_text(out_dir / "report.md", md);
  out << table;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative graph reasoning runs and temporal graph analytics"};
  app.name("dgr");
  app.require_subcommand(1);

  RunFlags rf;
  auto* run_cmd = app.add_subcommand("run", "Run the iterative reasoning loop and write snapshots");
  run_cmd->add_option("--config", rf.config, "INI configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--topic", rf.topic, "Topic mode with this topic");
  run_cmd->add_option("--prompt", rf.prompt, "Open-ended mode with this initial prompt");
  run_cmd->add_option("--iterations", rf.iterations, "Number of iterations")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", rf.seed, "Synthetic generator seed");
  run_cmd->add_option("--sampling-seed", rf.sampling_seed, "Seed for pair and path sampling");
  run_cmd->add_option("--louvain-seed", rf.louvain_seed, "Seed for community detection");
  run_cmd->add_option("--endpoint", rf.endpoint, "Completion endpoint URL");
  run_cmd->add_option("--model", rf.model, "Model name sent to the endpoint");
  run_cmd->add_option("--max-tokens", rf.max_tokens, "Maximum tokens per completion");
  run_cmd->add_option("--temperature", rf.temperature, "Sampling temperature");
  run_cmd->add_option("--timeout", rf.timeout, "Request timeout in seconds");
  run_cmd->add_flag("--synthetic", rf.synthetic, "Use the built-in synthetic generator");
  run_cmd->add_option("--vocabulary", rf.vocabulary, "Synthetic vocabulary size");
  run_cmd->add_option("--max-retries", rf.max_retries, "Formatting retries per iteration");
  run_cmd->add_option("--out", rf.out, "Snapshot directory");
  run_cmd->add_flag("--quiet", rf.quiet, "No per-iteration log");

  AnalyzeFlags af;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute metric time series over snapshots");
  analyze_cmd->add_option("--snapshots", af.snapshots, "Snapshot directory")->required();
  analyze_cmd->add_option("--out", af.out, "Output directory (default: <snapshots>/analysis)");
  analyze_cmd->add_option("--sampling-seed", af.sampling_seed, "Seed for pair sampling");
  analyze_cmd->add_option("--louvain-seed", af.louvain_seed, "Seed for community detection");
  analyze_cmd->add_option("--pair-samples", af.pair_samples, "Pairs sampled per snapshot");
  analyze_cmd->add_flag("--exhaustive-pairs", af.exhaustive, "Track every node pair");
  analyze_cmd->add_option("--spl-samples", af.spl_samples, "Pairs for the path-length histogram")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--top", af.top_n, "Number of hubs and betweenness traces");

  PathFlags pf;
  auto* paths_cmd = app.add_subcommand("paths", "Extract longest shortest paths and reason over them");
  paths_cmd->add_option("--snapshots", pf.snapshots, "Snapshot directory (uses the last snapshot)");
  paths_cmd->add_option("--graph", pf.graph, "A single GraphML file");
  paths_cmd->add_option("--out", pf.out, "Output directory");
  paths_cmd->add_option("-k,--top", pf.k, "Paths written as GraphML");
  paths_cmd->add_option("--correlate", pf.correlate, "Paths used for metric correlations");
  paths_cmd->add_option("--mode", pf.mode, "Reasoning over the diameter path")
      ->check(CLI::IsMember({"none", "agentic", "compositional"}));
  paths_cmd->add_flag("--synthetic", pf.synthetic, "Use the synthetic generator");
  paths_cmd->add_flag("--echo", pf.echo, "Use a generator that echoes prompts");
  paths_cmd->add_option("--seed", pf.seed, "Synthetic generator seed");
  paths_cmd->add_option("--endpoint", pf.endpoint, "Completion endpoint URL");
  paths_cmd->add_option("--model", pf.model, "Model name");
  paths_cmd->add_option("--final-endpoint", pf.final_endpoint, "Endpoint for the final integration step");
  paths_cmd->add_option("--final-model", pf.final_model, "Model for the final integration step");
  paths_cmd->add_option("--context-task", pf.context_task, "Write a graph-informed prompt for this task");
  paths_cmd->add_option("--louvain-seed", pf.louvain_seed, "Seed for community detection");

  ReportFlags rpf;
  auto* report_cmd = app.add_subcommand("report", "Summarise the final snapshot");
  report_cmd->add_option("--snapshots", rpf.snapshots, "Snapshot directory")->required();
  report_cmd->add_option("--analysis", rpf.analysis, "Analysis directory to reference");
  report_cmd->add_option("--out", rpf.out, "Output directory (default: <snapshots>/report)");
  report_cmd->add_option("--louvain-seed", rpf.louvain_seed, "Seed for community detection");

  std::vector<std::string> argv_store{"dgr"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) do_run(rf, *run_cmd, out);
    else if (*analyze_cmd) do_analyze(af, *analyze_cmd, out);
    else if (*paths_cmd) do_paths(pf, out);
    else if (*report_cmd) do_report(rpf, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dgr
