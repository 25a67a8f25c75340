#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dgr/extraction.hpp"
#include "dgr/generator.hpp"
#include "dgr/graph.hpp"

namespace dgr {

enum class RunMode { OpenEnded, Topic };

inline constexpr std::string_view kDefaultPrompt =
    "Discuss an interesting idea in bio-inspired materials science.";

struct RunConfig {
  RunMode mode = RunMode::OpenEnded;
  std::string prompt{kDefaultPrompt};
  std::string topic;
  std::size_t iterations = 1;

  std::uint64_t seed = 0;           // synthetic generator
  std::uint64_t sampling_seed = 0;  // pair and path-length sampling during analysis
  std::uint64_t louvain_seed = 0;

  bool synthetic = false;
  std::size_t vocabulary_size = 40;
  HttpGeneratorOptions endpoint;

  std::size_t max_retries = 2;
  std::filesystem::path snapshot_dir = "snapshots";

  /// Throws ConfigError.
  void validate() const;
};

std::string build_initial_prompt(const RunConfig& cfg);

/// Node labels of `recent`, one per line, followed by its "A -- KIND -- B"
/// triples.
std::string render_graph_listing(const KnowledgeGraph& recent);

std::string build_followup_prompt(const KnowledgeGraph& recent, const RunConfig& cfg);

struct IterationRecord {
  std::size_t iteration = 0;
  std::string question;
  std::size_t reasoning_length = 0;
  bool degraded = false;  // reply had no reasoning markers
  MergeDelta delta;
  std::size_t retries = 0;
  std::size_t defaulted_relations = 0;
  bool skipped = false;
  double seconds = 0.0;
};

struct RunResult {
  SnapshotSeries series;  // empty unless keep_series was requested
  std::vector<IterationRecord> records;
  KnowledgeGraph final_graph;
};

struct RunHooks {
  bool keep_series = true;
  std::ostream* log = nullptr;
};

/// Runs cfg.iterations rounds of generate, isolate, extract, merge, write
/// `graph_iteration_{i}.graphml` and ask a follow-up question built from the
/// latest local graph. A generator transport failure throws RunAborted after
/// the snapshots of completed iterations have been written.
RunResult run(const RunConfig& cfg, Generator& gen, RunHooks hooks = {});

/// The generator a configuration asks for.
std::unique_ptr<Generator> make_generator(const RunConfig& cfg);

}  // namespace dgr
