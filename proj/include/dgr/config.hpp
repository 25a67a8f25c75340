#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dgr/agent_loop.hpp"

namespace dgr {

/// INI configuration with [run], [generator] and [seeds] sections. Missing
/// keys keep their defaults; unknown sections are ignored.
/// Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text);

std::string format_run_config(const RunConfig& cfg);

struct RunSummary {
  std::size_t iterations_completed = 0;
  std::size_t skipped = 0;
  std::size_t retries = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double seconds = 0.0;
  std::vector<std::size_t> skipped_iterations;
};

RunSummary summarize_run(const RunResult& result);

/// The configuration plus a [summary] section. Loadable by load_run_config,
/// so a manifest replays its run.
std::string format_manifest(const RunConfig& cfg, const RunSummary& summary);
void write_manifest(const RunConfig& cfg, const RunSummary& summary,
                    const std::filesystem::path& path);

}  // namespace dgr
