#include "dgr/agent_loop.hpp"

#include <chrono>
#include <ostream>

#include <fmt/format.h>

#include "dgr/errors.hpp"
#include "dgr/graphml.hpp"

namespace dgr {

void RunConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (mode == RunMode::Topic && topic.empty()) throw ConfigError("topic mode needs a topic");
  if (mode == RunMode::OpenEnded && prompt.empty()) throw ConfigError("the initial prompt is empty");
  if (synthetic && vocabulary_size < 10) {
    throw ConfigError("synthetic vocabulary size must be at least 10");
  }
  if (!synthetic && endpoint.endpoint.empty()) {
    throw ConfigError("no generator: pass an endpoint or use the synthetic generator");
  }
  if (snapshot_dir.empty()) throw ConfigError("snapshot directory is empty");
}

std::string build_initial_prompt(const RunConfig& cfg) {
  if (cfg.mode == RunMode::Topic) return fmt::format("Describe a way to design {}.", cfg.topic);
  return cfg.prompt;
}

std::string render_graph_listing(const KnowledgeGraph& recent) {
  std::string out;
  for (const auto& [key, display] : recent.nodes()) out += display + "\n";
  for (const auto& r : recent.edges()) {
    out += recent.display(r.source) + " -- " + r.kind + " -- " + recent.display(r.target) + "\n";
  }
  return out;
}

std::string build_followup_prompt(const KnowledgeGraph& recent, const RunConfig& cfg) {
  const std::string listing = render_graph_listing(recent);
  if (cfg.mode == RunMode::Topic) {
    return fmt::format(
        "Consider this list of keywords. Considering the broad topic of {}, formulate a creative "
        "follow-up question to ask about a totally new aspect. Your question should include at "
        "least one of the original keywords. \nOriginal list of keywords:\n{}\nReply only with "
        "the new question. The new question is:",
        cfg.topic, listing);
  }
  return fmt::format(
      "Consider this list of topics/keywords. Formulate a creative follow-up question to ask "
      "about a totally new concept. \nYour question should include at least one of the original "
      "topics/keywords.\nOriginal list of topics/keywords:\n{}\nReply only with the new "
      "question. The new question is:",
      listing);
}

std::unique_ptr<Generator> make_generator(const RunConfig& cfg) {
  if (cfg.synthetic) return std::make_unique<SyntheticGenerator>(cfg.seed, cfg.vocabulary_size);
  return std::make_unique<HttpGenerator>(cfg.endpoint);
}

RunResult run(const RunConfig& cfg, Generator& gen, RunHooks hooks) {
  cfg.validate();
  std::filesystem::create_directories(cfg.snapshot_dir);
  RunResult result;
  KnowledgeGraph& global = result.final_graph;
  std::string question = build_initial_prompt(cfg);

  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iteration = i;
    rec.question = question;
    std::size_t completed = i;
    try {
      const std::string response = gen.complete(question);
      const ReasoningBlock block = isolate_reasoning(response);
      rec.reasoning_length = block.text.size();
      rec.degraded = block.degraded;
      ExtractionOutcome outcome =
          extract_with_retry(gen, graph_section(block.text), cfg.max_retries);
      outcome.local.iteration = i;
      rec.retries = outcome.retries_used;
      rec.skipped = outcome.skipped;
      rec.defaulted_relations = outcome.local.defaulted_relations;
      rec.delta = merge_local(global, outcome.local.graph);

      write_graphml(global, cfg.snapshot_dir / snapshot_filename(i));
      if (hooks.keep_series) result.series.append(i, global);
      completed = i + 1;

      if (i + 1 < cfg.iterations) question = gen.complete(build_followup_prompt(outcome.local.graph, cfg));
    } catch (const GeneratorError& e) {
      throw RunAborted(fmt::format("run aborted at iteration {}: {}", i, e.what()), completed);
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (hooks.log) {
      *hooks.log << fmt::format("iteration {}: +{} nodes, +{} edges ({} nodes total){}\n", i,
                                rec.delta.added_nodes, rec.delta.added_edges, global.node_count(),
                                rec.skipped ? " [skipped]" : "");
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace dgr
