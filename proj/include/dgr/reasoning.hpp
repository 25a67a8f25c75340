#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgr/generator.hpp"
#include "dgr/graph.hpp"
#include "dgr/paths.hpp"

namespace dgr {

/// Prefix of the text stored in place of a reply when the generator fails.
inline constexpr std::string_view kFailureMarker = "[generation failed: ";

struct ReasoningReport {
  ExtractedPath path;
  std::vector<std::string> relation_texts;  // "A -- KIND -- B" per step
  bool compositional = false;

  // Agentic mode.
  std::vector<std::string> node_insights;
  std::vector<std::string> relation_insights;
  std::string synthesis;

  // Compositional mode.
  std::vector<std::string> building_blocks;
  std::vector<std::string> pairwise_synergies;
  std::vector<std::string> bridge_synergies;
  std::string final_discovery;

  std::size_t calls = 0;
  std::vector<std::string> failures;
};

std::string node_prompt(std::string_view concept_label);
std::string relation_prompt(std::string_view relation_text);
std::string synthesis_prompt(const std::vector<std::string>& insights);

/// One prompt per node, one per consecutive relation, then one synthesis
/// prompt carrying every insight. A failing call leaves a failure marker in
/// its slot and the run continues. Throws std::invalid_argument for a path
/// without relations.
ReasoningReport agentic_path_report(const ExtractedPath& path, const KnowledgeGraph& g,
                                    Generator& gen);

std::string building_block_prompt(std::string_view concept_label);
std::string pairwise_synergy_prompt(std::string_view relation_text, std::string_view first_block,
                                    std::string_view second_block);
std::string bridge_synergy_prompt(std::span<const std::string> synergies);
std::string integration_prompt(const ReasoningReport& partial);

/// Steps A-D: a building block per node, a synergy per adjacent pair, bridge
/// synergies over consecutive groups of up to three pairwise synergies, and a
/// final integration sent to `final_gen`.
ReasoningReport compositional_pipeline(const ExtractedPath& path, const KnowledgeGraph& g,
                                       Generator& gen, Generator& final_gen);

std::string render_markdown(const ReasoningReport& report);

struct GraphContext {
  std::vector<std::string> betweenness_hubs;   // keys, best first
  std::vector<std::string> eigenvector_hubs;
  std::vector<std::vector<std::string>> community_representatives;  // largest first
  std::vector<std::size_t> community_sizes;
  std::vector<Relation> relationships;
  std::string prompt;
};

/// Hubs (top 10 by betweenness and by eigenvector centrality), the five
/// largest Louvain communities with their three highest-degree members, and
/// up to five edges from each hub to its highest-degree neighbours, rendered
/// as a context section followed by `task`. Throws EmptyGraph.
GraphContext graph_context(const KnowledgeGraph& g, std::string_view task, std::uint64_t seed = 0);

inline std::string graph_context_prompt(const KnowledgeGraph& g, std::string_view task,
                                        std::uint64_t seed = 0) {
  return graph_context(g, task, seed).prompt;
}

}  // namespace dgr
