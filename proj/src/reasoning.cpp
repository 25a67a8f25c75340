#include "dgr/reasoning.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "dgr/analytics.hpp"
#include "dgr/errors.hpp"
#include "dgr/louvain.hpp"

namespace dgr {

namespace {

std::string ask(Generator& gen, const std::string& prompt, ReasoningReport& report) {
  ++report.calls;
  try {
    return gen.complete(prompt);
  } catch (const GeneratorError& e) {
    report.failures.push_back(e.what());
    return std::string(kFailureMarker) + e.what() + "]";
  }
}

ReasoningReport start_report(const ExtractedPath& path, const KnowledgeGraph& g) {
  if (path.keys.size() < 2) throw std::invalid_argument("reasoning needs a path with at least one relation");
  ReasoningReport r;
  r.path = path;
  for (const auto& rel : path.relations) r.relation_texts.push_back(describe_relation(g, rel));
  return r;
}

}  // namespace

std::string node_prompt(std::string_view concept_label) {
  return fmt::format("Analyze concept {} in a novel scientific context.", concept_label);
}

std::string relation_prompt(std::string_view relation_text) {
  return fmt::format("Analyze relationship {} and hypothesize new implications.", relation_text);
}

std::string synthesis_prompt(const std::vector<std::string>& insights) {
  std::string out = "Synthesize a novel discovery from the following insights:\n";
  for (std::size_t i = 0; i < insights.size(); ++i) {
    out += fmt::format("\n[{}] {}\n", i + 1, insights[i]);
  }
  return out;
}

ReasoningReport agentic_path_report(const ExtractedPath& path, const KnowledgeGraph& g,
                                    Generator& gen) {
  ReasoningReport r = start_report(path, g);
  for (const auto& label : path.labels) r.node_insights.push_back(ask(gen, node_prompt(label), r));
  for (const auto& text : r.relation_texts) {
    r.relation_insights.push_back(ask(gen, relation_prompt(text), r));
  }
  std::vector<std::string> all = r.node_insights;
  all.insert(all.end(), r.relation_insights.begin(), r.relation_insights.end());
  r.synthesis = ask(gen, synthesis_prompt(all), r);
  return r;
}

std::string building_block_prompt(std::string_view concept_label) {
  return fmt::format(
      "Write a building block for the concept \"{}\": a short definition, the principles it "
      "rests on, and one property that could combine well with neighbouring ideas.",
      concept_label);
}

std::string pairwise_synergy_prompt(std::string_view relation_text, std::string_view first_block,
                                    std::string_view second_block) {
  return fmt::format(
      "Two adjacent concepts are linked as: {}\n\nBuilding block 1:\n{}\n\nBuilding block 2:\n{}\n\n"
      "Merge the two building blocks into one pairwise synergy that neither concept offers alone.",
      relation_text, first_block, second_block);
}

std::string bridge_synergy_prompt(std::span<const std::string> synergies) {
  std::string out = "Consolidate the following synergy statements into a single bridge synergy:\n";
  for (std::size_t i = 0; i < synergies.size(); ++i) {
    out += fmt::format("\n[{}] {}\n", i + 1, synergies[i]);
  }
  return out;
}

std::string integration_prompt(const ReasoningReport& partial) {
  std::string out =
      "Integrate every building block and synergy below into one coherent, novel discovery.\n";
  out += "\n## Building blocks\n";
  for (std::size_t i = 0; i < partial.building_blocks.size(); ++i) {
    out += fmt::format("\n### {}\n{}\n", partial.path.labels[i], partial.building_blocks[i]);
  }
  out += "\n## Pairwise synergies\n";
  for (std::size_t i = 0; i < partial.pairwise_synergies.size(); ++i) {
    out += fmt::format("\n### {}\n{}\n", partial.relation_texts[i], partial.pairwise_synergies[i]);
  }
  out += "\n## Bridge synergies\n";
  for (std::size_t i = 0; i < partial.bridge_synergies.size(); ++i) {
    out += fmt::format("\n### Bridge {}\n{}\n", i + 1, partial.bridge_synergies[i]);
  }
  return out;
}

ReasoningReport compositional_pipeline(const ExtractedPath& path, const KnowledgeGraph& g,
                                       Generator& gen, Generator& final_gen) {
  ReasoningReport r = start_report(path, g);
  r.compositional = true;
  for (const auto& label : path.labels) {
    r.building_blocks.push_back(ask(gen, building_block_prompt(label), r));
  }
  for (std::size_t i = 0; i < r.relation_texts.size(); ++i) {
    r.pairwise_synergies.push_back(ask(
        gen, pairwise_synergy_prompt(r.relation_texts[i], r.building_blocks[i], r.building_blocks[i + 1]),
        r));
  }
  const std::span<const std::string> synergies(r.pairwise_synergies);
  for (std::size_t i = 0; i < synergies.size(); i += 3) {
    auto group = synergies.subspan(i, std::min<std::size_t>(3, synergies.size() - i));
    r.bridge_synergies.push_back(ask(gen, bridge_synergy_prompt(group), r));
  }
  r.final_discovery = ask(final_gen, integration_prompt(r), r);
  return r;
}

std::string render_markdown(const ReasoningReport& r) {
  std::string out;
  out += r.compositional ? "# Compositional reasoning report\n" : "# Path reasoning report\n";
  out += "\n## Extracted path\n\n";
  for (std::size_t i = 0; i < r.path.labels.size(); ++i) {
    const auto& m = r.path.metrics.size() > i ? r.path.metrics[i] : PathNodeMetrics{};
    out += fmt::format("{}. {} (degree {:.0f}, betweenness {:.4f}, closeness {:.4f})\n", i + 1,
                       r.path.labels[i], m.degree, m.betweenness, m.closeness);
  }
  out += "\nRelations:\n\n";
  for (const auto& text : r.relation_texts) out += "- " + text + "\n";

  auto section = [&](std::string_view title, const std::vector<std::string>& heads,
                     const std::vector<std::string>& bodies) {
    out += fmt::format("\n## {}\n", title);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      out += fmt::format("\n### {}\n\n{}\n", i < heads.size() ? heads[i] : fmt::format("{}", i + 1),
                         bodies[i]);
    }
  };
  if (r.compositional) {
    section("Building blocks", r.path.labels, r.building_blocks);
    section("Pairwise synergies", r.relation_texts, r.pairwise_synergies);
    std::vector<std::string> bridge_heads;
    for (std::size_t i = 0; i < r.bridge_synergies.size(); ++i) {
      bridge_heads.push_back(fmt::format("Bridge {}", i + 1));
    }
    section("Bridge synergies", bridge_heads, r.bridge_synergies);
    out += "\n## Final discovery\n\n" + r.final_discovery + "\n";
  } else {
    section("Node insights", r.path.labels, r.node_insights);
    section("Relation insights", r.relation_texts, r.relation_insights);
    out += "\n## Final synthesized discovery\n\n" + r.synthesis + "\n";
  }
  if (!r.failures.empty()) {
    out += fmt::format("\n## Generation failures\n\n{} of {} calls failed.\n", r.failures.size(),
                       r.calls);
  }
  return out;
}

GraphContext graph_context(const KnowledgeGraph& g, std::string_view task, std::uint64_t seed) {
  if (g.empty()) throw EmptyGraph("graph context of an empty graph");
  auto view = undirected_view(g);
  const std::size_t n = view.node_count();
  auto bc = betweenness_centrality(view);
  auto eig = eigenvector_centrality(view).values;

  auto top_by = [&](const std::vector<double>& score, std::size_t k) {
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(),
                     [&](NodeId a, NodeId b) { return score[a] > score[b]; });
    if (ids.size() > k) ids.resize(k);
    return ids;
  };
  std::vector<double> degree(n);
  for (NodeId v = 0; v < n; ++v) degree[v] = static_cast<double>(view.degree(v));

  GraphContext ctx;
  auto bc_top = top_by(bc, 10);
  auto eig_top = top_by(eig, 10);
  for (NodeId v : bc_top) ctx.betweenness_hubs.push_back(view.key(v));
  for (NodeId v : eig_top) ctx.eigenvector_hubs.push_back(view.key(v));

  auto partition = louvain(view, seed);
  std::vector<std::vector<NodeId>> members(partition.community_count);
  for (NodeId v = 0; v < n; ++v) members[partition.community[v]].push_back(v);
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (std::size_t c = 0; c < members.size() && c < 5; ++c) {
    auto ranked = members[c];
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](NodeId a, NodeId b) { return degree[a] > degree[b]; });
    std::vector<std::string> reps;
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) reps.push_back(view.key(ranked[i]));
    ctx.community_representatives.push_back(std::move(reps));
    ctx.community_sizes.push_back(members[c].size());
  }

  std::vector<NodeId> hubs = bc_top;
  for (NodeId v : eig_top) {
    if (std::find(hubs.begin(), hubs.end(), v) == hubs.end()) hubs.push_back(v);
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (NodeId h : hubs) {
    std::vector<NodeId> nbrs(view.neighbors(h).begin(), view.neighbors(h).end());
    std::stable_sort(nbrs.begin(), nbrs.end(),
                     [&](NodeId a, NodeId b) { return degree[a] > degree[b]; });
    for (std::size_t i = 0; i < nbrs.size() && i < 5; ++i) {
      auto pair = std::minmax(h, nbrs[i]);
      if (!seen.insert(pair).second) continue;
      ctx.relationships.push_back(relation_between(g, view.key(h), view.key(nbrs[i])));
    }
  }

  std::string& p = ctx.prompt;
  p += "## Knowledge graph context\n\n";
  p += "### Key hubs by betweenness centrality\n";
  for (NodeId v : bc_top) p += fmt::format("- {} ({:.4f})\n", view.label(v), bc[v]);
  p += "\n### Key influencers by eigenvector centrality\n";
  for (NodeId v : eig_top) p += fmt::format("- {} ({:.4f})\n", view.label(v), eig[v]);
  p += "\n### Largest communities\n";
  for (std::size_t c = 0; c < ctx.community_representatives.size(); ++c) {
    std::string names;
    for (const auto& key : ctx.community_representatives[c]) {
      if (!names.empty()) names += ", ";
      names += g.display(key);
    }
    p += fmt::format("- Community {} ({} concepts): {}\n", c + 1, ctx.community_sizes[c], names);
  }
  p += "\n### Key relationships\n";
  for (const auto& rel : ctx.relationships) p += "- " + describe_relation(g, rel) + "\n";
  p += "\nUse the concepts and relationships above to inform your answer.\n\n## Task\n\n";
  p += task;
  p += "\n";
  return ctx;
}

}  // namespace dgr
