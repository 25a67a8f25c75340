#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dgr/generator.hpp"
#include "dgr/graph.hpp"

namespace dgr {

inline constexpr std::string_view kThinkingOpen = "<|thinking|>";
inline constexpr std::string_view kThinkingClose = "<|/thinking|>";

struct ReasoningBlock {
  std::string text;
  bool degraded = false;      // no opening marker; text is the whole response
  bool unterminated = false;  // opening marker without a closer
};

/// Text between the first opening marker and the first closing marker after it.
ReasoningBlock isolate_reasoning(std::string_view response);

/// The part of a reasoning block headed by a "graph" heading (e.g.
/// "**Graph:**" or "### Knowledge Graph"), up to the next heading. Returns
/// the whole block when no such heading exists.
std::string graph_section(std::string_view reasoning);

/// Graph parsed from one generator reply.
struct LocalGraph {
  KnowledgeGraph graph;
  std::size_t iteration = 0;
  std::size_t span_begin = 0;  // byte span of the literal in the parsed text
  std::size_t span_end = 0;
  std::size_t defaulted_relations = 0;  // edges whose relation tag was missing
  std::size_t dropped_entries = 0;      // entries with an empty label
};

/// Parses the first balanced `{...}` block of `text` as
///   {source: {target: {"relation": KIND}, ...}, ...}
/// Quotes may be single or double and trailing commas are fine. A relation
/// may also be a list of kinds, or a bare string in place of the attribute map.
/// Throws NoGraphFound when there is no `{`, MalformedLiteral otherwise.
LocalGraph parse_graph_literal(std::string_view text);

/// Inverse of parse_graph_literal: one line per source, keys in order,
/// nodes without outgoing edges listed with an empty map.
std::string to_graph_literal(const KnowledgeGraph& g);

/// The formatting instruction with `raw_graph` substituted.
std::string formatting_prompt(std::string_view raw_graph);

struct ExtractionOutcome {
  LocalGraph local;
  std::size_t retries_used = 0;
  bool skipped = false;  // every attempt failed to parse
  std::vector<std::string> errors;
};

/// Asks `gen` to format `raw_reasoning` as a literal and parses the reply,
/// re-asking with the parse error appended up to `max_retries` times.
/// GeneratorError from `gen` propagates.
ExtractionOutcome extract_with_retry(Generator& gen, std::string_view raw_reasoning,
                                     std::size_t max_retries = 2);

}  // namespace dgr
