#include <gtest/gtest.h>

#include <random>

#include "dgr/errors.hpp"
#include "dgr/extraction.hpp"
#include "scripted_generator.hpp"

using namespace dgr;
using dgr::testing::ScriptedGenerator;

TEST(IsolateReasoning, WellFormed) {
  auto b = isolate_reasoning("<|thinking|>abc<|/thinking|>xyz");
  EXPECT_EQ(b.text, "abc");
  EXPECT_FALSE(b.degraded);
  EXPECT_FALSE(b.unterminated);
}

TEST(IsolateReasoning, NoMarkersIsDegraded) {
  auto b = isolate_reasoning("no markers at all");
  EXPECT_EQ(b.text, "no markers at all");
  EXPECT_TRUE(b.degraded);
}

TEST(IsolateReasoning, FirstOpenFirstClose) {
  auto b = isolate_reasoning("<|thinking|>a<|thinking|>b<|/thinking|>");
  EXPECT_EQ(b.text, "a<|thinking|>b");
}

TEST(IsolateReasoning, UnterminatedKeepsRest) {
  auto b = isolate_reasoning("pre<|thinking|>rest of text");
  EXPECT_EQ(b.text, "rest of text");
  EXPECT_TRUE(b.unterminated);
}

TEST(GraphSection, TakesTextUnderGraphHeading) {
  std::string block =
      "**Reasoning Steps:**\nstep one\n\n**Graph:**\nA -- HAS -- B\nB -- IS-A -- C\n\n**Summary:**\ndone";
  auto s = graph_section(block);
  EXPECT_NE(s.find("A -- HAS -- B"), std::string::npos);
  EXPECT_NE(s.find("B -- IS-A -- C"), std::string::npos);
  EXPECT_EQ(s.find("step one"), std::string::npos);
  EXPECT_EQ(s.find("done"), std::string::npos);
}

TEST(GraphSection, MarkdownHeadingVariant) {
  auto s = graph_section("### Knowledge Graph\nX -- R -- Y\n### Next\nz");
  EXPECT_NE(s.find("X -- R -- Y"), std::string::npos);
  EXPECT_EQ(s.find('z'), std::string::npos);
}

TEST(GraphSection, FallsBackToWholeBlock) {
  EXPECT_EQ(graph_section("just text"), "just text");
}

TEST(ParseGraphLiteral, EmptyMap) {
  auto l = parse_graph_literal("{}");
  EXPECT_TRUE(l.graph.empty());
  EXPECT_EQ(l.graph.edge_count(), 0u);
}

TEST(ParseGraphLiteral, TypedEdge) {
  auto l = parse_graph_literal(
      R"({"Impact Resistant Materials": {"Materials": {"relation": "IS-A"}}})");
  EXPECT_EQ(l.graph.node_count(), 2u);
  ASSERT_EQ(l.graph.edge_count(), 1u);
  EXPECT_EQ(l.graph.edges().begin()->kind, "IS-A");
  EXPECT_EQ(l.graph.display("impact resistant materials"), "Impact Resistant Materials");
}

TEST(ParseGraphLiteral, ToleratesProseQuotesAndTrailingCommas) {
  auto l = parse_graph_literal(
      "Here you go:\n```python\n{'A': {'B': {'relation': 'has',},}, \"C\": {},}\n```\nHope it helps {x}");
  EXPECT_EQ(l.graph.node_count(), 3u);
  EXPECT_TRUE(l.graph.contains_edge({"a", "HAS", "b"}));
  EXPECT_GT(l.span_begin, 0u);
  EXPECT_LT(l.span_end, std::string("Here you go:\n```python\n{'A': {'B': {'relation': 'has',},}, \"C\": {},}\n").size() + 1);
}

TEST(ParseGraphLiteral, MissingRelationDefaults) {
  auto l = parse_graph_literal(R"({"A": {"B": {}, "C": {"weight": 2}}})");
  EXPECT_EQ(l.defaulted_relations, 2u);
  EXPECT_TRUE(l.graph.contains_edge({"a", "RELATES-TO", "b"}));
  EXPECT_TRUE(l.graph.contains_edge({"a", "RELATES-TO", "c"}));
}

TEST(ParseGraphLiteral, RelationListAndBareString) {
  auto l = parse_graph_literal(R"({"A": {"B": {"relation": ["IS-A", "HAS"]}, "C": "influences"}})");
  EXPECT_TRUE(l.graph.contains_edge({"a", "IS-A", "b"}));
  EXPECT_TRUE(l.graph.contains_edge({"a", "HAS", "b"}));
  EXPECT_TRUE(l.graph.contains_edge({"a", "INFLUENCES", "c"}));
}

TEST(ParseGraphLiteral, EmptyLabelsAreDropped) {
  auto l = parse_graph_literal(R"({"  ": {"B": {"relation": "R"}}, "A": {"": {"relation": "R"}}})");
  EXPECT_EQ(l.dropped_entries, 2u);
  EXPECT_EQ(l.graph.edge_count(), 0u);
}

TEST(ParseGraphLiteral, Errors) {
  EXPECT_THROW(parse_graph_literal("no braces here"), NoGraphFound);
  EXPECT_THROW(parse_graph_literal("{\"A\": {\"B\": {}}"), MalformedLiteral);
  EXPECT_THROW(parse_graph_literal("{\"A\" {}}"), MalformedLiteral);
  EXPECT_THROW(parse_graph_literal("{\"A\": 5}"), MalformedLiteral);
}

TEST(ParseGraphLiteral, EscapesDecode) {
  auto l = parse_graph_literal(R"({"café \x41": {"B\"q": {"relation": "R"}}})");
  EXPECT_TRUE(l.graph.contains_node("café a"));
  EXPECT_TRUE(l.graph.contains_node("b\"q"));
}

namespace {

KnowledgeGraph random_local(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"Silk",    "Bone",    "Nacre",  "Fiber",  "Self-healing",
                                                 "O'Neil",  "Quote\"d", "back\\slash", "Tab\tbed",
                                                 "Ünïcode", "x,y",     "{brace}", "colon:", "#hash"};
  static const std::vector<std::string> kinds = {"IS-A", "HAS", "RELATES-TO", "SIMILAR-TO", "INFLUENCES"};
  KnowledgeGraph g;
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1), k(0, kinds.size() - 1);
  std::uniform_int_distribution<int> count(0, 12), suffix(0, 5);
  int edges = count(rng);
  for (int e = 0; e < edges; ++e) {
    g.add_edge(words[w(rng)] + " " + std::to_string(suffix(rng)), kinds[k(rng)],
               words[w(rng)] + " " + std::to_string(suffix(rng)));
  }
  if (count(rng) % 3 == 0) g.add_node("Lonely " + std::to_string(suffix(rng)));
  return g;
}

}  // namespace

TEST(ParseGraphLiteral, RoundTripProperty) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    auto g = random_local(rng);
    auto back = parse_graph_literal(to_graph_literal(g)).graph;
    EXPECT_EQ(back.edges(), g.edges());
    EXPECT_EQ(back.nodes(), g.nodes());
  }
}

TEST(ParseGraphLiteral, ArbitraryBytesNeverCrash) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 80);
  const std::string alphabet = "{}[]()'\":,#\\ \nabcRELATION";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s.push_back(i % 2 ? static_cast<char>(byte(rng)) : alphabet[pick(rng)]);
    try {
      (void)parse_graph_literal(s);
    } catch (const Error&) {
    }
  }
}

TEST(ParseGraphLiteral, DeepNestingIsRejected) {
  std::string s(500, '{');
  s += std::string(500, '}');
  EXPECT_THROW(parse_graph_literal(s), MalformedLiteral);
}

TEST(FormattingPrompt, SubstitutesRawGraph) {
  auto p = formatting_prompt("A -- HAS -- B");
  EXPECT_EQ(p,
            "You are an AI that extracts information from structured text and outputs a graph in "
            "Python dictionary format compatible with NetworkX. \nGiven the following structured "
            "text: \nA -- HAS -- B\nOutput the graph as a Python dictionary without any additional "
            "text or explanations. Ensure the dictionary is properly formatted for immediate "
            "evaluation in Python.");
}

TEST(ExtractWithRetry, FirstReplyParses) {
  ScriptedGenerator gen({R"({"A": {"B": {"relation": "HAS"}}})"});
  auto out = extract_with_retry(gen, "A -- HAS -- B");
  EXPECT_EQ(out.retries_used, 0u);
  EXPECT_FALSE(out.skipped);
  EXPECT_EQ(out.local.graph.edge_count(), 1u);
  ASSERT_EQ(gen.prompts.size(), 1u);
  EXPECT_EQ(gen.prompts[0], formatting_prompt("A -- HAS -- B"));
}

TEST(ExtractWithRetry, SecondReplyParses) {
  ScriptedGenerator gen({"not a graph", R"({"A": {"B": {"relation": "HAS"}}})"});
  auto out = extract_with_retry(gen, "raw");
  EXPECT_EQ(out.retries_used, 1u);
  EXPECT_FALSE(out.skipped);
  ASSERT_EQ(gen.prompts.size(), 2u);
  EXPECT_NE(gen.prompts[1].find("could not be parsed"), std::string::npos);
  EXPECT_EQ(out.errors.size(), 1u);
}

TEST(ExtractWithRetry, ExhaustionSkips) {
  ScriptedGenerator gen({"{ broken"});
  auto out = extract_with_retry(gen, "raw", 2);
  EXPECT_TRUE(out.skipped);
  EXPECT_TRUE(out.local.graph.empty());
  EXPECT_EQ(gen.prompts.size(), 3u);
  EXPECT_EQ(out.errors.size(), 3u);
}

TEST(ExtractWithRetry, TransportFailurePropagates) {
  ScriptedGenerator gen({"{}"});
  gen.fail_on = {0};
  EXPECT_THROW(extract_with_retry(gen, "raw"), GeneratorError);
}
