#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "dgr/errors.hpp"
#include "dgr/graphml.hpp"
#include "temp_dir.hpp"

using namespace dgr;
using dgr::testing::TempDir;

namespace {

KnowledgeGraph sample_graph() {
  KnowledgeGraph g;
  g.add_edge("Spider Silk", "IS-A", "Protein Fiber");
  g.add_edge("Spider Silk", "HAS", "Toughness & <Strength>");
  g.add_edge("Protein Fiber", "RELATES-TO", "Spider Silk");
  g.add_edge("Bone", "HAS", "Bone");
  g.add_node("O'Brien \"quoted\"");
  return g;
}

}  // namespace

TEST(GraphML, EmptyGraphIsValid) {
  auto text = to_graphml(KnowledgeGraph{});
  auto load = parse_graphml(text);
  EXPECT_TRUE(load.graph.empty());
  EXPECT_NE(text.find("edgedefault=\"directed\""), std::string::npos);
}

TEST(GraphML, RoundTripAndByteStable) {
  auto g = sample_graph();
  auto first = to_graphml(g);
  auto back = parse_graphml(first).graph;
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(back.nodes(), g.nodes());
  EXPECT_EQ(to_graphml(back), first);
}

TEST(GraphML, RandomRoundTrips) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> words{"Silk", "Bone", "A&B", "x<y", "Ünï", "tab\tword", "q\"uote"};
  const std::vector<std::string> kinds{"HAS", "IS-A", "PART-OF"};
  for (int t = 0; t < 100; ++t) {
    KnowledgeGraph g;
    int m = static_cast<int>(rng() % 15);
    for (int e = 0; e < m; ++e) {
      g.add_edge(words[rng() % words.size()] + std::to_string(rng() % 4), kinds[rng() % kinds.size()],
                 words[rng() % words.size()] + std::to_string(rng() % 4));
    }
    auto back = parse_graphml(to_graphml(g)).graph;
    EXPECT_EQ(back, g);
  }
}

TEST(GraphML, ExtraAttributesAreWrittenAndIgnoredOnRead) {
  auto g = sample_graph();
  NodeAttributes extra{{"degree", {{"bone", 2.0}, {"spider silk", 3.0}}}};
  auto text = to_graphml(g, extra);
  EXPECT_NE(text.find("attr.name=\"degree\""), std::string::npos);
  EXPECT_EQ(parse_graphml(text).graph, g);
}

TEST(GraphML, UnknownAttributeIgnored) {
  const std::string text = R"(<?xml version="1.0"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key id="d0" for="node" attr.name="label" attr.type="string"/>
  <key id="d1" for="edge" attr.name="relation" attr.type="string"/>
  <key id="d9" for="node" attr.name="colour" attr.type="string"/>
  <graph edgedefault="directed">
    <node id="a"><data key="d0">Alpha</data><data key="d9">red</data></node>
    <node id="b"><data key="d0">Beta</data></node>
    <edge source="a" target="b"><data key="d1">influences</data></edge>
  </graph>
</graphml>)";
  auto load = parse_graphml(text);
  EXPECT_EQ(load.graph.node_count(), 2u);
  EXPECT_TRUE(load.graph.contains_edge({"alpha", "INFLUENCES", "beta"}));
  EXPECT_EQ(load.defaulted_relations, 0u);
}

TEST(GraphML, MissingRelationDefaults) {
  const std::string text = R"(<graphml><graph edgedefault="directed">
  <node id="A"/><node id="B"/><edge source="A" target="B"/></graph></graphml>)";
  auto load = parse_graphml(text);
  EXPECT_EQ(load.defaulted_relations, 1u);
  EXPECT_TRUE(load.graph.contains_edge({"a", "RELATES-TO", "b"}));
}

TEST(GraphML, MalformedXmlReportsLine) {
  const std::string text = "<graphml>\n<graph>\n<node id=\"a\">\n</graph>\n</graphml>\n";
  try {
    parse_graphml(text);
    FAIL() << "expected GraphMLError";
  } catch (const GraphMLError& e) {
    EXPECT_GT(e.line(), 0u);
  }
  EXPECT_THROW(parse_graphml("<other/>"), GraphMLError);
}

TEST(Snapshots, FilenameRoundTrip) {
  EXPECT_EQ(snapshot_filename(7), "graph_iteration_7.graphml");
  EXPECT_EQ(parse_snapshot_iteration("graph_iteration_42.graphml"), 42u);
  EXPECT_FALSE(parse_snapshot_iteration("graph_iteration_x.graphml"));
  EXPECT_FALSE(parse_snapshot_iteration("graph_iteration_3.graphml.bak"));
  EXPECT_FALSE(parse_snapshot_iteration("notes.txt"));
}

TEST(Snapshots, NumericOrderNotLexical) {
  TempDir dir("order");
  KnowledgeGraph small, big;
  small.add_edge("A", "R", "B");
  big = small;
  big.add_edge("B", "R", "C");
  write_graphml(big, dir / "graph_iteration_10.graphml");
  write_graphml(small, dir / "graph_iteration_2.graphml");
  std::ofstream(dir / "README.txt") << "ignored";
  auto s = load_snapshot_series(dir.path());
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].iteration, 2u);
  EXPECT_EQ(s[1].iteration, 10u);
  EXPECT_EQ(s[1].graph->edge_count(), 2u);
}

TEST(Snapshots, EmptyDirectoryThrows) {
  TempDir dir("none");
  EXPECT_THROW(load_snapshot_series(dir.path()), GraphMLError);
  EXPECT_THROW(load_snapshot_series(dir / "missing"), GraphMLError);
}
