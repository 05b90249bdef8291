// Copyright 2026 The amrsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "amrsum/amr_graph.hpp"
#include "amrsum/penman.hpp"
#include "test_support.hpp"

namespace amrsum {
namespace {

using Path = std::vector<std::string>;

const char* kLook = "(l / look-01 :ARG0 (i / i) :manner (c / careful) :direction (a / around :op1 i))";
const char* kCause = "(c / cause-01 :ARG1 (r / run-02 :ARG0 (p / person :name (n / name :op1 \"Ann\"))))";

TEST(AmrGraphTest, RejectsRootOutsideNodes) {
  EXPECT_THROW(AmrGraph("x", {{"a", "apple"}}, {}), std::invalid_argument);
}

TEST(AmrGraphTest, RejectsDanglingEdgeEndpoints) {
  EXPECT_THROW(AmrGraph("a", {{"a", "apple"}}, {{"a", ":ARG0", Variable{"b"}, false}}),
               std::invalid_argument);
  EXPECT_THROW(AmrGraph("a", {{"a", "apple"}}, {{"b", ":ARG0", Variable{"a"}, false}}),
               std::invalid_argument);
}

TEST(AmrGraphTest, RejectsRoleWithoutColon) {
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}}, {{"a", "ARG0", Variable{"b"}, true}}),
               std::invalid_argument);
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}}, {{"a", ":", Variable{"b"}, true}}),
               std::invalid_argument);
}

TEST(AmrGraphTest, RejectsBrokenSpanningTree) {
  // b unreachable through tree edges
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}}, {{"a", ":ARG0", Variable{"b"}, false}}),
               std::invalid_argument);
  // b has two tree parents
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}, {"c", "z"}},
                        {{"a", ":ARG0", Variable{"b"}, true},
                         {"a", ":ARG1", Variable{"c"}, true},
                         {"c", ":ARG0", Variable{"b"}, true}}),
               std::invalid_argument);
  // tree edge into the root
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}},
                        {{"a", ":ARG0", Variable{"b"}, true}, {"b", ":ARG0", Variable{"a"}, true}}),
               std::invalid_argument);
  // tree cycle detached from the root
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}, {"b", "y"}, {"c", "z"}},
                        {{"b", ":ARG0", Variable{"c"}, true}, {"c", ":ARG0", Variable{"b"}, true}}),
               std::invalid_argument);
}

TEST(AmrGraphTest, RejectsConstantTreeEdgeAndBadIdentifiers) {
  EXPECT_THROW(AmrGraph("a", {{"a", "x"}}, {{"a", ":op1", Constant{Constant::Kind::kString, "A"}, true}}),
               std::invalid_argument);
  EXPECT_THROW(AmrGraph("a b", {{"a b", "x"}}, {}), std::invalid_argument);
  EXPECT_THROW(AmrGraph("a", {{"a", "two words"}}, {}), std::invalid_argument);
  EXPECT_THROW(AmrGraph(":a", {{":a", "x"}}, {}), std::invalid_argument);
}

TEST(AmrGraphTest, AccessorsOnFigureGraph) {
  const AmrGraph g = parse_penman(kLook);
  EXPECT_EQ(g.root(), "l");
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.concept_of("a"), "around");
  EXPECT_THROW(g.concept_of("zz"), std::out_of_range);
  EXPECT_EQ(g.tree_edges().size(), 3u);
  EXPECT_EQ(g.parent("a"), std::optional<std::string>("l"));
  EXPECT_EQ(g.parent("i"), std::optional<std::string>("l"));
  EXPECT_EQ(g.parent("l"), std::nullopt);
  EXPECT_THROW(g.parent("zz"), std::out_of_range);
  EXPECT_EQ(g.preorder(), (Path{"l", "i", "c", "a"}));
}

TEST(PathToRootTest, Examples) {
  const AmrGraph cause = parse_penman(kCause);
  EXPECT_EQ(path_to_root(cause, "c"), Path{"c"});
  EXPECT_EQ(path_to_root(cause, "p"), (Path{"p", "r", "c"}));
  const AmrGraph look = parse_penman(kLook);
  EXPECT_EQ(path_to_root(look, "a"), (Path{"a", "l"}));
  // i is reachable from a through a re-entrancy, but the tree path is direct.
  EXPECT_EQ(path_to_root(look, "i"), (Path{"i", "l"}));
  EXPECT_THROW(path_to_root(look, "q"), std::out_of_range);
}

TEST(SubtreeTest, Examples) {
  const AmrGraph cause = parse_penman(kCause);
  EXPECT_EQ(subtree(cause, "c"), cause);
  const AmrGraph r = subtree(cause, "r");
  EXPECT_EQ(r.root(), "r");
  EXPECT_EQ(r.nodes(), (AmrGraph::NodeMap{{"r", "run-02"}, {"p", "person"}, {"n", "name"}}));
  EXPECT_FALSE(r.contains("c"));
  EXPECT_EQ(r.edges().size(), 3u);  // two tree edges and the :op1 constant

  const AmrGraph say = parse_penman("(s / say-01 :ARG0 (p / person) :ARG1 (g2 / go-02 :ARG0 p))");
  const AmrGraph go = subtree(say, "g2");
  EXPECT_EQ(go.nodes(), (AmrGraph::NodeMap{{"g2", "go-02"}}));
  EXPECT_TRUE(go.edges().empty());
  EXPECT_THROW(subtree(say, "nope"), std::out_of_range);
}

TEST(SubtreeTest, KeepsInternalReentrancies) {
  const AmrGraph g = parse_penman("(s / say-01 :ARG1 (w / want-01 :ARG0 (p / person) :ARG1 (g / go-02 :ARG0 p)))");
  const AmrGraph w = subtree(g, "w");
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.edges().size(), 3u);
}

TEST(IsVerbConceptTest, Examples) {
  EXPECT_TRUE(is_verb_concept("run-01"));
  EXPECT_TRUE(is_verb_concept("look-01"));
  EXPECT_TRUE(is_verb_concept("have-org-role-91"));
  EXPECT_FALSE(is_verb_concept("apple"));
  EXPECT_FALSE(is_verb_concept("run-1"));
  EXPECT_FALSE(is_verb_concept("-01"));
  EXPECT_FALSE(is_verb_concept("run-01x"));
  EXPECT_FALSE(is_verb_concept("run01"));
}

TEST(GraphPropertiesTest, PathsAndSubtreesOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    const AmrGraph g = testing::random_graph(rng);
    for (const auto& [v, label] : g.nodes()) {
      const auto path = path_to_root(g, v);
      EXPECT_EQ(path.front(), v);
      EXPECT_EQ(path.back(), g.root());
      EXPECT_LE(path.size(), g.size());
      EXPECT_EQ(tree_depth(g, v) + 1, path.size());

      const AmrGraph s = subtree(g, v);
      EXPECT_EQ(s.root(), v);
      for (const auto& [sv, sl] : s.nodes()) EXPECT_EQ(g.concept_of(sv), sl);
      std::multiset<Edge> all(g.edges().begin(), g.edges().end());
      for (const Edge& e : s.edges()) EXPECT_TRUE(all.count(e)) << serialize_penman(g);
      for (std::size_t k = 1; k < path.size(); ++k) EXPECT_FALSE(s.contains(path[k]));
    }
    EXPECT_EQ(subtree(g, g.root()), g);
  }
}

TEST(AlignmentTest, ParseAndFormat) {
  const auto a = parse_alignments("0-1|0 2-3|0.1");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].token_start, 0u);
  EXPECT_EQ(a[0].token_end, 1u);
  EXPECT_EQ(a[0].node_path, (std::vector<std::size_t>{0}));
  EXPECT_EQ(a[1].node_path, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(format_alignments(a), "0-1|0 2-3|0.1");
  EXPECT_TRUE(parse_alignments("   ").empty());
}

TEST(AlignmentTest, MultiplePathsAndEdgeSuffix) {
  const auto a = parse_alignments("1-3|0.0+0.1.r");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_FALSE(a[0].edge);
  EXPECT_TRUE(a[1].edge);
  EXPECT_EQ(a[1].token_start, 1u);
  EXPECT_EQ(a[1].token_end, 3u);
  EXPECT_EQ(format_alignments(a), "1-3|0.0 1-3|0.1.r");
}

TEST(AlignmentTest, RejectsMalformedEntries) {
  for (const char* bad : {"0-1", "0|0", "1-1|0", "2-1|0", "a-1|0", "0-1|", "0-1|1", "0-1|0.", "0-1|0..1",
                          "0-1|0.x"}) {
    EXPECT_THROW(parse_alignments(bad), AlignmentFormatError) << bad;
  }
}

TEST(AlignmentTest, ResolvesPathsAndFoldsConstantsAndEdges) {
  const AmrGraph g = parse_penman(kCause);
  auto resolve = [&](const char* text) { return resolve_alignment(g, parse_alignments(text).front()); };
  EXPECT_EQ(resolve("0-1|0"), "c");
  EXPECT_EQ(resolve("0-1|0.0"), "r");
  EXPECT_EQ(resolve("0-1|0.0.0.0"), "n");
  EXPECT_EQ(resolve("0-1|0.0.0.0.0"), "n");  // the "Ann" constant
  EXPECT_EQ(resolve("0-1|0.0.r"), "c");      // the :ARG1 edge
  EXPECT_EQ(resolve("0-1|0.1"), std::nullopt);
  EXPECT_EQ(resolve("0-1|0.0.0.0.0.0"), std::nullopt);
  EXPECT_EQ(resolve("0-1|0.r"), std::nullopt);
}

TEST(AlignmentTest, ReentrantEdgesDoNotCountAsChildren) {
  const AmrGraph g = parse_penman("(w / want-01 :ARG0 (p / person) :ARG1 (l / lead-02 :ARG0 p :ARG1 (t / team)))");
  EXPECT_EQ(resolve_alignment(g, parse_alignments("0-1|0.1.0").front()), "t");
}

TEST(AlignedSentenceTest, Validate) {
  AlignedSentence s;
  s.tokens = split_whitespace("I looked carefully all around me");
  EXPECT_EQ(s.tokens.size(), 6u);
  s.alignments = parse_alignments("0-1|0.0");
  EXPECT_THROW(s.validate(), std::invalid_argument);  // no graph
  s.graph = parse_penman(kLook);
  EXPECT_NO_THROW(s.validate());
  s.alignments = parse_alignments("5-7|0.0");
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.alignments = parse_alignments("0-1|0.7");
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_EQ(s.text(), "I looked carefully all around me");
}

}  // namespace
}  // namespace amrsum
