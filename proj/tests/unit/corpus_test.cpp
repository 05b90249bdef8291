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

#include <chrono>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "amrsum/corpus.hpp"
#include "amrsum/penman.hpp"
#include "test_support.hpp"

namespace amrsum {
namespace {

using testing::data_path;
using testing::TempDir;

const char* kMinimal = R"(# ::id doc1.1
# ::snt Ann ran
(r / run-02 :ARG0 (p / person :name (n / name :op1 "Ann")))

# ::id doc1.2
# ::snt She stopped
(s / stop-01 :ARG0 (p / she))

# ::id doc1.s1
# ::snt Ann ran
(r / run-02 :ARG0 (p / person))
)";

std::vector<std::string> ProblemsOf(const std::string& text, const AmrBankOptions& opts = {}) {
  try {
    parse_amr_bank(text, opts);
  } catch (const CorpusError& e) {
    return e.problems();
  }
  return {};
}

TEST(AmrBankTest, MinimalFixture) {
  const Corpus c = parse_amr_bank(kMinimal);
  ASSERT_EQ(c.documents.size(), 1u);
  const Document& d = c.documents[0];
  EXPECT_EQ(d.id, "doc1");
  EXPECT_EQ(d.story.size(), 2u);
  EXPECT_EQ(d.summary.size(), 1u);
  EXPECT_FALSE(d.unparsed);
  EXPECT_EQ(d.story[1].text(), "She stopped");
  EXPECT_EQ(c.source_kind, CorpusKind::kAmrBank);
}

TEST(AmrBankTest, EmptyInputIsEmptyCorpus) {
  EXPECT_TRUE(parse_amr_bank("").documents.empty());
  EXPECT_TRUE(parse_amr_bank("\n\n# just a header comment\n\n").documents.empty());
}

TEST(AmrBankTest, BundledFixture) {
  const Corpus c = load_amr_bank(data_path("data/gold_fixture.amr"));
  ASSERT_EQ(c.documents.size(), 3u);
  EXPECT_EQ(c.documents[0].id, "look");
  const AlignedSentence& look = c.documents[0].story[0];
  EXPECT_EQ(look.tokens.size(), 6u);
  EXPECT_EQ(*look.graph, parse_penman("(l / look-01 :ARG0 (i / i) :manner (c / careful) :direction (a / around :op1 i))"));
  EXPECT_EQ(look.alignments.size(), 5u);
  EXPECT_EQ(c.documents[1].story.size(), 3u);
  EXPECT_EQ(c.documents[2].summary.size(), 1u);
}

TEST(AmrBankTest, SentencesOrderedByIndexNotFilePosition) {
  const char* text = R"(# ::id d.10
# ::snt ten
(t / ten)

# ::id d.2
# ::snt two
(t / two)

# ::id d.s1
# ::snt sum
(s / sum)
)";
  const Corpus c = parse_amr_bank(text);
  EXPECT_EQ(c.documents[0].story[0].text(), "two");
  EXPECT_EQ(c.documents[0].story[1].text(), "ten");
}

TEST(AmrBankTest, TokPreferredOverSnt) {
  const char* text = R"(# ::id d.1
# ::snt Ann's dog
# ::tok Ann 's dog
(d / dog)

# ::id d.s1
# ::snt dog
(d / dog)
)";
  EXPECT_EQ(parse_amr_bank(text).documents[0].story[0].tokens.size(), 3u);
}

TEST(AmrBankTest, CollectsAllProblems) {
  const std::string text = std::string(kMinimal) + R"(
# ::snt no id here
(a / b)

# ::id doc1.1
# ::snt duplicate id
(a / b)

# ::id doc2.1
(a / b)

# ::id doc3.1
# ::snt graph missing

# ::id doc4.1
# ::snt bad graph
(a / b :ARG0 zz)

# ::id doc5.1
# ::snt bad alignment
# ::alignments 0-9|0
(a / b)

# ::id doc6.1
# ::snt story only
(a / b)

# ::id doc7.x1
# ::snt odd id
(a / b)
)";
  const auto problems = ProblemsOf(text);
  auto mentions = [&](const std::string& needle) {
    for (const auto& p : problems) {
      if (p.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  EXPECT_TRUE(mentions("missing ::id"));
  EXPECT_TRUE(mentions("doc1.1: duplicate sentence id"));
  EXPECT_TRUE(mentions("doc2.1: missing ::snt"));
  EXPECT_TRUE(mentions("doc3.1: missing graph"));
  EXPECT_TRUE(mentions("doc4.1"));
  EXPECT_TRUE(mentions("doc5.1"));
  EXPECT_TRUE(mentions("doc6: document has no summary"));
  EXPECT_TRUE(mentions("doc7.x1"));
}

TEST(AmrBankTest, DuplicateIndexAcrossSpellings) {
  const char* text = R"(# ::id d.1
# ::snt a
(a / a)

# ::id d.01
# ::snt b
(b / b)

# ::id d.s1
# ::snt s
(s / s)
)";
  const auto problems = ProblemsOf(text);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("duplicate sentence index 1"), std::string::npos);
}

TEST(AmrBankTest, SummaryMarkerRemap) {
  std::string text = kMinimal;
  text.replace(text.find("doc1.s1"), 7, "doc1.sum1");
  EXPECT_FALSE(ProblemsOf(text).empty());
  const Corpus c = parse_amr_bank(text, AmrBankOptions{"sum"});
  EXPECT_EQ(c.documents[0].summary.size(), 1u);
}

TEST(AmrBankTest, WriterRoundTrip) {
  const Corpus c = load_amr_bank(data_path("data/gold_fixture.amr"));
  const Corpus again = parse_amr_bank(write_amr_bank(c));
  ASSERT_EQ(again.documents.size(), c.documents.size());
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const Document& a = c.documents[i];
    const Document& b = again.documents[i];
    EXPECT_EQ(a.id, b.id);
    ASSERT_EQ(a.story.size(), b.story.size());
    ASSERT_EQ(a.summary.size(), b.summary.size());
    for (std::size_t k = 0; k < a.story.size(); ++k) {
      EXPECT_EQ(*a.story[k].graph, *b.story[k].graph);
      EXPECT_EQ(a.story[k].tokens, b.story[k].tokens);
      EXPECT_EQ(a.story[k].alignments, b.story[k].alignments);
    }
  }
}

TEST(SplitSentencesTest, Rule) {
  EXPECT_EQ(split_sentences("A. B."), (std::vector<std::string>{"A.", "B."}));
  EXPECT_EQ(split_sentences("Dr. Smith came. He left! Did he? yes."),
            (std::vector<std::string>{"Dr.", "Smith came.", "He left!", "Did he? yes."}));
  EXPECT_EQ(split_sentences("Pi is 3.14 exactly. Then"), (std::vector<std::string>{"Pi is 3.14 exactly.", "Then"}));
  EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(CnnDmTest, MinimalStory) {
  const Document d = parse_cnn_dm_story("A. B.\n\n@highlight\n\nC\n", "x");
  EXPECT_EQ(d.id, "x");
  EXPECT_EQ(d.story.size(), 2u);
  ASSERT_EQ(d.summary.size(), 1u);
  EXPECT_EQ(d.summary[0].text(), "C");
  EXPECT_TRUE(d.unparsed);
}

TEST(CnnDmTest, HighlightCountAndErrors) {
  const Document d = parse_cnn_dm_story("Text here.\n@highlight\nOne\n@highlight\nTwo\n\n@highlight\n\nThree\n", "y");
  EXPECT_EQ(d.summary.size(), 3u);
  EXPECT_THROW(parse_cnn_dm_story("No highlights at all.", "z"), std::runtime_error);
  EXPECT_THROW(parse_cnn_dm_story("@highlight\nOnly a summary\n", "z"), std::runtime_error);
  EXPECT_THROW(parse_cnn_dm_story("Text.\n@highlight\n\n", "z"), std::runtime_error);
}

TEST(CnnDmTest, DirectoryLoad) {
  const Corpus c = load_cnn_dm(data_path("tests/data/cnn"));
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].id, "alpha");
  EXPECT_EQ(c.documents[0].story.size(), 4u);  // paragraph end closes the third
  EXPECT_EQ(c.documents[0].summary.size(), 2u);
  EXPECT_EQ(c.documents[1].id, "beta");
  EXPECT_EQ(c.source_kind, CorpusKind::kCnnDm);
  EXPECT_THROW(load_cnn_dm(data_path("tests/data/cnn_bad")), CorpusError);
}

TEST(SplitFileTest, RestrictsAndRejectsUnknownIds) {
  const Corpus c = load_amr_bank(data_path("data/gold_fixture.amr"));
  const Corpus kept = restrict_to_ids(c, load_id_list(data_path("tests/data/split_ids.txt")));
  ASSERT_EQ(kept.documents.size(), 2u);
  EXPECT_EQ(kept.documents[0].id, "storm");  // corpus order, not list order
  EXPECT_EQ(kept.documents[1].id, "hire");
  EXPECT_THROW(restrict_to_ids(c, {"missing"}), CorpusError);
}

class ExternalParserTest : public ::testing::Test {
 protected:
  ExternalTool Tool(const std::string& script) {
    return {dir_.write("parser.sh", "#!/bin/sh\n" + script, true), std::chrono::seconds(10), 2};
  }
  TempDir dir_;
};

TEST_F(ExternalParserTest, FullyAnnotatedCorpusIsUnchanged) {
  const Corpus c = load_amr_bank(data_path("data/gold_fixture.amr"));
  const ParseOutcome out = parse_with_external(c, Tool("echo should-not-run; exit 3\n"));
  EXPECT_TRUE(out.errors.empty());
  ASSERT_EQ(out.corpus.documents.size(), c.documents.size());
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    for (std::size_t k = 0; k < c.documents[i].story.size(); ++k) {
      EXPECT_EQ(*out.corpus.documents[i].story[k].graph, *c.documents[i].story[k].graph);
    }
  }
}

TEST_F(ExternalParserTest, StubGivesEverySentenceAGraph) {
  const Corpus c = load_cnn_dm(data_path("tests/data/cnn"));
  const ParseOutcome out = parse_with_external(c, Tool("while read -r line; do echo '(a / amr-empty)'; done\n"));
  EXPECT_TRUE(out.errors.empty());
  for (const Document& d : out.corpus.documents) {
    EXPECT_FALSE(d.unparsed);
    for (const AlignedSentence& s : d.story) EXPECT_EQ(*s.graph, parse_penman("(a / amr-empty)"));
    for (const AlignedSentence& s : d.summary) EXPECT_FALSE(s.graph.has_value());
  }
  // Idempotent on the now fully annotated corpus.
  const ParseOutcome again = parse_with_external(out.corpus, Tool("exit 1\n"));
  EXPECT_TRUE(again.errors.empty());
}

TEST_F(ExternalParserTest, AlignmentPrefixIsRead) {
  Corpus c;
  c.documents.push_back(parse_cnn_dm_story("Ann ran.\n@highlight\nAnn\n", "d"));
  const ParseOutcome out =
      parse_with_external(c, Tool("read -r line; printf '::alignments 0-1|0.0 1-2|0\\t(r / run-02 :ARG0 (p / person))\\n'\n"));
  ASSERT_TRUE(out.errors.empty());
  EXPECT_EQ(out.corpus.documents[0].story[0].alignments.size(), 2u);
}

TEST_F(ExternalParserTest, MalformedLineNamesTheSentence) {
  Corpus c;
  c.documents.push_back(parse_cnn_dm_story("One. Two. Three. Four. Five.\n@highlight\nSum\n", "doc"));
  const ParseOutcome out =
      parse_with_external(c, Tool("awk 'NR==4 {print \"(a / broken\"; next} {print \"(a / fine)\"}'\n"));
  ASSERT_EQ(out.errors.size(), 1u);
  EXPECT_EQ(out.errors[0].sentence_index, std::optional<std::size_t>(3));
  EXPECT_NE(out.errors[0].describe().find("doc: story sentence 3"), std::string::npos);
  const Document& d = out.corpus.documents[0];
  EXPECT_TRUE(d.unparsed);
  for (std::size_t k = 0; k < d.story.size(); ++k) EXPECT_EQ(d.story[k].graph.has_value(), k != 3);
}

TEST_F(ExternalParserTest, BatchFailuresAndProtocolViolations) {
  Corpus c;
  c.documents.push_back(parse_cnn_dm_story("One. Two.\n@highlight\nSum\n", "doc"));
  ParseOutcome out = parse_with_external(c, Tool("echo boom >&2; exit 4\n"));
  ASSERT_EQ(out.errors.size(), 2u);
  EXPECT_NE(out.errors[0].message.find("exited with code 4: boom"), std::string::npos);
  out = parse_with_external(c, Tool("echo '(a / one)'\n"));
  ASSERT_EQ(out.errors.size(), 2u);
  EXPECT_NE(out.errors[0].message.find("protocol violation"), std::string::npos);
}

TEST_F(ExternalParserTest, TimeoutIsReported) {
  Corpus c;
  c.documents.push_back(parse_cnn_dm_story("One.\n@highlight\nSum\n", "doc"));
  ExternalTool tool = Tool("sleep 10\n");
  tool.timeout = std::chrono::milliseconds(200);
  const auto start = std::chrono::steady_clock::now();
  const ParseOutcome out = parse_with_external(c, tool);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
  ASSERT_EQ(out.errors.size(), 1u);
  EXPECT_NE(out.errors[0].message.find("timed out"), std::string::npos);
}

TEST_F(ExternalParserTest, SummariesOnRequest) {
  Corpus c;
  c.documents.push_back(parse_cnn_dm_story("One.\n@highlight\nSum\n", "doc"));
  const ParseOutcome out = parse_with_external(c, Tool("while read -r l; do echo '(a / x)'; done\n"), true);
  EXPECT_TRUE(out.corpus.documents[0].summary[0].graph.has_value());
}

}  // namespace
}  // namespace amrsum
