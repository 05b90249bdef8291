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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "amrsum/porter_stemmer.hpp"
#include "amrsum/rouge.hpp"
#include "test_support.hpp"

namespace amrsum {
namespace {

Tokens T(const char* text) { return split_whitespace(text); }

void ExpectScore(const RougeScore& s, double r, double p, double f) {
  EXPECT_NEAR(s.recall, r, 1e-12);
  EXPECT_NEAR(s.precision, p, 1e-12);
  EXPECT_NEAR(s.f1, f, 1e-12);
}

TEST(RougeNTest, WorkedExamples) {
  ExpectScore(rouge_n(T("the cat sat"), T("the cat sat"), 1), 1, 1, 1);
  ExpectScore(rouge_n(T("a b c d"), T("a b x"), 1), 0.5, 2.0 / 3, 4.0 / 7);
  ExpectScore(rouge_n(T("a b c d"), T("a b c"), 2), 2.0 / 3, 1, 0.8);
}

TEST(RougeNTest, ClipsRepeatedTokens) {
  ExpectScore(rouge_n(T("a a b"), T("a a a a"), 1), 2.0 / 3, 0.5, 4.0 / 7);
  ExpectScore(rouge_n(T("a"), T("a a a"), 1), 1, 1.0 / 3, 0.5);
}

TEST(RougeNTest, EmptySidesGiveZero) {
  ExpectScore(rouge_n({}, T("a"), 1), 0, 0, 0);
  ExpectScore(rouge_n(T("a"), {}, 1), 0, 0, 0);
  ExpectScore(rouge_n(T("a"), T("a"), 2), 0, 0, 0);  // no bigrams at all
  ExpectScore(rouge_n({}, {}, 1), 0, 0, 0);
}

TEST(RougeNTest, RejectsZeroOrder) { EXPECT_THROW(rouge_n(T("a"), T("a"), 0), std::invalid_argument); }

TEST(RougeLTest, WorkedExamples) {
  ExpectScore(rouge_l(T("a b c"), T("a b c")), 1, 1, 1);
  ExpectScore(rouge_l(T("a b c d"), T("a c b d")), 0.75, 0.75, 0.75);
  ExpectScore(rouge_l(T("a b"), T("c d")), 0, 0, 0);
  ExpectScore(rouge_l({}, T("c d")), 0, 0, 0);
}

TEST(RougeSummaryTest, ConcatenatesSentences) {
  const std::vector<Tokens> one{T("a b c d")}, two{T("a b x")};
  EXPECT_EQ(rouge_summary(one, two, RougeVariant::kRouge1), rouge_n(T("a b c d"), T("a b x"), 1));
  const RougeScore s = rouge_summary({T("a b"), T("c")}, {T("a"), T("b c")}, RougeVariant::kRouge1);
  ExpectScore(s, 1, 1, 1);
  ExpectScore(rouge_summary({T("a b")}, {}, RougeVariant::kRouge1), 0, 0, 0);
  ExpectScore(rouge_summary({T("a b")}, {}, RougeVariant::kRougeL), 0, 0, 0);
}

TEST(RougeVariantTest, NamesRoundTrip) {
  for (RougeVariant v : {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
  EXPECT_EQ(parse_variant("rouge-l"), RougeVariant::kRougeL);
  EXPECT_THROW(parse_variant("R3"), std::invalid_argument);
}

TEST(RougeOracleTest, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 10000; ++iter) {
    const Tokens t = testing::random_tokens(rng), p = testing::random_tokens(rng);
    for (std::size_t n : {1u, 2u}) {
      const RougeCounts c = rouge_n_counts(t, p, n);
      ASSERT_EQ(c.matches, testing::bipartite_ngram_matches(t, p, n));
    }
    ASSERT_EQ(lcs_length(t, p), testing::brute_force_lcs(t, p));
  }
}

TEST(RougePropertyTest, DualityMonotonicityAndBounds) {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 3000; ++iter) {
    const Tokens t = testing::random_tokens(rng), p = testing::random_tokens(rng);
    for (std::size_t n : {1u, 2u, 3u}) {
      EXPECT_EQ(rouge_n(t, p, n).recall, rouge_n(p, t, n).precision);
      Tokens longer = p;
      longer.push_back(std::string(1, static_cast<char>('a' + iter % 4)));
      EXPECT_GE(rouge_n(t, longer, n).recall, rouge_n(t, p, n).recall);
    }
    const std::size_t l = lcs_length(t, p);
    EXPECT_LE(l, std::min(t.size(), p.size()));
    if (t.size() <= 1 || p.size() <= 1) { EXPECT_EQ(rouge_l(t, p), rouge_n(t, p, 1)); }
    for (const RougeScore& s : {rouge_n(t, p, 1), rouge_n(t, p, 2), rouge_l(t, p)}) {
      for (double v : {s.recall, s.precision, s.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      const double expected_f1 =
          s.recall + s.precision > 0 ? 2 * s.recall * s.precision / (s.recall + s.precision) : 0.0;
      EXPECT_DOUBLE_EQ(s.f1, expected_f1);
    }
  }
}

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(normalize("The cat, sat."), T("the cat sat"));
  EXPECT_TRUE(normalize("").empty());
  EXPECT_EQ(normalize("Apples are liked by him"), T("apples are liked by him"));
  EXPECT_EQ(normalize("-- ... !!"), Tokens{});
  EXPECT_EQ(normalize("U.S.-based co-op's"), T("u s based co op s"));
  EXPECT_EQ(normalize("caf\xC3\xA9 Z\xC3\xBCrich"), (Tokens{"caf\xC3\xA9", "z\xC3\xBCrich"}));
}

TEST(NormalizeTest, OptionalRegimes) {
  NormalizeOptions keep_case;
  keep_case.lowercase = false;
  EXPECT_EQ(normalize("The Cat", keep_case), T("The Cat"));
  NormalizeOptions no_stop;
  no_stop.remove_stopwords = true;
  EXPECT_EQ(normalize("The cat sat on the mat", no_stop), T("cat sat mat"));
  NormalizeOptions stem;
  stem.stem = true;
  EXPECT_EQ(normalize("Ponies were running", stem), T("poni were run"));
  EXPECT_EQ(normalize_tokens(T("The cat,"), {}), T("the cat"));
}

TEST(PorterStemmerTest, KnownPairs) {
  const std::vector<std::pair<const char*, const char*>> pairs = {
      {"caresses", "caress"},   {"ponies", "poni"},       {"ties", "ti"},
      {"caress", "caress"},     {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},       {"plastered", "plaster"}, {"motoring", "motor"},
      {"sing", "sing"},         {"conflated", "conflat"}, {"troubled", "troubl"},
      {"sized", "size"},        {"hopping", "hop"},       {"falling", "fall"},
      {"filing", "file"},       {"happy", "happi"},       {"sky", "sky"},
      {"relational", "relat"},  {"conditional", "condit"}, {"rational", "ration"},
      {"valenci", "valenc"},    {"digitizer", "digit"},   {"operator", "oper"},
      {"generalization", "gener"}, {"triplicate", "triplic"}, {"hopeful", "hope"},
      {"goodness", "good"},     {"revival", "reviv"},     {"allowance", "allow"},
      {"adjustment", "adjust"}, {"probate", "probat"},    {"rate", "rate"},
      {"controll", "control"},  {"roll", "roll"},         {"is", "is"}};
  for (const auto& [word, stem] : pairs) EXPECT_EQ(PorterStemmer::Stem(word), stem) << word;
}

}  // namespace
}  // namespace amrsum
