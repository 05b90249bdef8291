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

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrsum/porter_stemmer.hpp"

namespace amrsum {

using Tokens = std::vector<std::string>;

struct RougeScore {
  double recall = 0;
  double precision = 0;
  double f1 = 0;

  static RougeScore FromRatios(double recall, double precision) {
    RougeScore s{recall, precision, 0};
    if (recall + precision > 0) s.f1 = 2 * recall * precision / (recall + precision);
    return s;
  }

  friend bool operator==(const RougeScore&, const RougeScore&) = default;
};

// Raw overlap counts behind a score; summed across documents for pooled
// (micro) aggregation.
struct RougeCounts {
  std::size_t matches = 0;
  std::size_t target_total = 0;
  std::size_t predicted_total = 0;

  RougeCounts& operator+=(const RougeCounts& o) {
    matches += o.matches;
    target_total += o.target_total;
    predicted_total += o.predicted_total;
    return *this;
  }

  RougeScore score() const {
    const double r = target_total ? static_cast<double>(matches) / target_total : 0.0;
    const double p = predicted_total ? static_cast<double>(matches) / predicted_total : 0.0;
    return RougeScore::FromRatios(r, p);
  }
};

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

inline const char* variant_name(RougeVariant v) {
  switch (v) {
    case RougeVariant::kRouge1: return "R1";
    case RougeVariant::kRouge2: return "R2";
    case RougeVariant::kRougeL: return "RL";
  }
  return "?";
}

inline RougeVariant parse_variant(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "R1" || s == "ROUGE-1" || s == "ROUGE1") return RougeVariant::kRouge1;
  if (s == "R2" || s == "ROUGE-2" || s == "ROUGE2") return RougeVariant::kRouge2;
  if (s == "RL" || s == "ROUGE-L" || s == "ROUGEL") return RougeVariant::kRougeL;
  throw std::invalid_argument("unknown ROUGE variant '" + std::string(name) + "'");
}

// Clipped n-gram overlap: each target n-gram occurrence is matched at most
// once.
inline RougeCounts rouge_n_counts(const Tokens& target, const Tokens& predicted, std::size_t n) {
  if (n == 0) throw std::invalid_argument("ROUGE-N requires n >= 1");
  auto grams = [n](const Tokens& t) {
    std::map<std::vector<std::string_view>, std::size_t> counts;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      ++counts[std::vector<std::string_view>(t.begin() + i, t.begin() + i + n)];
    }
    return counts;
  };
  const auto target_grams = grams(target);
  const auto predicted_grams = grams(predicted);
  RougeCounts c;
  c.target_total = target.size() >= n ? target.size() - n + 1 : 0;
  c.predicted_total = predicted.size() >= n ? predicted.size() - n + 1 : 0;
  for (const auto& [gram, count] : target_grams) {
    auto it = predicted_grams.find(gram);
    if (it != predicted_grams.end()) c.matches += std::min(count, it->second);
  }
  return c;
}

inline RougeScore rouge_n(const Tokens& target, const Tokens& predicted, std::size_t n) {
  return rouge_n_counts(target, predicted, n).score();
}

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline RougeCounts rouge_l_counts(const Tokens& target, const Tokens& predicted) {
  return RougeCounts{lcs_length(target, predicted), target.size(), predicted.size()};
}

// ROUGE-L with beta = 1.
inline RougeScore rouge_l(const Tokens& target, const Tokens& predicted) {
  return rouge_l_counts(target, predicted).score();
}

struct NormalizeOptions {
  bool lowercase = true;
  bool remove_stopwords = false;
  bool stem = false;

  friend bool operator==(const NormalizeOptions&, const NormalizeOptions&) = default;
};

inline const std::set<std::string>& english_stopwords() {
  static const std::set<std::string> kWords = {
      "a",     "about", "above", "after", "again",  "against", "all",   "am",    "an",
      "and",   "any",   "are",   "as",    "at",     "be",      "been",  "before", "being",
      "below", "between", "both", "but",  "by",     "can",     "could", "did",   "do",
      "does",  "doing", "down",  "during", "each",  "few",     "for",   "from",  "further",
      "had",   "has",   "have",  "having", "he",    "her",     "here",  "hers",  "herself",
      "him",   "himself", "his", "how",   "i",      "if",      "in",    "into",  "is",
      "it",    "its",   "itself", "me",   "more",   "most",    "my",    "myself", "no",
      "nor",   "not",   "of",    "off",   "on",     "once",    "only",  "or",    "other",
      "our",   "ours",  "ourselves", "out", "over", "own",     "same",  "she",   "should",
      "so",    "some",  "such",  "than",  "that",   "the",     "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this",  "those", "through", "to",
      "too",   "under", "until", "up",    "very",   "was",     "we",    "were",  "what",
      "when",  "where", "which", "while", "who",    "whom",    "why",   "will",  "with",
      "would", "you",   "your",  "yours", "yourself", "yourselves"};
  return kWords;
}

// Splits on whitespace and at word/punctuation boundaries, dropping
// punctuation-only tokens. Bytes >= 0x80 count as word characters.
inline Tokens normalize(std::string_view text, const NormalizeOptions& opts = {}) {
  auto word_char = [](unsigned char c) { return c >= 0x80 || std::isalnum(c); };
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!word_char(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(static_cast<unsigned char>(text[j]))) ++j;
    std::string tok(text.substr(i, j - i));
    i = j;
    if (opts.lowercase) {
      std::transform(tok.begin(), tok.end(), tok.begin(),
                     [](unsigned char c) { return c < 0x80 ? std::tolower(c) : c; });
    }
    if (opts.remove_stopwords && english_stopwords().count(tok)) continue;
    if (opts.stem) tok = PorterStemmer::Stem(tok);
    out.push_back(std::move(tok));
  }
  return out;
}

inline Tokens normalize_tokens(const Tokens& surface, const NormalizeOptions& opts = {}) {
  std::string joined;
  for (const std::string& t : surface) {
    joined += t;
    joined += ' ';
  }
  return normalize(joined, opts);
}

inline RougeCounts rouge_counts(const Tokens& target, const Tokens& predicted, RougeVariant v) {
  switch (v) {
    case RougeVariant::kRouge1: return rouge_n_counts(target, predicted, 1);
    case RougeVariant::kRouge2: return rouge_n_counts(target, predicted, 2);
    case RougeVariant::kRougeL: return rouge_l_counts(target, predicted);
  }
  throw std::invalid_argument("unknown ROUGE variant");
}

inline Tokens concatenate(const std::vector<Tokens>& sentences) {
  Tokens out;
  for (const Tokens& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

// Whole-summary score: each side's sentences are concatenated first.
inline RougeCounts rouge_summary_counts(const std::vector<Tokens>& target_sentences,
                                        const std::vector<Tokens>& predicted_sentences,
                                        RougeVariant v) {
  return rouge_counts(concatenate(target_sentences), concatenate(predicted_sentences), v);
}

inline RougeScore rouge_summary(const std::vector<Tokens>& target_sentences,
                                const std::vector<Tokens>& predicted_sentences, RougeVariant v) {
  return rouge_summary_counts(target_sentences, predicted_sentences, v).score();
}

}  // namespace amrsum
