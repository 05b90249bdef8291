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
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrsum/amr_graph.hpp"
#include "amrsum/corpus.hpp"
#include "amrsum/parallel.hpp"
#include "amrsum/rouge.hpp"

namespace amrsum {

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A node that owns a `:name` structure, with its canonical surface string.
struct EntityMention {
  std::string variable;
  std::string canonical;
};

// Named entities of one graph in PENMAN order. The canonical string joins the
// name node's `:opK` string constants by ascending K, lowercased.
inline std::vector<EntityMention> named_entities(const AmrGraph& g) {
  std::vector<EntityMention> out;
  for (const std::string& var : g.preorder()) {
    for (std::size_t i : g.out_edges(var)) {
      const Edge& e = g.edges()[i];
      const std::string* name_var = e.target_variable();
      if (e.role != ":name" || !name_var || g.concept_of(*name_var) != "name") continue;
      std::vector<std::pair<unsigned long, std::string>> ops;
      for (std::size_t j : g.out_edges(*name_var)) {
        const Edge& op = g.edges()[j];
        const Constant* c = op.target_constant();
        std::string_view role = op.role;
        if (!c || c->kind != Constant::Kind::kString || role.substr(0, 3) != ":op" ||
            !internal::AllDigits(role.substr(3))) {
          continue;
        }
        ops.emplace_back(std::stoul(std::string(role.substr(3))), c->text);
      }
      std::stable_sort(ops.begin(), ops.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::string canonical;
      for (const auto& [k, text] : ops) {
        if (!canonical.empty()) canonical += ' ';
        canonical += text;
      }
      std::transform(canonical.begin(), canonical.end(), canonical.begin(),
                     [](unsigned char c) { return c < 0x80 ? std::tolower(c) : c; });
      if (!canonical.empty()) out.push_back({var, std::move(canonical)});
    }
  }
  return out;
}

struct EntityTally {
  std::string entity;
  std::size_t mentions = 0;  // number of story sentences naming the entity
  std::size_t first_sentence = 0;

  friend bool operator==(const EntityTally&, const EntityTally&) = default;
};

inline void require_story_graphs(const Document& doc) {
  if (doc.story.empty()) throw SelectionError(doc.id + ": empty story");
  for (std::size_t k = 0; k < doc.story.size(); ++k) {
    if (!doc.story[k].graph) {
      throw SelectionError(doc.id + ": story sentence " + std::to_string(k) + " has no graph");
    }
  }
}

// Sorted by mentions desc, first_sentence asc, entity asc.
inline std::vector<EntityTally> entity_tallies(const Document& doc) {
  require_story_graphs(doc);
  std::map<std::string, EntityTally> by_name;
  for (std::size_t k = 0; k < doc.story.size(); ++k) {
    std::set<std::string> here;
    for (EntityMention& m : named_entities(*doc.story[k].graph)) here.insert(std::move(m.canonical));
    for (const std::string& name : here) {
      auto [it, fresh] = by_name.try_emplace(name, EntityTally{name, 0, k});
      ++it->second.mentions;
    }
  }
  std::vector<EntityTally> out;
  for (auto& [name, tally] : by_name) out.push_back(std::move(tally));
  std::sort(out.begin(), out.end(), [](const EntityTally& a, const EntityTally& b) {
    if (a.mentions != b.mentions) return a.mentions > b.mentions;
    if (a.first_sentence != b.first_sentence) return a.first_sentence < b.first_sentence;
    return a.entity < b.entity;
  });
  return out;
}

enum class EntityMatch { kExact, kPartial };

// Exact compares canonical strings. Partial also accepts a mention whose
// name tokens are a subset of the wanted entity's tokens or vice versa.
inline bool entity_matches(std::string_view mention, std::string_view wanted, EntityMatch match) {
  if (mention == wanted) return true;
  if (match == EntityMatch::kExact) return false;
  const auto a = split_whitespace(mention);
  const auto b = split_whitespace(wanted);
  const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return std::includes(sa.begin(), sa.end(), sb.begin(), sb.end()) ||
         std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

inline bool sentence_mentions(const AmrGraph& g, std::string_view entity, EntityMatch match) {
  for (const EntityMention& m : named_entities(g)) {
    if (entity_matches(m.canonical, entity, match)) return true;
  }
  return false;
}

enum class SelectionMethod { kFirstN, kCooccurrencePlusFirst, kOracle };

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kFirstN;
  std::size_t n = 0;  // first-n only
  std::vector<std::size_t> indices;
  bool fallback = false;
};

inline SelectionResult select_first_n(const Document& doc, std::size_t n) {
  if (n == 0) throw std::invalid_argument("first-n requires n >= 1");
  if (doc.story.empty()) throw SelectionError(doc.id + ": empty story");
  SelectionResult r{SelectionMethod::kFirstN, n, {}, false};
  for (std::size_t k = 0; k < std::min(n, doc.story.size()); ++k) r.indices.push_back(k);
  return r;
}

// First sentence plus the earliest sentence naming both of the two most
// mentioned entities. Falls back to [0] when there are fewer than two
// entities or they never co-occur.
inline SelectionResult select_cooccurrence_plus_first(const Document& doc,
                                                      EntityMatch match = EntityMatch::kExact) {
  const std::vector<EntityTally> tallies = entity_tallies(doc);
  SelectionResult r{SelectionMethod::kCooccurrencePlusFirst, 0, {0}, true};
  if (tallies.size() < 2) return r;
  for (std::size_t k = 0; k < doc.story.size(); ++k) {
    const AmrGraph& g = *doc.story[k].graph;
    if (sentence_mentions(g, tallies[0].entity, match) &&
        sentence_mentions(g, tallies[1].entity, match)) {
      r.fallback = false;
      if (k != 0) r.indices.push_back(k);
      return r;
    }
  }
  return r;
}

struct BestMatch {
  std::size_t story_index = 0;
  double score = 0;  // ROUGE-1 recall of the summary sentence
};

// The story sentence covering the most of `summary_sentence`, with the
// summary sentence as target. Ties go to the earliest story sentence.
inline BestMatch best_matching_sentence(const Tokens& summary_sentence,
                                        const std::vector<Tokens>& story) {
  BestMatch best;
  for (std::size_t k = 0; k < story.size(); ++k) {
    const double s = rouge_n(summary_sentence, story[k], 1).recall;
    if (k == 0 || s > best.score) best = {k, s};
  }
  return best;
}

inline std::vector<Tokens> normalized_sentences(const std::vector<AlignedSentence>& part,
                                                const NormalizeOptions& opts) {
  std::vector<Tokens> out;
  out.reserve(part.size());
  for (const AlignedSentence& s : part) out.push_back(normalize_tokens(s.tokens, opts));
  return out;
}

// Upper-bound selection: the best-matching story sentence of every summary
// sentence. Needs the reference summary. Recall ties are broken by precision
// so that a verbatim copy beats an earlier sentence that merely contains it.
inline SelectionResult select_oracle(const Document& doc, const NormalizeOptions& opts = {}) {
  if (doc.story.empty()) throw SelectionError(doc.id + ": empty story");
  const std::vector<Tokens> story = normalized_sentences(doc.story, opts);
  std::set<std::size_t> picked;
  for (const Tokens& target : normalized_sentences(doc.summary, opts)) {
    if (target.empty()) continue;
    std::size_t best = 0;
    RougeScore best_score;
    for (std::size_t k = 0; k < story.size(); ++k) {
      const RougeScore sc = rouge_n(target, story[k], 1);
      if (k == 0 || sc.recall > best_score.recall ||
          (sc.recall == best_score.recall && sc.precision > best_score.precision)) {
        best = k;
        best_score = sc;
      }
    }
    picked.insert(best);
  }
  SelectionResult r{SelectionMethod::kOracle, 0, {picked.begin(), picked.end()}, false};
  if (r.indices.empty()) {
    r.indices = {0};
    r.fallback = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Extractiveness analysis.

struct BestMatchRecord {
  std::string document_id;
  std::size_t summary_index = 0;
  std::size_t story_index = 0;
  double score = 0;
};

struct DistributionReport {
  static constexpr std::size_t kBins = 20;  // width 0.05

  std::vector<BestMatchRecord> records;
  double mean = 0;
  double fraction_at_least_half = 0;
  // cumulative_percent[k]: share of records (in %) with score >= k / 20.
  std::vector<double> cumulative_percent;
  // histogram[k]: records with k/20 <= score < (k+1)/20; the last bin
  // includes 1.0.
  std::vector<std::size_t> histogram;
  std::vector<std::string> warnings;
};

inline double bin_threshold(std::size_t k) { return static_cast<double>(k) / DistributionReport::kBins; }

inline void summarize_distribution(DistributionReport& r) {
  const std::size_t n = r.records.size();
  r.cumulative_percent.assign(DistributionReport::kBins + 1, 0.0);
  r.histogram.assign(DistributionReport::kBins, 0);
  double sum = 0;
  std::size_t half = 0;
  for (const BestMatchRecord& rec : r.records) {
    sum += rec.score;
    if (rec.score >= 0.5) ++half;
    for (std::size_t k = 0; k <= DistributionReport::kBins; ++k) {
      if (rec.score >= bin_threshold(k)) r.cumulative_percent[k] += 1;
    }
    std::size_t bin = DistributionReport::kBins - 1;
    while (bin > 0 && rec.score < bin_threshold(bin)) --bin;
    ++r.histogram[bin];
  }
  r.mean = n ? sum / n : 0.0;
  r.fraction_at_least_half = n ? static_cast<double>(half) / n : 0.0;
  for (double& c : r.cumulative_percent) c = n ? 100.0 * c / n : 0.0;
}

// For every summary sentence, the best ROUGE-1 recall over story sentences.
// Summary sentences that normalize to nothing are skipped with a warning.
inline DistributionReport best_match_analysis(const Corpus& corpus,
                                              const NormalizeOptions& opts = {},
                                              std::size_t jobs = 1) {
  std::vector<std::vector<BestMatchRecord>> per_doc(corpus.documents.size());
  std::vector<std::vector<std::string>> warnings(corpus.documents.size());
  parallel_for(corpus.documents.size(), jobs, [&](std::size_t di) {
    const Document& d = corpus.documents[di];
    const std::vector<Tokens> story = normalized_sentences(d.story, opts);
    const std::vector<Tokens> summary = normalized_sentences(d.summary, opts);
    if (summary.empty()) warnings[di].push_back(d.id + ": no summary sentences, skipped");
    for (std::size_t k = 0; k < summary.size(); ++k) {
      if (summary[k].empty()) {
        warnings[di].push_back(d.id + ": summary sentence " + std::to_string(k) +
                               " is empty after normalization, skipped");
        continue;
      }
      if (story.empty()) continue;
      const BestMatch m = best_matching_sentence(summary[k], story);
      per_doc[di].push_back({d.id, k, m.story_index, m.score});
    }
  });
  DistributionReport r;
  for (std::size_t di = 0; di < per_doc.size(); ++di) {
    r.records.insert(r.records.end(), per_doc[di].begin(), per_doc[di].end());
    r.warnings.insert(r.warnings.end(), warnings[di].begin(), warnings[di].end());
  }
  summarize_distribution(r);
  return r;
}

}  // namespace amrsum
