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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrsum/amr_graph.hpp"
#include "amrsum/corpus.hpp"
#include "amrsum/penman.hpp"
#include "amrsum/select.hpp"

namespace amrsum {

enum class ExtractionFallback { kNone, kNoEntityInSentence, kNoVerbOnPath };

inline const char* fallback_name(ExtractionFallback f) {
  switch (f) {
    case ExtractionFallback::kNone: return "none";
    case ExtractionFallback::kNoEntityInSentence: return "no_entity_in_sentence";
    case ExtractionFallback::kNoVerbOnPath: return "no_verb_on_path";
  }
  return "?";
}

struct ExtractionResult {
  std::size_t sentence_index = 0;
  std::optional<std::string> anchor_entity;
  std::optional<std::string> anchor_verb;  // variable id
  AmrGraph graph;
  ExtractionFallback fallback = ExtractionFallback::kNone;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

// The shallowest node naming `entity`; ties keep PENMAN order.
inline std::optional<std::string> EntityNode(const AmrGraph& g, const std::string& entity) {
  std::optional<std::string> best;
  std::size_t best_depth = 0;
  for (const EntityMention& m : named_entities(g)) {
    if (m.canonical != entity) continue;
    const std::size_t depth = tree_depth(g, m.variable);
    if (!best || depth < best_depth) {
      best = m.variable;
      best_depth = depth;
    }
  }
  return best;
}

inline ExtractionResult ExtractWithTallies(const Document& doc, std::size_t sentence_index,
                                           const std::vector<EntityTally>& tallies) {
  if (sentence_index >= doc.story.size()) {
    throw ExtractionError(doc.id + ": sentence index " + std::to_string(sentence_index) +
                          " out of range");
  }
  const std::optional<AmrGraph>& graph = doc.story[sentence_index].graph;
  if (!graph) {
    throw ExtractionError(doc.id + ": story sentence " + std::to_string(sentence_index) +
                          " has no graph");
  }
  const AmrGraph& g = *graph;
  for (const EntityTally& t : tallies) {
    const std::optional<std::string> node = EntityNode(g, t.entity);
    if (!node) continue;
    const std::vector<std::string> path = path_to_root(g, *node);
    for (std::size_t k = 1; k < path.size(); ++k) {
      if (is_verb_concept(g.concept_of(path[k]))) {
        return {sentence_index, t.entity, path[k], subtree(g, path[k]), ExtractionFallback::kNone};
      }
    }
    return {sentence_index, t.entity, std::nullopt, g, ExtractionFallback::kNoVerbOnPath};
  }
  return {sentence_index, std::nullopt, std::nullopt, g, ExtractionFallback::kNoEntityInSentence};
}

}  // namespace internal

// Anchors on the story's most mentioned entity present in this sentence,
// walks up the tree to the nearest PropBank-frame ancestor, and keeps the
// subtree hanging from it.
inline ExtractionResult extract_summary_graph(const Document& doc, std::size_t sentence_index) {
  return internal::ExtractWithTallies(doc, sentence_index, entity_tallies(doc));
}

inline std::vector<ExtractionResult> extract_all(const Document& doc, const SelectionResult& sel) {
  const std::vector<EntityTally> tallies = entity_tallies(doc);
  std::vector<ExtractionResult> out;
  out.reserve(sel.indices.size());
  for (std::size_t index : sel.indices) {
    out.push_back(internal::ExtractWithTallies(doc, index, tallies));
  }
  return out;
}

// PENMAN block with provenance headers, as printed by `extract-graph`.
inline std::string format_extraction(const std::string& document_id, const ExtractionResult& r) {
  std::string out;
  out += "# ::src-sentence " + document_id + "." + std::to_string(r.sentence_index) + "\n";
  out += "# ::anchor-entity " + r.anchor_entity.value_or("-") + "\n";
  out += "# ::anchor-verb " + r.anchor_verb.value_or("-") + "\n";
  out += std::string("# ::fallback ") + fallback_name(r.fallback) + "\n";
  out += serialize_penman(r.graph, true) + "\n";
  return out;
}

}  // namespace amrsum
