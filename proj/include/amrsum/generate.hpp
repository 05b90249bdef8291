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

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrsum/amr_graph.hpp"
#include "amrsum/corpus.hpp"
#include "amrsum/extract.hpp"
#include "amrsum/penman.hpp"
#include "amrsum/rouge.hpp"
#include "amrsum/subprocess.hpp"

namespace amrsum {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// alignment: source words aligned to retained nodes. external: a subprocess
// generator. source: the original sentence verbatim (plain Lead-n).
enum class GeneratorKind { kAlignment, kExternal, kSource };

inline const char* generator_kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kAlignment: return "alignment";
    case GeneratorKind::kExternal: return "external";
    case GeneratorKind::kSource: return "source";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view s) {
  if (s == "alignment") return GeneratorKind::kAlignment;
  if (s == "external") return GeneratorKind::kExternal;
  if (s == "source") return GeneratorKind::kSource;
  throw std::invalid_argument("unknown generator '" + std::string(s) + "'");
}

struct GeneratorChoice {
  GeneratorKind kind = GeneratorKind::kAlignment;
  std::string command;  // external only
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

struct GeneratedSummary {
  std::vector<Tokens> sentences;
  GeneratorKind generator = GeneratorKind::kAlignment;
  std::string tool;  // external command, empty otherwise
};

// Source tokens, in ascending position, covered by an alignment whose node
// survives in `extracted`. A token emits once however many alignments cover
// it.
inline Tokens generate_alignment_based(const AlignedSentence& src, const AmrGraph& extracted,
                                       std::vector<std::string>* warnings = nullptr) {
  if (!src.graph) throw GenerationError("alignment generation needs the source graph");
  for (const auto& [var, concept_label] : extracted.nodes()) {
    if (!src.graph->contains(var)) {
      throw GenerationError("extracted node '" + var + "' is not in the source graph");
    }
  }
  if (src.alignments.empty()) {
    if (warnings) warnings->push_back("sentence has no alignments; emitted nothing");
    return {};
  }
  std::vector<bool> covered(src.tokens.size(), false);
  for (const Alignment& a : src.alignments) {
    const std::optional<std::string> node = resolve_alignment(*src.graph, a);
    if (!node) {
      throw GenerationError("alignment " + format_alignments({a}) + " does not resolve in the graph");
    }
    if (a.token_end > src.tokens.size()) {
      throw GenerationError("alignment " + format_alignments({a}) + " exceeds the sentence");
    }
    if (!extracted.contains(*node)) continue;
    for (std::size_t t = a.token_start; t < a.token_end; ++t) covered[t] = true;
  }
  Tokens out;
  for (std::size_t t = 0; t < src.tokens.size(); ++t) {
    if (covered[t]) out.push_back(src.tokens[t]);
  }
  return out;
}

// Sends every graph, one canonical PENMAN line each, to one generator
// process and reads one sentence per line back.
inline std::vector<Tokens> generate_external_batch(const std::vector<AmrGraph>& graphs,
                                                   const GeneratorChoice& tool,
                                                   const std::string& provenance = "") {
  const std::string where = provenance.empty() ? "" : provenance + ": ";
  if (graphs.empty()) return {};
  std::string request;
  for (const AmrGraph& g : graphs) request += serialize_penman(g) + "\n";
  ProcessResult r;
  try {
    r = run_process(tool.command, request, tool.timeout);
  } catch (const std::exception& e) {
    throw GenerationError(where + "cannot run generator: " + e.what());
  }
  if (!r.ok()) throw GenerationError(where + "generator " + internal::DescribeFailure(r));
  const std::vector<std::string> lines = split_lines(r.out);
  if (lines.size() != graphs.size()) {
    throw GenerationError(where + "generator protocol violation: expected " +
                          std::to_string(graphs.size()) + " lines, got " +
                          std::to_string(lines.size()));
  }
  std::vector<Tokens> out;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (internal::Trim(lines[k]).empty()) {
      throw GenerationError(where + "generator returned an empty sentence for graph " +
                            std::to_string(k));
    }
    out.push_back(normalize(lines[k]));
  }
  return out;
}

inline Tokens generate_external(const AmrGraph& extracted, const GeneratorChoice& tool,
                                const std::string& provenance = "") {
  return generate_external_batch({extracted}, tool, provenance).front();
}

// Step 3 over the extraction results of one document.
inline GeneratedSummary generate_summary(const Document& doc,
                                         const std::vector<ExtractionResult>& extractions,
                                         const GeneratorChoice& choice,
                                         std::vector<std::string>* warnings = nullptr) {
  GeneratedSummary out{{}, choice.kind,
                       choice.kind == GeneratorKind::kExternal ? choice.command : ""};
  switch (choice.kind) {
    case GeneratorKind::kAlignment:
      for (const ExtractionResult& r : extractions) {
        std::vector<std::string> local;
        out.sentences.push_back(generate_alignment_based(doc.story.at(r.sentence_index), r.graph,
                                                         warnings ? &local : nullptr));
        for (const std::string& w : local) {
          warnings->push_back(doc.id + ": story sentence " + std::to_string(r.sentence_index) +
                              ": " + w);
        }
      }
      break;
    case GeneratorKind::kExternal: {
      std::vector<AmrGraph> graphs;
      for (const ExtractionResult& r : extractions) graphs.push_back(r.graph);
      out.sentences = generate_external_batch(graphs, choice, doc.id);
      break;
    }
    case GeneratorKind::kSource:
      for (const ExtractionResult& r : extractions) {
        out.sentences.push_back(doc.story.at(r.sentence_index).tokens);
      }
      break;
  }
  return out;
}

// Lead-n-AMR: the leading sentences' full graphs run through the generator,
// with no extraction.
inline GeneratedSummary build_lead_n_amr_baseline(const Document& doc, std::size_t n,
                                                  const GeneratorChoice& choice,
                                                  std::vector<std::string>* warnings = nullptr) {
  if (n == 0) throw std::invalid_argument("Lead-n requires n >= 1");
  std::vector<ExtractionResult> full;
  for (std::size_t k = 0; k < std::min(n, doc.story.size()); ++k) {
    const auto& graph = doc.story[k].graph;
    if (!graph && choice.kind != GeneratorKind::kSource) {
      throw GenerationError(doc.id + ": story sentence " + std::to_string(k) + " has no graph");
    }
    // Source generation needs no graph; a placeholder keeps the shape.
    full.push_back({k, std::nullopt, std::nullopt,
                    graph ? *graph : AmrGraph("x", {{"x", "none"}}, {}), ExtractionFallback::kNone});
  }
  return generate_summary(doc, full, choice, warnings);
}

}  // namespace amrsum
