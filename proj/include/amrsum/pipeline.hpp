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
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "amrsum/config.hpp"
#include "amrsum/corpus.hpp"
#include "amrsum/extract.hpp"
#include "amrsum/generate.hpp"
#include "amrsum/parallel.hpp"
#include "amrsum/rouge.hpp"
#include "amrsum/select.hpp"

namespace amrsum {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Steps 1-3

inline Corpus load_corpus(const RunConfig& cfg) {
  Corpus corpus = cfg.corpus_kind == CorpusKind::kAmrBank
                      ? load_amr_bank(cfg.corpus_path, AmrBankOptions{cfg.summary_marker})
                      : load_cnn_dm(cfg.corpus_path);
  if (!cfg.split_file.empty()) corpus = restrict_to_ids(corpus, load_id_list(cfg.split_file));
  return corpus;
}

// Step 1. Gold graphs are kept; the external parser only fills gaps.
inline Corpus ensure_graphs(const RunConfig& cfg, const Corpus& corpus,
                            std::vector<ToolError>& errors) {
  if (cfg.parser == ParserKind::kGold) return corpus;
  ParseOutcome parsed = parse_with_external(corpus, cfg.parser_tool());
  errors.insert(errors.end(), parsed.errors.begin(), parsed.errors.end());
  return std::move(parsed.corpus);
}

inline SelectionResult select_sentences(const Document& doc, const RunConfig& cfg) {
  switch (cfg.method) {
    case SelectionMethod::kFirstN: return select_first_n(doc, cfg.n);
    case SelectionMethod::kCooccurrencePlusFirst:
      return select_cooccurrence_plus_first(doc, cfg.entity_match);
    case SelectionMethod::kOracle: return select_oracle(doc, cfg.normalize);
  }
  throw ConfigError("unknown selection method");
}

// Selected sentences with their full graphs, bypassing extraction.
inline std::vector<ExtractionResult> whole_sentences(const Document& doc,
                                                     const std::vector<std::size_t>& indices,
                                                     bool need_graphs) {
  std::vector<ExtractionResult> out;
  for (std::size_t k : indices) {
    const auto& graph = doc.story.at(k).graph;
    if (!graph && need_graphs) {
      throw GenerationError(doc.id + ": story sentence " + std::to_string(k) + " has no graph");
    }
    out.push_back({k, std::nullopt, std::nullopt,
                   graph ? *graph : AmrGraph("x", {{"x", "none"}}, {}), ExtractionFallback::kNone});
  }
  return out;
}

struct DocumentRun {
  std::string id;
  std::optional<SelectionResult> selection;
  std::vector<ExtractionResult> extractions;
  std::optional<GeneratedSummary> summary;
  std::string error;  // empty on success
};

struct SummarizeOutcome {
  RunConfig config;
  std::vector<DocumentRun> documents;
  std::vector<ToolError> parse_errors;
  std::vector<std::string> warnings;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(
        documents.begin(), documents.end(), [](const DocumentRun& d) { return !d.error.empty(); }));
  }
};

inline std::string first_parse_error(const std::vector<ToolError>& errors, const std::string& id) {
  for (const ToolError& e : errors) {
    if (e.document_id == id) return e.describe();
  }
  return id + ": story sentences lack graphs";
}

inline SummarizeOutcome run_summarize(const RunConfig& cfg, const Corpus& input) {
  SummarizeOutcome out;
  out.config = cfg;
  const Corpus corpus = ensure_graphs(cfg, input, out.parse_errors);
  const GeneratorChoice generator = cfg.generator_choice();
  const bool need_graphs = cfg.extract || cfg.generator != GeneratorKind::kSource;
  out.documents.resize(corpus.documents.size());
  std::vector<std::vector<std::string>> warnings(corpus.documents.size());
  parallel_for(corpus.documents.size(), cfg.jobs, [&](std::size_t di) {
    const Document& doc = corpus.documents[di];
    DocumentRun& run = out.documents[di];
    run.id = doc.id;
    try {
      if (doc.unparsed && need_graphs) {
        throw SelectionError("parse failed: " + first_parse_error(out.parse_errors, doc.id));
      }
      run.selection = select_sentences(doc, cfg);
      run.extractions = cfg.extract ? extract_all(doc, *run.selection)
                                    : whole_sentences(doc, run.selection->indices, need_graphs);
      run.summary = generate_summary(doc, run.extractions, generator, &warnings[di]);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  });
  for (auto& w : warnings) out.warnings.insert(out.warnings.end(), w.begin(), w.end());
  return out;
}

inline SummarizeOutcome run_summarize(const RunConfig& cfg) {
  return run_summarize(cfg, load_corpus(cfg));
}

// ---------------------------------------------------------------------------
// Evaluation

struct ScoredDocument {
  std::string id;
  std::vector<Tokens> predicted;  // normalized
  std::vector<Tokens> reference;  // normalized
  std::map<RougeVariant, RougeScore> scores;  // percentages
  std::map<RougeVariant, RougeCounts> counts;
};

struct MethodEvaluation {
  std::string name;
  std::vector<ScoredDocument> documents;      // sorted by id
  std::map<RougeVariant, RougeScore> aggregate;  // percentages
};

struct EvaluationReport {
  RunConfig config;
  std::string command;
  std::vector<MethodEvaluation> methods;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;  // documents that could not be scored
};

inline RougeScore as_percent(const RougeScore& s) {
  return {100 * s.recall, 100 * s.precision, 100 * s.f1};
}

// Fills `aggregate`: macro averages per-document percentages, micro pools
// the raw overlap counts.
inline void aggregate_scores(MethodEvaluation& m, const RunConfig& cfg) {
  m.aggregate.clear();
  for (RougeVariant v : cfg.rouge_variants) {
    if (m.documents.empty()) {
      m.aggregate[v] = {};
      continue;
    }
    if (cfg.aggregation == Aggregation::kMicro) {
      RougeCounts pooled;
      for (const ScoredDocument& d : m.documents) pooled += d.counts.at(v);
      m.aggregate[v] = as_percent(pooled.score());
      continue;
    }
    RougeScore sum;
    for (const ScoredDocument& d : m.documents) {
      const RougeScore& s = d.scores.at(v);
      sum.recall += s.recall;
      sum.precision += s.precision;
      sum.f1 += s.f1;
    }
    const double n = static_cast<double>(m.documents.size());
    m.aggregate[v] = {sum.recall / n, sum.precision / n, sum.f1 / n};
  }
}

using Predictions = std::vector<std::pair<std::string, std::vector<Tokens>>>;

// Scores surface-token predictions against the corpus references. Documents
// without a reference are skipped with a warning.
inline MethodEvaluation score_predictions(const std::string& name, const Predictions& predictions,
                                          const Corpus& corpus, const RunConfig& cfg,
                                          std::vector<std::string>& warnings) {
  MethodEvaluation m;
  m.name = name;
  for (const auto& [id, sentences] : predictions) {
    const Document* doc = corpus.find(id);
    if (!doc || doc->summary.empty()) {
      warnings.push_back(id + ": no reference summary, skipped");
      continue;
    }
    ScoredDocument s;
    s.id = id;
    for (const Tokens& t : sentences) s.predicted.push_back(normalize_tokens(t, cfg.normalize));
    s.reference = normalized_sentences(doc->summary, cfg.normalize);
    for (RougeVariant v : cfg.rouge_variants) {
      s.counts[v] = rouge_summary_counts(s.reference, s.predicted, v);
      s.scores[v] = as_percent(s.counts[v].score());
    }
    m.documents.push_back(std::move(s));
  }
  std::sort(m.documents.begin(), m.documents.end(),
            [](const ScoredDocument& a, const ScoredDocument& b) { return a.id < b.id; });
  aggregate_scores(m, cfg);
  return m;
}

inline Predictions predictions_of(const SummarizeOutcome& outcome,
                                  std::vector<std::string>& failures) {
  Predictions p;
  for (const DocumentRun& d : outcome.documents) {
    if (!d.error.empty() || !d.summary) {
      failures.push_back(d.id + ": " + d.error);
      continue;
    }
    p.emplace_back(d.id, d.summary->sentences);
  }
  return p;
}

inline Predictions load_predictions(const std::string& path);

// Scores stored predictions when `predictions_path` is set, otherwise runs
// the pipeline first.
inline EvaluationReport run_evaluate(const RunConfig& cfg, const Corpus& corpus) {
  EvaluationReport report;
  report.config = cfg;
  report.command = "evaluate";
  Predictions predictions;
  if (!cfg.predictions_path.empty()) {
    predictions = load_predictions(cfg.predictions_path);
  } else {
    SummarizeOutcome outcome = run_summarize(cfg, corpus);
    predictions = predictions_of(outcome, report.failures);
    report.warnings = outcome.warnings;
  }
  report.methods.push_back(
      score_predictions(method_label(cfg), predictions, corpus, cfg, report.warnings));
  return report;
}

inline EvaluationReport run_evaluate(const RunConfig& cfg) {
  return run_evaluate(cfg, load_corpus(cfg));
}

// Lead-n-AMR (leading graphs through the configured generator) next to plain
// Lead-n (leading sentences verbatim).
inline EvaluationReport run_baseline(const RunConfig& cfg, const Corpus& input, std::size_t n) {
  if (n == 0) throw ConfigError("baseline requires n >= 1");
  EvaluationReport report;
  report.config = cfg;
  report.command = "baseline";
  std::vector<ToolError> parse_errors;
  const Corpus corpus = ensure_graphs(cfg, input, parse_errors);
  const std::size_t count = corpus.documents.size();
  std::vector<std::optional<GeneratedSummary>> amr(count), lead(count);
  std::vector<std::string> errors(count);
  std::vector<std::vector<std::string>> warnings(count);
  const GeneratorChoice generator = cfg.generator_choice();
  parallel_for(count, cfg.jobs, [&](std::size_t di) {
    const Document& doc = corpus.documents[di];
    lead[di] = build_lead_n_amr_baseline(doc, n, GeneratorChoice{GeneratorKind::kSource, "", {}});
    try {
      if (doc.unparsed && generator.kind != GeneratorKind::kSource) {
        throw GenerationError("parse failed: " + first_parse_error(parse_errors, doc.id));
      }
      amr[di] = build_lead_n_amr_baseline(doc, n, generator, &warnings[di]);
    } catch (const std::exception& e) {
      errors[di] = e.what();
    }
  });
  Predictions amr_predictions, lead_predictions;
  for (std::size_t di = 0; di < count; ++di) {
    const std::string& id = corpus.documents[di].id;
    report.warnings.insert(report.warnings.end(), warnings[di].begin(), warnings[di].end());
    lead_predictions.emplace_back(id, lead[di]->sentences);
    if (amr[di]) {
      amr_predictions.emplace_back(id, amr[di]->sentences);
    } else {
      report.failures.push_back(id + ": " + errors[di]);
    }
  }
  const std::string suffix = std::to_string(n);
  report.methods.push_back(
      score_predictions("lead-" + suffix + "-amr", amr_predictions, corpus, cfg, report.warnings));
  report.methods.push_back(
      score_predictions("lead-" + suffix, lead_predictions, corpus, cfg, report.warnings));
  return report;
}

// ---------------------------------------------------------------------------
// Extractiveness analysis over a seeded sample.

// Uniform draw in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

// `k` distinct indices from [0, population), ascending.
inline std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k,
                                               std::uint64_t seed) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  if (k >= population) return idx;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + bounded_draw(rng, population - i)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct AnalysisReport {
  RunConfig config;
  std::size_t population = 0;
  std::vector<std::string> sampled_ids;
  DistributionReport distribution;
};

inline AnalysisReport run_analysis(const RunConfig& cfg, const Corpus& corpus) {
  if (corpus.documents.empty()) throw ConfigError("analysis needs a non-empty corpus");
  AnalysisReport report;
  report.config = cfg;
  report.population = corpus.documents.size();
  Corpus sample;
  sample.source_kind = corpus.source_kind;
  for (std::size_t i : sample_indices(corpus.documents.size(), cfg.sample_size, cfg.seed)) {
    sample.documents.push_back(corpus.documents[i]);
    report.sampled_ids.push_back(corpus.documents[i].id);
  }
  report.distribution = best_match_analysis(sample, cfg.normalize, cfg.jobs);
  return report;
}

inline AnalysisReport run_analysis(const RunConfig& cfg) { return run_analysis(cfg, load_corpus(cfg)); }

// ---------------------------------------------------------------------------
// Serialization

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json header_json(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["generated_at"] = utc_timestamp();
  j["config"] = to_json(cfg);
  return j;
}

inline Json sentences_json(const std::vector<Tokens>& sentences) {
  Json arr = Json::array();
  for (const Tokens& t : sentences) {
    std::string line;
    for (const std::string& w : t) {
      if (!line.empty()) line += ' ';
      line += w;
    }
    arr.push_back(line);
  }
  return arr;
}

inline Json score_json(const RougeScore& s) {
  return Json{{"recall", s.recall}, {"precision", s.precision}, {"f1", s.f1}};
}

inline Json strings_json(const std::vector<std::string>& v) {
  Json arr = Json::array();
  for (const std::string& s : v) arr.push_back(s);
  return arr;
}

inline Json to_json(const SummarizeOutcome& o) {
  Json j = header_json(o.config, "summarize");
  Json docs = Json::array();
  for (const DocumentRun& d : o.documents) {
    Json doc;
    doc["id"] = d.id;
    if (d.selection) {
      doc["selection"] = Json{{"method", method_name(d.selection->method)},
                              {"indices", d.selection->indices},
                              {"fallback", d.selection->fallback}};
    } else {
      doc["selection"] = nullptr;
    }
    Json ex = Json::array();
    for (const ExtractionResult& r : d.extractions) {
      ex.push_back(Json{{"sentence_index", r.sentence_index},
                        {"anchor_entity", r.anchor_entity ? Json(*r.anchor_entity) : Json(nullptr)},
                        {"anchor_verb", r.anchor_verb ? Json(*r.anchor_verb) : Json(nullptr)},
                        {"fallback", fallback_name(r.fallback)},
                        {"graph", serialize_penman(r.graph)}});
    }
    doc["extractions"] = ex;
    doc["generator"] = d.summary ? Json(generator_kind_name(d.summary->generator)) : Json(nullptr);
    doc["summary"] = d.summary ? sentences_json(d.summary->sentences) : Json::array();
    doc["error"] = d.error.empty() ? Json(nullptr) : Json(d.error);
    docs.push_back(std::move(doc));
  }
  j["documents"] = docs;
  Json perr = Json::array();
  for (const ToolError& e : o.parse_errors) perr.push_back(e.describe());
  j["parse_errors"] = perr;
  j["warnings"] = strings_json(o.warnings);
  return j;
}

inline Predictions load_predictions(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.contains("documents") || !j["documents"].is_array()) {
    throw ConfigError(path + ": predictions file has no documents array");
  }
  Predictions p;
  for (const auto& d : j["documents"]) {
    if (!d.contains("error") || !d["error"].is_null()) continue;
    std::vector<Tokens> sentences;
    for (const auto& line : d.at("summary")) {
      sentences.push_back(split_whitespace(line.get<std::string>()));
    }
    p.emplace_back(d.at("id").get<std::string>(), std::move(sentences));
  }
  return p;
}

inline Json to_json(const EvaluationReport& r) {
  Json j = header_json(r.config, r.command);
  j["aggregation"] = r.config.aggregation == Aggregation::kMacro ? "macro" : "micro";
  Json methods = Json::array();
  for (const MethodEvaluation& m : r.methods) {
    Json mj;
    mj["name"] = m.name;
    Json agg;
    for (const auto& [v, s] : m.aggregate) agg[variant_name(v)] = score_json(s);
    mj["aggregate"] = agg;
    mj["document_count"] = m.documents.size();
    Json docs = Json::array();
    for (const ScoredDocument& d : m.documents) {
      Json scores;
      for (const auto& [v, s] : d.scores) scores[variant_name(v)] = score_json(s);
      docs.push_back(Json{{"id", d.id},
                          {"predicted", sentences_json(d.predicted)},
                          {"reference", sentences_json(d.reference)},
                          {"scores", scores}});
    }
    mj["documents"] = docs;
    methods.push_back(std::move(mj));
  }
  j["methods"] = methods;
  j["failures"] = strings_json(r.failures);
  j["warnings"] = strings_json(r.warnings);
  return j;
}

inline Json to_json(const AnalysisReport& r) {
  Json j = header_json(r.config, "analyze");
  const DistributionReport& d = r.distribution;
  j["population"] = r.population;
  j["sample_size"] = r.sampled_ids.size();
  j["sentence_count"] = d.records.size();
  j["mean"] = d.mean;
  j["fraction_at_least_half"] = d.fraction_at_least_half;
  Json cumulative = Json::array();
  for (std::size_t k = 0; k < d.cumulative_percent.size(); ++k) {
    cumulative.push_back(Json{{"threshold", bin_threshold(k)}, {"percent", d.cumulative_percent[k]}});
  }
  j["cumulative"] = cumulative;
  Json histogram = Json::array();
  for (std::size_t k = 0; k < d.histogram.size(); ++k) {
    histogram.push_back(Json{{"lower", bin_threshold(k)}, {"upper", bin_threshold(k + 1)},
                             {"count", d.histogram[k]}});
  }
  j["histogram"] = histogram;
  Json records = Json::array();
  for (const BestMatchRecord& rec : d.records) {
    records.push_back(Json{{"document_id", rec.document_id},
                           {"summary_index", rec.summary_index},
                           {"story_index", rec.story_index},
                           {"score", rec.score}});
  }
  j["records"] = records;
  j["warnings"] = strings_json(d.warnings);
  return j;
}

// ---------------------------------------------------------------------------
// Plain-text tables (one decimal).

inline std::string format_cell(std::optional<double> v, int width) {
  char buf[64];
  if (v) {
    std::snprintf(buf, sizeof buf, "%*.1f", width, *v);
  } else {
    std::snprintf(buf, sizeof buf, "%*s", width, "-");
  }
  return buf;
}

inline std::string render_table(const EvaluationReport& r) {
  std::size_t name_width = 6;
  for (const MethodEvaluation& m : r.methods) name_width = std::max(name_width, m.name.size());
  std::ostringstream out;
  char head[256];
  std::snprintf(head, sizeof head, "%-*s  %12s  %15s  %8s  %8s  %8s\n", static_cast<int>(name_width),
                "Method", "R-1 Recall", "R-1 Precision", "R-1 F1", "R-2 F1", "R-L F1");
  out << head;
  for (const MethodEvaluation& m : r.methods) {
    auto get = [&](RougeVariant v) -> const RougeScore* {
      auto it = m.aggregate.find(v);
      return it == m.aggregate.end() ? nullptr : &it->second;
    };
    const RougeScore* r1 = get(RougeVariant::kRouge1);
    const RougeScore* r2 = get(RougeVariant::kRouge2);
    const RougeScore* rl = get(RougeVariant::kRougeL);
    char name[256];
    std::snprintf(name, sizeof name, "%-*s", static_cast<int>(name_width), m.name.c_str());
    out << name << "  " << format_cell(r1 ? std::optional(r1->recall) : std::nullopt, 12) << "  "
        << format_cell(r1 ? std::optional(r1->precision) : std::nullopt, 15) << "  "
        << format_cell(r1 ? std::optional(r1->f1) : std::nullopt, 8) << "  "
        << format_cell(r2 ? std::optional(r2->f1) : std::nullopt, 8) << "  "
        << format_cell(rl ? std::optional(rl->f1) : std::nullopt, 8) << "\n";
  }
  out << "(" << (r.config.aggregation == Aggregation::kMacro ? "macro" : "micro")
      << " average over " << (r.methods.empty() ? 0 : r.methods.front().documents.size())
      << " documents)\n";
  return out.str();
}

inline std::string render_table(const AnalysisReport& r) {
  const DistributionReport& d = r.distribution;
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "# sentences %zu  mean %.4f  fraction>=0.5 %.4f\n",
                d.records.size(), d.mean, d.fraction_at_least_half);
  out << line << "# score\tcumulative_percent\n";
  for (std::size_t k = 0; k < d.cumulative_percent.size(); ++k) {
    std::snprintf(line, sizeof line, "%.2f\t%.2f\n", bin_threshold(k), d.cumulative_percent[k]);
    out << line;
  }
  return out.str();
}

inline std::string render_summaries(const SummarizeOutcome& o) {
  std::ostringstream out;
  for (const DocumentRun& d : o.documents) {
    if (!d.error.empty()) {
      out << d.id << "\tERROR\t" << d.error << "\n";
      continue;
    }
    for (const Json& s : sentences_json(d.summary->sentences)) {
      out << d.id << "\t" << s.get<std::string>() << "\n";
    }
  }
  return out.str();
}

}  // namespace amrsum
