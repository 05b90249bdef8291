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

// Published reference numbers and a checker that reruns the matching
// configuration on user-supplied data. The corpora involved are licensed, so
// none of this runs in the default test suite.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "amrsum/config.hpp"
#include "amrsum/pipeline.hpp"

namespace amrsum {

inline constexpr double kTargetTolerance = 1.0;  // percentage points

enum class TargetRowKind { kLeadAmr, kFirstN, kCooccurrence, kAnalysis };

struct TargetRow {
  std::string label;
  TargetRowKind kind = TargetRowKind::kFirstN;
  std::size_t n = 1;
  // Metric key ("R1.recall", "R2.f1", "mean", ...) and expected percentage.
  std::vector<std::pair<std::string, double>> expected;
};

struct TargetGroup {
  std::string id;
  std::string description;
  CorpusKind corpus_kind = CorpusKind::kAmrBank;
  GeneratorKind generator = GeneratorKind::kAlignment;
  ParserKind parser = ParserKind::kGold;
  std::vector<TargetRow> rows;
};

inline const std::vector<TargetGroup>& published_targets() {
  using K = TargetRowKind;
  auto r1 = [](double r, double p, double f) {
    return std::vector<std::pair<std::string, double>>{
        {"R1.recall", r}, {"R1.precision", p}, {"R1.f1", f}};
  };
  auto full = [](double r, double p, double f, double r2, double rl) {
    return std::vector<std::pair<std::string, double>>{
        {"R1.recall", r}, {"R1.precision", p}, {"R1.f1", f}, {"R2.f1", r2}, {"RL.f1", rl}};
  };
  static const std::vector<TargetGroup> kTargets = {
      {"proxy-alignment",
       "AMR Bank proxy-report test split, gold graphs, alignment-based generation",
       CorpusKind::kAmrBank, GeneratorKind::kAlignment, ParserKind::kGold,
       {{"lead-1-amr", K::kLeadAmr, 1, r1(50.4, 57.5, 51.0)},
        {"first-cooccurrence+first", K::kCooccurrence, 1, r1(52.4, 55.7, 51.3)},
        {"first-1", K::kFirstN, 1, r1(49.1, 60.1, 51.2)}}},
      {"proxy-gold-generator",
       "AMR Bank proxy-report test split, gold graphs, external sentence generator",
       CorpusKind::kAmrBank, GeneratorKind::kExternal, ParserKind::kGold,
       {{"lead-1-amr", K::kLeadAmr, 1, full(46.8, 49.0, 45.5, 21.5, 35.2)},
        {"first-cooccurrence+first", K::kCooccurrence, 1, full(49.5, 48.1, 46.3, 21.7, 34.7)},
        {"first-1", K::kFirstN, 1, full(45.9, 51.4, 45.9, 21.9, 35.0)}}},
      {"proxy-parsed-generator",
       "AMR Bank proxy-report test split, external parser and external generator",
       CorpusKind::kAmrBank, GeneratorKind::kExternal, ParserKind::kExternal,
       {{"lead-1-amr", K::kLeadAmr, 1, full(43.7, 44.7, 41.4, 16.2, 28.3)},
        {"first-cooccurrence+first", K::kCooccurrence, 1, full(44.5, 42.4, 40.0, 17.0, 27.5)},
        {"first-1", K::kFirstN, 1, full(41.1, 45.4, 40.1, 15.3, 28.2)}}},
      {"cnndm-generator",
       "CNN/DailyMail (non-anonymized) test stories, external parser and generator",
       CorpusKind::kCnnDm, GeneratorKind::kExternal, ParserKind::kExternal,
       {{"lead-3-amr", K::kLeadAmr, 3, full(40.4, 27.8, 31.7, 5.8, 16.8)},
        {"first-3", K::kFirstN, 3, full(38.1, 28.8, 31.6, 5.7, 16.9)}}},
      {"cnndm-extractiveness",
       "CNN/DailyMail, 5000 sampled document-summary pairs, best-match ROUGE-1 recall",
       CorpusKind::kCnnDm, GeneratorKind::kAlignment, ParserKind::kGold,
       {{"best-match", K::kAnalysis, 0, {{"mean", 79.0}, {"fraction_at_least_half", 80.0}}}}},
  };
  return kTargets;
}

inline const TargetGroup& find_target(const std::string& id) {
  for (const TargetGroup& g : published_targets()) {
    if (g.id == id) return g;
  }
  throw ConfigError("unknown verification target '" + id + "'");
}

struct TargetCheck {
  std::string row;
  std::string metric;
  double expected = 0;
  double actual = 0;
  bool pass = false;
};

struct VerificationResult {
  std::string target;
  std::vector<TargetCheck> checks;
  bool all_pass() const {
    for (const TargetCheck& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

inline double metric_value(const MethodEvaluation& m, const std::string& key) {
  const std::size_t dot = key.find('.');
  const RougeScore& s = m.aggregate.at(parse_variant(key.substr(0, dot)));
  const std::string part = key.substr(dot + 1);
  if (part == "recall") return s.recall;
  if (part == "precision") return s.precision;
  return s.f1;
}

// Reruns every row of `group` under `base` (which supplies the corpus path,
// split and any external commands) and compares against the published values.
inline VerificationResult verify_target(const TargetGroup& group, const RunConfig& base,
                                        const Corpus& corpus) {
  RunConfig cfg = base;
  cfg.corpus_kind = group.corpus_kind;
  cfg.generator = group.generator;
  cfg.parser = group.parser;
  cfg.extract = true;
  cfg.rouge_variants = {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL};
  if (cfg.generator == GeneratorKind::kExternal && cfg.generator_cmd.empty()) {
    throw ConfigError("target '" + group.id + "' needs --generator-cmd");
  }
  if (cfg.parser == ParserKind::kExternal && cfg.parser_cmd.empty()) {
    throw ConfigError("target '" + group.id + "' needs --parser-cmd");
  }
  VerificationResult out;
  out.target = group.id;
  for (const TargetRow& row : group.rows) {
    auto check = [&](const std::string& metric, double expected, double actual) {
      out.checks.push_back({row.label, metric, expected, actual,
                            std::fabs(actual - expected) <= kTargetTolerance});
    };
    if (row.kind == TargetRowKind::kAnalysis) {
      cfg.sample_size = 5000;
      const AnalysisReport a = run_analysis(cfg, corpus);
      check("mean", row.expected[0].second, 100 * a.distribution.mean);
      check("fraction_at_least_half", row.expected[1].second,
            100 * a.distribution.fraction_at_least_half);
      continue;
    }
    MethodEvaluation m;
    if (row.kind == TargetRowKind::kLeadAmr) {
      m = run_baseline(cfg, corpus, row.n).methods.front();
    } else {
      cfg.method = row.kind == TargetRowKind::kFirstN ? SelectionMethod::kFirstN
                                                      : SelectionMethod::kCooccurrencePlusFirst;
      cfg.n = row.n;
      cfg.predictions_path.clear();
      m = run_evaluate(cfg, corpus).methods.front();
    }
    for (const auto& [metric, expected] : row.expected) check(metric, expected, metric_value(m, metric));
  }
  return out;
}

inline std::string format_verification(const VerificationResult& r) {
  std::string out;
  char line[256];
  for (const TargetCheck& c : r.checks) {
    std::snprintf(line, sizeof line, "[%s] %s %s %s: expected %.1f, got %.2f (tolerance %.1f)\n",
                  c.pass ? "PASS" : "FAIL", r.target.c_str(), c.row.c_str(), c.metric.c_str(),
                  c.expected, c.actual, kTargetTolerance);
    out += line;
  }
  return out;
}

}  // namespace amrsum
