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

// Command-line front end: summarize, evaluate, baseline, analyze,
// extract-graph and parse-check.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "amrsum/amrsum.hpp"

namespace {

using amrsum::ConfigError;
using amrsum::Json;
using amrsum::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

// Flags that override the config file. Each registered option records a
// setter that only fires when the flag was given.
class ConfigFlags {
 public:
  explicit ConfigFlags(CLI::App* app) : app_(app) {
    app->add_option("--config", config_path_, "JSON config file (flags override it)");
    app->add_option("--format", format_, "Output format")
        ->check(CLI::IsMember({"json", "table"}));
    Add<std::string>("--corpus", "Corpus file or directory",
                     [](RunConfig& c, const std::string& v) { c.corpus_path = v; });
    Add<std::string>("--corpus-kind", "amr-bank or cnn-dm", [](RunConfig& c, const std::string& v) {
      c.corpus_kind = amrsum::parse_corpus_kind(v);
    });
    Add<std::string>("--split", "File listing document ids to keep",
                     [](RunConfig& c, const std::string& v) { c.split_file = v; });
    Add<std::string>("--summary-marker", "Id marker of summary blocks (default s)",
                     [](RunConfig& c, const std::string& v) { c.summary_marker = v; });
    Add<std::string>("--method", "first-n, cooccurrence-plus-first or oracle",
                     [](RunConfig& c, const std::string& v) { c.method = amrsum::parse_method(v); });
    Add<std::size_t>("--n", "Sentence count for first-n and the baselines",
                     [](RunConfig& c, std::size_t v) { c.n = v; });
    Add<std::string>("--entity-match", "exact or partial", [](RunConfig& c, const std::string& v) {
      if (v != "exact" && v != "partial") throw ConfigError("entity match must be exact or partial");
      c.entity_match = v == "exact" ? amrsum::EntityMatch::kExact : amrsum::EntityMatch::kPartial;
    });
    Flag("--no-extract", "Generate from full sentence graphs",
         [](RunConfig& c) { c.extract = false; });
    Add<std::string>("--generator", "alignment, external or source",
                     [](RunConfig& c, const std::string& v) {
                       c.generator = amrsum::parse_generator_kind(v);
                     });
    Add<std::string>("--generator-cmd", "External generator command",
                     [](RunConfig& c, const std::string& v) { c.generator_cmd = v; });
    Add<double>("--generator-timeout", "Generator timeout in seconds",
                [](RunConfig& c, double v) { c.generator_timeout_s = v; });
    Add<std::string>("--parser", "gold or external", [](RunConfig& c, const std::string& v) {
      if (v != "gold" && v != "external") throw ConfigError("parser must be gold or external");
      c.parser = v == "gold" ? amrsum::ParserKind::kGold : amrsum::ParserKind::kExternal;
    });
    Add<std::string>("--parser-cmd", "External parser command",
                     [](RunConfig& c, const std::string& v) { c.parser_cmd = v; });
    Add<double>("--parser-timeout", "Parser timeout in seconds",
                [](RunConfig& c, double v) { c.parser_timeout_s = v; });
    Add<std::string>("--rouge", "Comma-separated variants (R1,R2,RL)",
                     [](RunConfig& c, const std::string& v) {
                       c.rouge_variants.clear();
                       std::stringstream ss(v);
                       for (std::string part; std::getline(ss, part, ',');) {
                         c.rouge_variants.push_back(amrsum::parse_variant(part));
                       }
                     });
    Flag("--micro", "Pool counts over documents instead of averaging",
         [](RunConfig& c) { c.aggregation = amrsum::Aggregation::kMicro; });
    Flag("--no-lowercase", "Keep case when normalizing",
         [](RunConfig& c) { c.normalize.lowercase = false; });
    Flag("--remove-stopwords", "Drop English stop words before scoring",
         [](RunConfig& c) { c.normalize.remove_stopwords = true; });
    Flag("--stem", "Porter-stem tokens before scoring", [](RunConfig& c) { c.normalize.stem = true; });
    Add<std::size_t>("--sample-size", "Documents sampled by analyze",
                     [](RunConfig& c, std::size_t v) { c.sample_size = v; });
    Add<std::uint64_t>("--seed", "Sampling seed", [](RunConfig& c, std::uint64_t v) { c.seed = v; });
    Add<std::string>("--predictions", "Stored summarize JSON to score",
                     [](RunConfig& c, const std::string& v) { c.predictions_path = v; });
    Add<std::string>("--output", "Write the report here instead of stdout",
                     [](RunConfig& c, const std::string& v) { c.output_path = v; });
    Add<std::size_t>("--jobs", "Worker threads", [](RunConfig& c, std::size_t v) { c.jobs = v; });
  }

  RunConfig Build(bool require_corpus = true) const {
    RunConfig cfg;
    if (!config_path_.empty()) {
      Json j;
      try {
        j = Json::parse(amrsum::read_file(config_path_));
      } catch (const Json::exception& e) {
        throw ConfigError(config_path_ + ": " + e.what());
      }
      cfg = amrsum::config_from_json(j);
    }
    try {
      for (const auto& apply : setters_) apply(cfg);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (require_corpus) amrsum::validate(cfg);
    return cfg;
  }

  bool table() const { return format_ == "table"; }

 private:
  template <typename T, typename F>
  void Add(const std::string& name, const std::string& help, F set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(name, *value, help);
    setters_.push_back([opt, value, set](RunConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
  }

  template <typename F>
  void Flag(const std::string& name, const std::string& help, F set) {
    CLI::Option* opt = app_->add_flag(name, help);
    setters_.push_back([opt, set](RunConfig& c) {
      if (opt->count() > 0) set(c);
    });
  }

  CLI::App* app_;
  std::string config_path_;
  std::string format_ = "json";
  std::vector<std::function<void(RunConfig&)>> setters_;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + cfg.output_path);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int exit_for(std::size_t failures) { return failures ? kExitPartial : kExitOk; }

int RunSummarize(const ConfigFlags& flags) {
  const RunConfig cfg = flags.Build();
  const amrsum::SummarizeOutcome out = amrsum::run_summarize(cfg);
  emit(cfg, flags.table() ? amrsum::render_summaries(out) : dump(amrsum::to_json(out)));
  for (const auto& d : out.documents) {
    if (!d.error.empty()) std::cerr << "error: " << d.id << ": " << d.error << "\n";
  }
  return exit_for(out.failures());
}

int ReportEvaluation(const ConfigFlags& flags, const RunConfig& cfg,
                     const amrsum::EvaluationReport& report) {
  emit(cfg, flags.table() ? amrsum::render_table(report) : dump(amrsum::to_json(report)));
  for (const std::string& f : report.failures) std::cerr << "error: " << f << "\n";
  return exit_for(report.failures.size());
}

int RunVerify(const ConfigFlags& flags, const std::string& target) {
  if (target == "list") {
    for (const amrsum::TargetGroup& g : amrsum::published_targets()) {
      std::cout << g.id << "\t" << g.description << "\n";
    }
    return kExitOk;
  }
  const amrsum::TargetGroup& group = amrsum::find_target(target);
  RunConfig cfg = flags.Build(false);
  cfg.corpus_kind = group.corpus_kind;
  cfg.generator = group.generator;
  cfg.parser = group.parser;
  amrsum::validate(cfg);
  const amrsum::VerificationResult result =
      amrsum::verify_target(group, cfg, amrsum::load_corpus(cfg));
  std::cout << amrsum::format_verification(result);
  return result.all_pass() ? kExitOk : kExitPartial;
}

int RunEvaluate(const ConfigFlags& flags) {
  const RunConfig cfg = flags.Build();
  return ReportEvaluation(flags, cfg, amrsum::run_evaluate(cfg));
}

int RunBaseline(const ConfigFlags& flags) {
  const RunConfig cfg = flags.Build();
  return ReportEvaluation(flags, cfg, amrsum::run_baseline(cfg, amrsum::load_corpus(cfg), cfg.n));
}

int RunAnalyze(const ConfigFlags& flags) {
  const RunConfig cfg = flags.Build();
  const amrsum::AnalysisReport report = amrsum::run_analysis(cfg);
  emit(cfg, flags.table() ? amrsum::render_table(report) : dump(amrsum::to_json(report)));
  return kExitOk;
}

int RunExtractGraph(const ConfigFlags& flags, const std::string& doc_id,
                    std::optional<std::size_t> sentence) {
  const RunConfig cfg = flags.Build();
  std::vector<amrsum::ToolError> parse_errors;
  const amrsum::Corpus corpus =
      amrsum::ensure_graphs(cfg, amrsum::load_corpus(cfg), parse_errors);
  std::string text;
  Json extractions = Json::array();
  std::vector<std::string> errors;
  bool matched = doc_id.empty();
  for (const amrsum::Document& doc : corpus.documents) {
    if (!doc_id.empty() && doc.id != doc_id) continue;
    matched = true;
    try {
      std::vector<amrsum::ExtractionResult> results;
      if (sentence) {
        results.push_back(amrsum::extract_summary_graph(doc, *sentence));
      } else {
        results = amrsum::extract_all(doc, amrsum::select_sentences(doc, cfg));
      }
      for (const auto& r : results) {
        text += amrsum::format_extraction(doc.id, r) + "\n";
        extractions.push_back(
            Json{{"document_id", doc.id},
                 {"sentence_index", r.sentence_index},
                 {"anchor_entity", r.anchor_entity ? Json(*r.anchor_entity) : Json(nullptr)},
                 {"anchor_verb", r.anchor_verb ? Json(*r.anchor_verb) : Json(nullptr)},
                 {"fallback", amrsum::fallback_name(r.fallback)},
                 {"graph", amrsum::serialize_penman(r.graph)}});
      }
    } catch (const std::exception& e) {
      errors.push_back(doc.id + ": " + e.what());
    }
  }
  if (!matched) throw ConfigError("no document with id '" + doc_id + "'");
  if (flags.table()) {
    emit(cfg, text);
  } else {
    Json j = amrsum::header_json(cfg, "extract-graph");
    j["extractions"] = extractions;
    j["errors"] = amrsum::strings_json(errors);
    emit(cfg, dump(j));
  }
  for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
  return exit_for(errors.size());
}

// Checks every blank-line separated PENMAN block; `#` comment lines are
// ignored.
int RunParseCheck(const std::vector<std::string>& files, bool json) {
  Json report = Json::array();
  std::size_t invalid = 0;
  for (const std::string& path : files) {
    const std::string content = amrsum::read_file(path);
    std::istringstream in(content);
    Json errors = Json::array();
    std::size_t blocks = 0, line_no = 0, block_line = 0;
    std::string graph;
    auto flush = [&]() {
      if (graph.empty()) return;
      ++blocks;
      try {
        amrsum::parse_penman(graph);
      } catch (const amrsum::ParseError& e) {
        errors.push_back(Json{{"block", blocks}, {"line", block_line},
                              {"offset", e.offset()}, {"message", e.what()}});
      } catch (const std::exception& e) {
        errors.push_back(Json{{"block", blocks}, {"line", block_line},
                              {"offset", nullptr}, {"message", e.what()}});
      }
      graph.clear();
    };
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      const std::string_view trimmed = amrsum::internal::Trim(line);
      if (trimmed.empty()) {
        flush();
        continue;
      }
      if (trimmed.front() == '#') continue;
      if (graph.empty()) block_line = line_no;
      graph += line + "\n";
    }
    flush();
    invalid += errors.size();
    if (!json) {
      for (const auto& e : errors) {
        std::cout << path << ":" << e["line"].get<std::size_t>() << ": "
                  << e["message"].get<std::string>() << "\n";
      }
      std::cout << path << ": " << blocks << " blocks, " << errors.size() << " invalid\n";
    }
    report.push_back(Json{{"path", path}, {"blocks", blocks}, {"errors", errors}});
  }
  if (json) std::cout << dump(Json{{"files", report}, {"invalid", invalid}});
  return invalid ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based summarization over AMR parses, with ROUGE evaluation"};
  app.set_version_flag("--version", std::string(amrsum::kToolVersion));
  app.require_subcommand(1);

  CLI::App* summarize = app.add_subcommand("summarize", "Run parse, extract and generate");
  ConfigFlags summarize_flags(summarize);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score summaries with ROUGE");
  ConfigFlags evaluate_flags(evaluate);
  std::string verify_target;
  evaluate->add_option("--verify-paper", verify_target,
                       "Rerun a published configuration on user-supplied data ('list' shows ids)");

  CLI::App* baseline = app.add_subcommand("baseline", "Score Lead-n-AMR and Lead-n");
  ConfigFlags baseline_flags(baseline);

  CLI::App* analyze = app.add_subcommand("analyze", "Best-match extractiveness analysis");
  ConfigFlags analyze_flags(analyze);

  CLI::App* extract = app.add_subcommand("extract-graph", "Print extracted summary graphs");
  ConfigFlags extract_flags(extract);
  std::string extract_doc;
  std::optional<std::size_t> extract_sentence;
  extract->add_option("--doc", extract_doc, "Only this document");
  extract->add_option("--sentence", extract_sentence,
                      "Extract from this story sentence instead of the selected ones");

  CLI::App* parse_check = app.add_subcommand("parse-check", "Validate PENMAN files");
  std::vector<std::string> check_files;
  std::string check_format = "table";
  parse_check->add_option("files", check_files, "PENMAN files")->required();
  parse_check->add_option("--format", check_format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*summarize) return RunSummarize(summarize_flags);
    if (*evaluate) {
      if (!verify_target.empty()) return RunVerify(evaluate_flags, verify_target);
      return RunEvaluate(evaluate_flags);
    }
    if (*baseline) return RunBaseline(baseline_flags);
    if (*analyze) return RunAnalyze(analyze_flags);
    if (*extract) return RunExtractGraph(extract_flags, extract_doc, extract_sentence);
    if (*parse_check) return RunParseCheck(check_files, check_format == "json");
  } catch (const amrsum::CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
