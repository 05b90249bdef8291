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

#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "amrsum/corpus.hpp"
#include "amrsum/generate.hpp"
#include "amrsum/rouge.hpp"
#include "amrsum/select.hpp"

namespace amrsum {

inline constexpr const char* kToolName = "amrsum";
inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParserKind { kGold, kExternal };
enum class Aggregation { kMacro, kMicro };

struct RunConfig {
  CorpusKind corpus_kind = CorpusKind::kAmrBank;
  std::string corpus_path;
  std::string split_file;
  std::string summary_marker = "s";

  SelectionMethod method = SelectionMethod::kFirstN;
  std::size_t n = 1;
  EntityMatch entity_match = EntityMatch::kExact;
  bool extract = true;

  GeneratorKind generator = GeneratorKind::kAlignment;
  std::string generator_cmd;
  double generator_timeout_s = 60;

  ParserKind parser = ParserKind::kGold;
  std::string parser_cmd;
  double parser_timeout_s = 60;

  std::vector<RougeVariant> rouge_variants{RougeVariant::kRouge1, RougeVariant::kRouge2,
                                           RougeVariant::kRougeL};
  NormalizeOptions normalize;
  Aggregation aggregation = Aggregation::kMacro;

  std::size_t sample_size = 5000;
  std::uint64_t seed = 42;

  std::string predictions_path;
  std::string output_path;
  std::size_t jobs = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  GeneratorChoice generator_choice() const {
    return {generator, generator_cmd,
            std::chrono::milliseconds(static_cast<long long>(generator_timeout_s * 1000))};
  }
  ExternalTool parser_tool() const {
    return {parser_cmd, std::chrono::milliseconds(static_cast<long long>(parser_timeout_s * 1000)),
            jobs};
  }
};

inline const char* method_name(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::kFirstN: return "first-n";
    case SelectionMethod::kCooccurrencePlusFirst: return "cooccurrence-plus-first";
    case SelectionMethod::kOracle: return "oracle";
  }
  return "?";
}

inline SelectionMethod parse_method(std::string_view s) {
  if (s == "first-n") return SelectionMethod::kFirstN;
  if (s == "cooccurrence-plus-first" || s == "first-cooccurrence+first") {
    return SelectionMethod::kCooccurrencePlusFirst;
  }
  if (s == "oracle") return SelectionMethod::kOracle;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

// Row label used in reports, e.g. "first-3" or "first-cooccurrence+first".
inline std::string method_label(const RunConfig& cfg) {
  std::string label;
  switch (cfg.method) {
    case SelectionMethod::kFirstN: label = "first-" + std::to_string(cfg.n); break;
    case SelectionMethod::kCooccurrencePlusFirst: label = "first-cooccurrence+first"; break;
    case SelectionMethod::kOracle: label = "oracle"; break;
  }
  if (!cfg.extract) label += " (full graphs)";
  return label;
}

// True when the first word of `command` names an executable file, directly or
// through PATH.
inline bool command_resolvable(std::string_view command) {
  const auto words = split_whitespace(command);
  if (words.empty()) return false;
  const std::string& exe = words.front();
  if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::string_view rest(path);
  while (true) {
    const std::size_t colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    if (dir.empty()) dir = ".";
    if (::access((std::filesystem::path(dir) / exe).c_str(), X_OK) == 0) return true;
    if (colon == std::string_view::npos) return false;
    rest.remove_prefix(colon + 1);
  }
}

inline void validate(const RunConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ConfigError("corpus_path is required");
  if (cfg.method == SelectionMethod::kFirstN && cfg.n == 0) {
    throw ConfigError("method first-n requires n >= 1");
  }
  if (cfg.generator == GeneratorKind::kExternal && !command_resolvable(cfg.generator_cmd)) {
    throw ConfigError("generator command '" + cfg.generator_cmd + "' is not executable");
  }
  if (cfg.parser == ParserKind::kExternal && !command_resolvable(cfg.parser_cmd)) {
    throw ConfigError("parser command '" + cfg.parser_cmd + "' is not executable");
  }
  if (cfg.generator_timeout_s <= 0 || cfg.parser_timeout_s <= 0) {
    throw ConfigError("timeouts must be positive");
  }
  if (cfg.rouge_variants.empty()) throw ConfigError("at least one ROUGE variant is required");
  if (cfg.jobs == 0) throw ConfigError("jobs must be >= 1");
}

inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["corpus_kind"] = corpus_kind_name(cfg.corpus_kind);
  j["corpus_path"] = cfg.corpus_path;
  j["split_file"] = cfg.split_file;
  j["summary_marker"] = cfg.summary_marker;
  j["method"] = method_name(cfg.method);
  j["n"] = cfg.n;
  j["entity_match"] = cfg.entity_match == EntityMatch::kExact ? "exact" : "partial";
  j["extract"] = cfg.extract;
  j["generator"] = generator_kind_name(cfg.generator);
  j["generator_cmd"] = cfg.generator_cmd;
  j["generator_timeout_s"] = cfg.generator_timeout_s;
  j["parser"] = cfg.parser == ParserKind::kGold ? "gold" : "external";
  j["parser_cmd"] = cfg.parser_cmd;
  j["parser_timeout_s"] = cfg.parser_timeout_s;
  auto variants = nlohmann::ordered_json::array();
  for (RougeVariant v : cfg.rouge_variants) variants.push_back(variant_name(v));
  j["rouge_variants"] = variants;
  j["lowercase"] = cfg.normalize.lowercase;
  j["remove_stopwords"] = cfg.normalize.remove_stopwords;
  j["stem"] = cfg.normalize.stem;
  j["aggregation"] = cfg.aggregation == Aggregation::kMacro ? "macro" : "micro";
  j["sample_size"] = cfg.sample_size;
  j["seed"] = cfg.seed;
  j["predictions_path"] = cfg.predictions_path;
  j["output_path"] = cfg.output_path;
  j["jobs"] = cfg.jobs;
  return j;
}

// Missing keys keep their defaults; unknown keys are rejected.
template <typename Json>
RunConfig config_from_json(const Json& j, RunConfig cfg = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "corpus_kind", "corpus_path", "split_file", "summary_marker", "method", "n",
      "entity_match", "extract", "generator", "generator_cmd", "generator_timeout_s", "parser",
      "parser_cmd", "parser_timeout_s", "rouge_variants", "lowercase", "remove_stopwords", "stem",
      "aggregation", "sample_size", "seed", "predictions_path", "output_path", "jobs"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKeys.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  }
  try {
    if (j.contains("corpus_kind")) cfg.corpus_kind = parse_corpus_kind(j["corpus_kind"].template get<std::string>());
    if (j.contains("corpus_path")) cfg.corpus_path = j["corpus_path"].template get<std::string>();
    if (j.contains("split_file")) cfg.split_file = j["split_file"].template get<std::string>();
    if (j.contains("summary_marker")) cfg.summary_marker = j["summary_marker"].template get<std::string>();
    if (j.contains("method")) cfg.method = parse_method(j["method"].template get<std::string>());
    if (j.contains("n")) cfg.n = j["n"].template get<std::size_t>();
    if (j.contains("entity_match")) {
      const auto m = j["entity_match"].template get<std::string>();
      if (m != "exact" && m != "partial") throw ConfigError("entity_match must be exact or partial");
      cfg.entity_match = m == "exact" ? EntityMatch::kExact : EntityMatch::kPartial;
    }
    if (j.contains("extract")) cfg.extract = j["extract"].template get<bool>();
    if (j.contains("generator")) cfg.generator = parse_generator_kind(j["generator"].template get<std::string>());
    if (j.contains("generator_cmd")) cfg.generator_cmd = j["generator_cmd"].template get<std::string>();
    if (j.contains("generator_timeout_s")) cfg.generator_timeout_s = j["generator_timeout_s"].template get<double>();
    if (j.contains("parser")) {
      const auto p = j["parser"].template get<std::string>();
      if (p != "gold" && p != "external") throw ConfigError("parser must be gold or external");
      cfg.parser = p == "gold" ? ParserKind::kGold : ParserKind::kExternal;
    }
    if (j.contains("parser_cmd")) cfg.parser_cmd = j["parser_cmd"].template get<std::string>();
    if (j.contains("parser_timeout_s")) cfg.parser_timeout_s = j["parser_timeout_s"].template get<double>();
    if (j.contains("rouge_variants")) {
      cfg.rouge_variants.clear();
      for (const auto& v : j["rouge_variants"]) cfg.rouge_variants.push_back(parse_variant(v.template get<std::string>()));
    }
    if (j.contains("lowercase")) cfg.normalize.lowercase = j["lowercase"].template get<bool>();
    if (j.contains("remove_stopwords")) cfg.normalize.remove_stopwords = j["remove_stopwords"].template get<bool>();
    if (j.contains("stem")) cfg.normalize.stem = j["stem"].template get<bool>();
    if (j.contains("aggregation")) {
      const auto a = j["aggregation"].template get<std::string>();
      if (a != "macro" && a != "micro") throw ConfigError("aggregation must be macro or micro");
      cfg.aggregation = a == "macro" ? Aggregation::kMacro : Aggregation::kMicro;
    }
    if (j.contains("sample_size")) cfg.sample_size = j["sample_size"].template get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].template get<std::uint64_t>();
    if (j.contains("predictions_path")) cfg.predictions_path = j["predictions_path"].template get<std::string>();
    if (j.contains("output_path")) cfg.output_path = j["output_path"].template get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].template get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace amrsum
