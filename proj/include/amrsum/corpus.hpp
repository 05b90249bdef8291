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
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrsum/amr_graph.hpp"
#include "amrsum/parallel.hpp"
#include "amrsum/penman.hpp"
#include "amrsum/subprocess.hpp"

namespace amrsum {

struct Document {
  std::string id;
  std::vector<AlignedSentence> story;
  std::vector<AlignedSentence> summary;  // graphs optional
  // Set while any story sentence lacks a graph.
  bool unparsed = false;

  void refresh_parse_state() {
    unparsed = std::any_of(story.begin(), story.end(),
                           [](const AlignedSentence& s) { return !s.graph.has_value(); });
  }
};

enum class CorpusKind { kAmrBank, kCnnDm };

inline const char* corpus_kind_name(CorpusKind k) {
  return k == CorpusKind::kAmrBank ? "amr-bank" : "cnn-dm";
}

inline CorpusKind parse_corpus_kind(std::string_view s) {
  if (s == "amr-bank") return CorpusKind::kAmrBank;
  if (s == "cnn-dm") return CorpusKind::kCnnDm;
  throw std::invalid_argument("unknown corpus kind '" + std::string(s) + "'");
}

struct Corpus {
  std::vector<Document> documents;
  CorpusKind source_kind = CorpusKind::kAmrBank;

  const Document* find(std::string_view id) const {
    for (const Document& d : documents) {
      if (d.id == id) return &d;
    }
    return nullptr;
  }
};

// Load failure carrying every offending block or document id.
class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(std::vector<std::string> problems)
      : std::runtime_error(Join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string Join(const std::vector<std::string>& problems) {
    std::string out = "corpus error";
    for (const std::string& p : problems) out += "\n  " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace internal {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

// Collects `::key value` pairs from one comment line ("# ::id x ::date y").
inline void ReadMetadata(std::string_view line, std::map<std::string, std::string>& meta) {
  line.remove_prefix(1);  // '#'
  std::size_t pos = line.find("::");
  while (pos != std::string_view::npos) {
    std::size_t next = pos + 2;
    while (true) {
      next = line.find("::", next);
      if (next == std::string_view::npos) break;
      if (std::isspace(static_cast<unsigned char>(line[next - 1]))) break;
      next += 2;
    }
    std::string_view field = line.substr(pos + 2, next == std::string_view::npos ? line.npos
                                                                                  : next - pos - 2);
    std::size_t sp = 0;
    while (sp < field.size() && !std::isspace(static_cast<unsigned char>(field[sp]))) ++sp;
    std::string key(field.substr(0, sp));
    if (!key.empty()) meta[key] = std::string(Trim(field.substr(sp)));
    pos = next;
  }
}

}  // namespace internal

struct AmrBankOptions {
  // Ids `<docid>.<marker><n>` are summary sentences; `<docid>.<n>` story.
  std::string summary_marker = "s";
};

// Parses AMR-Bank-style text: blank-line separated blocks of `# ::` metadata
// followed by a PENMAN graph. Documents keep first-appearance order;
// sentences are ordered by their numeric index.
inline Corpus parse_amr_bank(std::string_view text, const AmrBankOptions& opts = {}) {
  struct Entry {
    std::size_t index;
    AlignedSentence sentence;
  };
  struct Pending {
    std::vector<Entry> story, summary;
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> docs;
  std::set<std::string> seen_ids;
  std::vector<std::string> problems;

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  std::size_t i = 0;
  while (i < lines.size()) {
    while (i < lines.size() && internal::Trim(lines[i]).empty()) ++i;
    if (i >= lines.size()) break;
    const std::size_t first_line = i + 1;
    std::map<std::string, std::string> meta;
    std::string graph_text;
    for (; i < lines.size() && !internal::Trim(lines[i]).empty(); ++i) {
      std::string_view line = internal::Trim(lines[i]);
      if (line.front() == '#') {
        internal::ReadMetadata(line, meta);
      } else {
        graph_text += line;
        graph_text += '\n';
      }
    }
    const std::string where = "block at line " + std::to_string(first_line);
    auto id_it = meta.find("id");
    if (id_it == meta.end()) {
      if (!graph_text.empty()) problems.push_back(where + ": missing ::id");
      continue;  // header comments only
    }
    const std::string id = id_it->second;
    if (!seen_ids.insert(id).second) {
      problems.push_back(id + ": duplicate sentence id");
      continue;
    }
    const std::size_t dot = id.rfind('.');
    if (dot == std::string::npos || dot == 0) {
      problems.push_back(id + ": id is not of the form <docid>.<n>");
      continue;
    }
    const std::string doc_id = id.substr(0, dot);
    std::string_view suffix = std::string_view(id).substr(dot + 1);
    bool is_summary = false;
    if (!internal::AllDigits(suffix)) {
      if (suffix.substr(0, opts.summary_marker.size()) == opts.summary_marker &&
          internal::AllDigits(suffix.substr(opts.summary_marker.size()))) {
        is_summary = true;
        suffix.remove_prefix(opts.summary_marker.size());
      } else {
        problems.push_back(id + ": id is not of the form <docid>.<n>");
        continue;
      }
    }
    auto tok_it = meta.find("tok");
    auto snt_it = meta.find("snt");
    if (tok_it == meta.end() && snt_it == meta.end()) {
      problems.push_back(id + ": missing ::snt");
      continue;
    }
    if (graph_text.empty()) {
      problems.push_back(id + ": missing graph");
      continue;
    }
    AlignedSentence sentence;
    sentence.tokens = split_whitespace(tok_it != meta.end() ? tok_it->second : snt_it->second);
    try {
      sentence.graph = parse_penman(graph_text);
      if (auto al = meta.find("alignments"); al != meta.end()) {
        sentence.alignments = parse_alignments(al->second);
      }
      sentence.validate();
    } catch (const std::exception& e) {
      problems.push_back(id + ": " + e.what());
      continue;
    }
    if (!docs.count(doc_id)) order.push_back(doc_id);
    Pending& p = docs[doc_id];
    (is_summary ? p.summary : p.story).push_back({std::stoul(std::string(suffix)), std::move(sentence)});
  }

  Corpus corpus;
  corpus.source_kind = CorpusKind::kAmrBank;
  for (const std::string& doc_id : order) {
    Pending& p = docs[doc_id];
    auto by_index = [](const Entry& a, const Entry& b) { return a.index < b.index; };
    std::stable_sort(p.story.begin(), p.story.end(), by_index);
    std::stable_sort(p.summary.begin(), p.summary.end(), by_index);
    for (const auto* part : {&p.story, &p.summary}) {
      for (std::size_t k = 1; k < part->size(); ++k) {
        if ((*part)[k].index == (*part)[k - 1].index) {
          problems.push_back(doc_id + ": duplicate sentence index " +
                             std::to_string((*part)[k].index));
        }
      }
    }
    if (p.story.empty()) problems.push_back(doc_id + ": document has no story sentences");
    if (p.summary.empty()) problems.push_back(doc_id + ": document has no summary sentences");
    Document d;
    d.id = doc_id;
    for (Entry& e : p.story) d.story.push_back(std::move(e.sentence));
    for (Entry& e : p.summary) d.summary.push_back(std::move(e.sentence));
    d.refresh_parse_state();
    corpus.documents.push_back(std::move(d));
  }
  if (!problems.empty()) throw CorpusError(std::move(problems));
  return corpus;
}

inline Corpus load_amr_bank(const std::filesystem::path& path, const AmrBankOptions& opts = {}) {
  return parse_amr_bank(read_file(path), opts);
}

// Writes a corpus back in AMR-Bank form. Sentences are renumbered from 1 and
// graph-less sentences are skipped.
inline std::string write_amr_bank(const Corpus& corpus, const AmrBankOptions& opts = {}) {
  std::string out;
  for (const Document& d : corpus.documents) {
    auto emit = [&](const std::vector<AlignedSentence>& part, const std::string& marker) {
      for (std::size_t k = 0; k < part.size(); ++k) {
        const AlignedSentence& s = part[k];
        if (!s.graph) continue;
        out += "# ::id " + d.id + "." + marker + std::to_string(k + 1) + "\n";
        out += "# ::snt " + s.text() + "\n";
        if (!s.alignments.empty()) out += "# ::alignments " + format_alignments(s.alignments) + "\n";
        out += serialize_penman(*s.graph, true) + "\n\n";
      }
    };
    emit(d.story, "");
    emit(d.summary, opts.summary_marker);
  }
  return out;
}

// Splits on '.', '!' or '?' followed by whitespace and then an uppercase
// ASCII letter or the end of the text.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j < text.size() && !std::isupper(static_cast<unsigned char>(text[j]))) continue;
    std::string_view s = internal::Trim(text.substr(start, i + 1 - start));
    if (!s.empty()) out.emplace_back(s);
    start = i + 1;
  }
  std::string_view rest = internal::Trim(text.substr(std::min(start, text.size())));
  if (!rest.empty()) out.emplace_back(rest);
  return out;
}

// `.story` text: article paragraphs, then `@highlight` lines each preceding
// one summary point. Paragraph ends also end sentences.
inline Document parse_cnn_dm_story(std::string_view text, std::string id) {
  std::vector<std::string> paragraphs;
  std::vector<std::string> highlights;
  std::string current;
  bool in_highlights = false;
  bool expecting_highlight = false;
  auto flush = [&] {
    if (current.empty()) return;
    (in_highlights ? highlights : paragraphs).push_back(std::move(current));
    current.clear();
  };
  for (const std::string& raw : split_lines(text)) {
    std::string_view line = internal::Trim(raw);
    if (line == "@highlight") {
      flush();
      in_highlights = true;
      expecting_highlight = true;
      continue;
    }
    if (line.empty()) {
      flush();
      continue;
    }
    if (in_highlights && !expecting_highlight && current.empty()) {
      // Stray text after a completed highlight point is ignored.
      continue;
    }
    if (!current.empty()) current += ' ';
    current += line;
    expecting_highlight = false;
  }
  flush();
  if (!in_highlights) throw std::runtime_error(id + ": no @highlight present");
  Document d;
  d.id = std::move(id);
  for (const std::string& p : paragraphs) {
    for (const std::string& s : split_sentences(p)) {
      d.story.push_back(AlignedSentence{split_whitespace(s), std::nullopt, {}});
    }
  }
  if (d.story.empty()) throw std::runtime_error(d.id + ": empty article");
  for (const std::string& h : highlights) {
    d.summary.push_back(AlignedSentence{split_whitespace(h), std::nullopt, {}});
  }
  if (d.summary.empty()) throw std::runtime_error(d.id + ": @highlight without summary text");
  d.refresh_parse_state();
  return d;
}

inline Document load_cnn_dm_story(const std::filesystem::path& path) {
  return parse_cnn_dm_story(read_file(path), path.stem().string());
}

// A single `.story` file, or every `.story` file in a directory sorted by
// name.
inline Corpus load_cnn_dm(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".story") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  Corpus corpus;
  corpus.source_kind = CorpusKind::kCnnDm;
  std::vector<std::string> problems;
  std::set<std::string> ids;
  for (const auto& f : files) {
    try {
      Document d = load_cnn_dm_story(f);
      if (!ids.insert(d.id).second) {
        problems.push_back(d.id + ": duplicate document id");
        continue;
      }
      corpus.documents.push_back(std::move(d));
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw CorpusError(std::move(problems));
  return corpus;
}

// One document id per line; blank lines and '#' comments ignored.
inline std::vector<std::string> load_id_list(const std::filesystem::path& path) {
  std::vector<std::string> ids;
  for (const std::string& raw : split_lines(read_file(path))) {
    std::string_view line = internal::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    ids.emplace_back(line);
  }
  return ids;
}

// Keeps the documents named in `ids`, in corpus order.
inline Corpus restrict_to_ids(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::set<std::string> wanted(ids.begin(), ids.end());
  Corpus out;
  out.source_kind = corpus.source_kind;
  for (const Document& d : corpus.documents) {
    if (wanted.erase(d.id)) out.documents.push_back(d);
  }
  if (!wanted.empty()) {
    std::vector<std::string> problems;
    for (const std::string& id : wanted) problems.push_back(id + ": listed in split but not in corpus");
    throw CorpusError(std::move(problems));
  }
  return out;
}

// ---------------------------------------------------------------------------
// External parser adapter.
//
// Request: one sentence per line on stdin. Response: one line per input line,
// `[::alignments <entries>\t]<PENMAN graph>`. Non-zero exit fails the batch.

struct ExternalTool {
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
  std::size_t jobs = 1;
};

struct ToolError {
  std::string document_id;
  std::optional<std::size_t> sentence_index;
  bool summary = false;
  std::string message;

  std::string describe() const {
    std::string out = document_id;
    if (sentence_index) {
      out += summary ? ": summary sentence " : ": story sentence ";
      out += std::to_string(*sentence_index);
    }
    return out + ": " + message;
  }
};

struct ParseOutcome {
  Corpus corpus;
  std::vector<ToolError> errors;
};

namespace internal {

inline std::string FirstLine(std::string_view s) {
  return std::string(Trim(s.substr(0, s.find('\n'))));
}

inline std::string DescribeFailure(const ProcessResult& r) {
  if (r.timed_out) return "timed out";
  std::string msg = "exited with code " + std::to_string(r.exit_code);
  if (std::string e = FirstLine(r.err); !e.empty()) msg += ": " + e;
  return msg;
}

// Parses one response line into `s`.
inline void ApplyParserLine(std::string_view line, AlignedSentence& s) {
  std::vector<Alignment> alignments;
  static constexpr std::string_view kPrefix = "::alignments ";
  if (line.substr(0, kPrefix.size()) == kPrefix) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw std::runtime_error("alignment prefix without a tab separator");
    }
    alignments = parse_alignments(line.substr(kPrefix.size(), tab - kPrefix.size()));
    line.remove_prefix(tab + 1);
  }
  AlignedSentence parsed{s.tokens, parse_penman(line), std::move(alignments)};
  parsed.validate();
  s = std::move(parsed);
}

}  // namespace internal

// Fills every graph-less story sentence (and summary sentence when
// `include_summaries`) by running the external parser once per document.
// Existing graphs are never replaced. Failures are reported per sentence.
inline ParseOutcome parse_with_external(const Corpus& corpus, const ExternalTool& tool,
                                        bool include_summaries = false) {
  ParseOutcome outcome;
  outcome.corpus = corpus;
  std::vector<std::vector<ToolError>> errors(corpus.documents.size());
  parallel_for(corpus.documents.size(), tool.jobs, [&](std::size_t di) {
    Document& d = outcome.corpus.documents[di];
    struct Slot {
      AlignedSentence* sentence;
      std::size_t index;
      bool summary;
    };
    std::vector<Slot> batch;
    for (std::size_t k = 0; k < d.story.size(); ++k) {
      if (!d.story[k].graph) batch.push_back({&d.story[k], k, false});
    }
    if (include_summaries) {
      for (std::size_t k = 0; k < d.summary.size(); ++k) {
        if (!d.summary[k].graph) batch.push_back({&d.summary[k], k, true});
      }
    }
    if (batch.empty()) return;
    std::string request;
    for (const Slot& s : batch) request += s.sentence->text() + "\n";
    auto fail_all = [&](const std::string& msg) {
      for (const Slot& s : batch) errors[di].push_back({d.id, s.index, s.summary, msg});
    };
    ProcessResult r;
    try {
      r = run_process(tool.command, request, tool.timeout);
    } catch (const std::exception& e) {
      fail_all(std::string("cannot run parser: ") + e.what());
      d.refresh_parse_state();
      return;
    }
    if (!r.ok()) {
      fail_all("parser " + internal::DescribeFailure(r));
    } else if (std::vector<std::string> lines = split_lines(r.out); lines.size() != batch.size()) {
      fail_all("protocol violation: expected " + std::to_string(batch.size()) +
               " response lines, got " + std::to_string(lines.size()));
    } else {
      for (std::size_t k = 0; k < batch.size(); ++k) {
        try {
          internal::ApplyParserLine(lines[k], *batch[k].sentence);
        } catch (const std::exception& e) {
          errors[di].push_back({d.id, batch[k].index, batch[k].summary, e.what()});
        }
      }
    }
    d.refresh_parse_state();
  });
  for (auto& e : errors) {
    outcome.errors.insert(outcome.errors.end(), e.begin(), e.end());
  }
  return outcome;
}

}  // namespace amrsum
