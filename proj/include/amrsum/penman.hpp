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

#include <cctype>
#include <charconv>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrsum/amr_graph.hpp"

namespace amrsum {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace internal {

// True for tokens std::from_chars accepts in full as a floating value.
inline bool IsNumber(std::string_view s) {
  const std::size_t lead = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  const std::size_t first_digit = s.size() > lead && s[lead] == '.' ? lead + 1 : lead;
  if (s.size() <= first_digit || !std::isdigit(static_cast<unsigned char>(s[first_digit]))) {
    return false;
  }
  const char* first = s.data();
  if (*first == '+') ++first;
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class PenmanReader {
 public:
  explicit PenmanReader(std::string_view text) : text_(text) {}

  AmrGraph Read() {
    SkipSpace();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty input");
    if (text_[pos_] != '(') throw ParseError(pos_, "expected '('");
    root_ = ReadNode();
    SkipSpace();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError(pos_, "unbalanced parentheses: unexpected ')'");
      throw ParseError(pos_, "unexpected text after graph");
    }
    ResolveAtoms();
    try {
      return AmrGraph(root_, std::move(nodes_), std::move(edges_));
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
  }

 private:
  struct PendingAtom {
    std::size_t edge;
    std::size_t offset;
    std::string token;
  };

  static bool IsDelimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '/' ||
           c == '"';
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string ReadAtom(const char* what) {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !IsDelimiter(text_[pos_])) ++pos_;
    if (pos_ == start) {
      if (pos_ >= text_.size()) throw ParseError(pos_, std::string("unbalanced parentheses: expected ") + what);
      throw ParseError(pos_, std::string("expected ") + what);
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string ReadString() {
    const std::size_t start = pos_;
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) throw ParseError(start, "unterminated string constant");
    ++pos_;
    return out;
  }

  // Reads `(var / concept :role target ...)` and returns var.
  std::string ReadNode() {
    const std::size_t open = pos_;
    if (++depth_ > kMaxDepth) throw ParseError(open, "nesting deeper than " + std::to_string(kMaxDepth));
    ++pos_;
    const std::size_t var_offset = (SkipSpace(), pos_);
    std::string var = ReadAtom("variable");
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '/') {
      if (pos_ >= text_.size()) throw ParseError(open, "unbalanced parentheses");
      throw ParseError(pos_, "missing '/' after variable '" + var + "'");
    }
    ++pos_;
    std::string concept_label = ReadAtom("concept");
    if (!nodes_.emplace(var, concept_label).second) {
      throw ParseError(var_offset, "duplicate definition of variable '" + var + "'");
    }
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) throw ParseError(open, "unbalanced parentheses");
      if (text_[pos_] == ')') {
        ++pos_;
        --depth_;
        return var;
      }
      const std::size_t role_offset = pos_;
      if (text_[pos_] != ':') {
        throw ParseError(role_offset, "role must start with ':'");
      }
      std::string role = ReadAtom("role");
      if (role.size() < 2) throw ParseError(role_offset, "empty role name");
      SkipSpace();
      if (pos_ >= text_.size()) throw ParseError(open, "unbalanced parentheses");
      const char c = text_[pos_];
      if (c == '(') {
        const std::size_t index = edges_.size();
        edges_.push_back(Edge{var, role, Variable{}, true});
        std::string child = ReadNode();
        edges_[index].target = Variable{std::move(child)};
      } else if (c == '"') {
        edges_.push_back(Edge{var, role, Constant{Constant::Kind::kString, ReadString()}, false});
      } else if (c == ')') {
        throw ParseError(pos_, "role '" + role + "' has no target");
      } else {
        const std::size_t atom_offset = pos_;
        std::string atom = ReadAtom("role target");
        if (atom.front() == ':') throw ParseError(atom_offset, "role '" + role + "' has no target");
        pending_.push_back({edges_.size(), atom_offset, atom});
        edges_.push_back(Edge{var, role, Variable{}, false});
      }
    }
  }

  // Bare tokens: defined variables become re-entrancies, numbers are numeric
  // constants, and the polarity / mode atoms are symbols. Anything else is a
  // reference to an undefined variable.
  void ResolveAtoms() {
    for (const PendingAtom& p : pending_) {
      Edge& e = edges_[p.edge];
      if (nodes_.count(p.token)) {
        e.target = Variable{p.token};
      } else if (IsNumber(p.token)) {
        e.target = Constant{Constant::Kind::kNumber, p.token};
      } else if (p.token == "-" || p.token == "+" || e.role == ":mode") {
        e.target = Constant{Constant::Kind::kSymbol, p.token};
      } else {
        throw ParseError(p.offset, "reference to undefined variable '" + p.token + "'");
      }
    }
  }

  static constexpr std::size_t kMaxDepth = 512;

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::string root_;
  AmrGraph::NodeMap nodes_;
  std::vector<Edge> edges_;
  std::vector<PendingAtom> pending_;
};

inline void AppendConstant(std::string& out, const Constant& c) {
  if (c.kind != Constant::Kind::kString) {
    out += c.text;
    return;
  }
  out += '"';
  for (char ch : c.text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
}

inline void AppendNode(const AmrGraph& g, const std::string& var, bool pretty, std::size_t depth,
                       std::string& out) {
  out += '(';
  out += var;
  out += " / ";
  out += g.concept_of(var);
  for (std::size_t i : g.out_edges(var)) {
    const Edge& e = g.edges()[i];
    if (pretty) {
      out += '\n';
      out.append(6 * (depth + 1), ' ');
    } else {
      out += ' ';
    }
    out += e.role;
    out += ' ';
    if (e.tree) {
      AppendNode(g, *e.target_variable(), pretty, depth + 1, out);
    } else if (const std::string* v = e.target_variable()) {
      out += *v;
    } else {
      AppendConstant(out, *e.target_constant());
    }
  }
  out += ')';
}

}  // namespace internal

// Parses one PENMAN expression. Variables may be mentioned before their
// defining instance; the instance's nesting position decides the tree edge.
inline AmrGraph parse_penman(std::string_view text) {
  return internal::PenmanReader(text).Read();
}

// Canonical form is a single line with one space between tokens. `pretty`
// breaks lines before each role and indents by nesting depth.
inline std::string serialize_penman(const AmrGraph& g, bool pretty = false) {
  std::string out;
  internal::AppendNode(g, g.root(), pretty, 0, out);
  return out;
}

}  // namespace amrsum
