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
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace amrsum {

// A reference to a graph variable (node) as an edge target.
struct Variable {
  std::string id;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

// A leaf value as an edge target. Constants are not nodes.
struct Constant {
  enum class Kind { kString, kNumber, kSymbol };

  Kind kind = Kind::kString;
  // Unquoted, unescaped text for strings; the literal token otherwise.
  std::string text;

  friend auto operator<=>(const Constant&, const Constant&) = default;
};

using Target = std::variant<Variable, Constant>;

struct Edge {
  std::string source;
  std::string role;  // always begins with ':'
  Target target;
  // True when this edge carries the defining (nested) occurrence of its
  // target variable, i.e. it belongs to the spanning tree.
  bool tree = false;

  const std::string* target_variable() const {
    const auto* v = std::get_if<Variable>(&target);
    return v ? &v->id : nullptr;
  }
  const Constant* target_constant() const {
    return std::get_if<Constant>(&target);
  }
  bool is_reentrant() const { return !tree && target_variable() != nullptr; }
  bool is_constant() const { return target_constant() != nullptr; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Rooted, directed, labeled graph of concepts. The spanning tree is the
// subset of edges flagged `tree`; remaining variable-targeted edges are
// re-entrancies. Instances are immutable and validated on construction.
class AmrGraph {
 public:
  using NodeMap = std::map<std::string, std::string>;

  // Throws std::invalid_argument when the invariants do not hold.
  AmrGraph(std::string root, NodeMap nodes, std::vector<Edge> edges)
      : root_(std::move(root)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    Index();
  }

  const std::string& root() const { return root_; }
  const NodeMap& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  bool contains(std::string_view var) const {
    return nodes_.find(std::string(var)) != nodes_.end();
  }

  const std::string& concept_of(std::string_view var) const {
    auto it = nodes_.find(std::string(var));
    if (it == nodes_.end()) {
      throw std::out_of_range("unknown variable '" + std::string(var) + "'");
    }
    return it->second;
  }

  std::vector<Edge> tree_edges() const {
    std::vector<Edge> out;
    for (const Edge& e : edges_) {
      if (e.tree) out.push_back(e);
    }
    return out;
  }

  // Indices into edges() of every edge leaving `var`, in stored order.
  const std::vector<std::size_t>& out_edges(std::string_view var) const {
    static const std::vector<std::size_t> kNone;
    auto it = out_.find(std::string(var));
    return it == out_.end() ? kNone : it->second;
  }

  // Tree parent of `var`, or nullopt for the root.
  std::optional<std::string> parent(std::string_view var) const {
    auto it = parent_edge_.find(std::string(var));
    if (it == parent_edge_.end()) {
      if (!contains(var)) {
        throw std::out_of_range("unknown variable '" + std::string(var) + "'");
      }
      return std::nullopt;
    }
    return edges_[it->second].source;
  }

  // Nodes in PENMAN (tree pre-order) order, root first.
  const std::vector<std::string>& preorder() const { return preorder_; }

  // Equality on node map, root and the edge multiset.
  friend bool operator==(const AmrGraph& a, const AmrGraph& b) {
    if (a.root_ != b.root_ || a.nodes_ != b.nodes_ ||
        a.edges_.size() != b.edges_.size()) {
      return false;
    }
    std::vector<Edge> x = a.edges_, y = b.edges_;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  }

 private:
  void Index() {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    // Identifiers must survive a PENMAN round trip as bare tokens.
    auto bare = [](std::string_view s) {
      return !s.empty() && s.front() != ':' &&
             std::none_of(s.begin(), s.end(), [](char c) {
               return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
                      c == '/' || c == '"';
             });
    };
    for (const auto& [var, label] : nodes_) {
      if (!bare(var)) fail("invalid variable id '" + var + "'");
      if (!bare(label)) fail("invalid concept '" + label + "' for '" + var + "'");
    }
    if (!nodes_.count(root_)) fail("root '" + root_ + "' is not a node");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.role.size() < 2 || e.role.front() != ':') {
        fail("role '" + e.role + "' must begin with ':'");
      }
      if (!nodes_.count(e.source)) fail("edge source '" + e.source + "' is not a node");
      if (const std::string* t = e.target_variable()) {
        if (!nodes_.count(*t)) fail("edge target '" + *t + "' is not a node");
        if (e.tree) {
          if (*t == root_) fail("root '" + root_ + "' has a tree parent");
          if (!parent_edge_.emplace(*t, i).second) {
            fail("variable '" + *t + "' has more than one tree parent");
          }
        }
      } else if (e.tree) {
        fail("constant-targeted edge cannot be a tree edge");
      }
      out_[e.source].push_back(i);
    }
    // Walk the tree from the root; every node must be reached exactly once.
    std::set<std::string> seen;
    std::vector<std::string> stack{root_};
    while (!stack.empty()) {
      std::string v = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(v).second) fail("spanning tree revisits '" + v + "'");
      preorder_.push_back(v);
      const auto& kids = out_edges(v);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        const Edge& e = edges_[*it];
        if (e.tree) stack.push_back(*e.target_variable());
      }
    }
    if (seen.size() != nodes_.size()) {
      for (const auto& [var, concept_label] : nodes_) {
        if (!seen.count(var)) fail("node '" + var + "' is not reachable through tree edges");
      }
    }
  }

  std::string root_;
  NodeMap nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, std::vector<std::size_t>> out_;
  std::map<std::string, std::size_t> parent_edge_;
  std::vector<std::string> preorder_;
};

// [v, parent(v), ..., root] along tree edges only.
inline std::vector<std::string> path_to_root(const AmrGraph& g, std::string_view v) {
  std::vector<std::string> path;
  std::optional<std::string> cur = std::string(v);
  g.concept_of(v);  // throws on unknown variable
  while (cur) {
    path.push_back(*cur);
    cur = g.parent(*cur);
  }
  return path;
}

inline std::size_t tree_depth(const AmrGraph& g, std::string_view v) {
  return path_to_root(g, v).size() - 1;
}

// Subgraph of all tree-descendants of `v`. A re-entrant edge is kept only if
// both endpoints lie inside; constant edges follow their source.
inline AmrGraph subtree(const AmrGraph& g, std::string_view v) {
  g.concept_of(v);
  std::set<std::string> keep;
  std::vector<std::string> stack{std::string(v)};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    keep.insert(cur);
    for (std::size_t i : g.out_edges(cur)) {
      const Edge& e = g.edges()[i];
      if (e.tree) stack.push_back(*e.target_variable());
    }
  }
  AmrGraph::NodeMap nodes;
  for (const std::string& var : keep) nodes.emplace(var, g.concept_of(var));
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (!keep.count(e.source)) continue;
    if (const std::string* t = e.target_variable(); t && !keep.count(*t)) continue;
    edges.push_back(e);
  }
  return AmrGraph(std::string(v), std::move(nodes), std::move(edges));
}

// PropBank frame pattern: <lemma>-<two digits>.
inline bool is_verb_concept(std::string_view concept_label) {
  if (concept_label.size() < 4) return false;
  const std::size_t n = concept_label.size();
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  return concept_label[n - 3] == '-' && digit(concept_label[n - 2]) &&
         digit(concept_label[n - 1]);
}

// ---------------------------------------------------------------------------
// Alignments

// Maps the token span [token_start, token_end) to the node addressed by
// node_path: the first element is 0 (the root), each following element is a
// 0-based ordinal among the node's tree and constant children in stored
// order. `edge` marks an alignment to the role edge entering that node.
struct Alignment {
  std::size_t token_start = 0;
  std::size_t token_end = 0;
  std::vector<std::size_t> node_path;
  bool edge = false;

  friend auto operator<=>(const Alignment&, const Alignment&) = default;
};

class AlignmentFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_node_path(const std::vector<std::size_t>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

namespace internal {

inline std::size_t ParseIndex(std::string_view s, std::string_view entry) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      })) {
    throw AlignmentFormatError("bad number in alignment entry '" + std::string(entry) + "'");
  }
  return std::stoul(std::string(s));
}

}  // namespace internal

// Parses space-separated `<start>-<end>|<path>[+<path>...]` entries. A path
// may end in ".r" to denote the incoming role edge.
inline std::vector<Alignment> parse_alignments(std::string_view text) {
  std::vector<Alignment> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view entry = text.substr(pos, end - pos);
    pos = end;

    const std::size_t bar = entry.find('|');
    const std::size_t dash = entry.find('-');
    if (bar == std::string_view::npos || dash == std::string_view::npos || dash > bar) {
      throw AlignmentFormatError("malformed alignment entry '" + std::string(entry) + "'");
    }
    const std::size_t start = internal::ParseIndex(entry.substr(0, dash), entry);
    const std::size_t stop = internal::ParseIndex(entry.substr(dash + 1, bar - dash - 1), entry);
    if (start >= stop) {
      throw AlignmentFormatError("empty token span in '" + std::string(entry) + "'");
    }
    std::string_view paths = entry.substr(bar + 1);
    if (paths.empty()) {
      throw AlignmentFormatError("missing node path in '" + std::string(entry) + "'");
    }
    while (true) {
      const std::size_t plus = paths.find('+');
      std::string_view p = paths.substr(0, plus);
      Alignment a;
      a.token_start = start;
      a.token_end = stop;
      if (p.size() >= 2 && p.substr(p.size() - 2) == ".r") {
        a.edge = true;
        p.remove_suffix(2);
      }
      while (!p.empty()) {
        const std::size_t dot = p.find('.');
        a.node_path.push_back(internal::ParseIndex(p.substr(0, dot), entry));
        if (dot == std::string_view::npos) break;
        p.remove_prefix(dot + 1);
        if (p.empty()) {
          throw AlignmentFormatError("trailing '.' in '" + std::string(entry) + "'");
        }
      }
      if (a.node_path.empty() || a.node_path.front() != 0) {
        throw AlignmentFormatError("node path must start at the root (0) in '" +
                                   std::string(entry) + "'");
      }
      out.push_back(std::move(a));
      if (plus == std::string_view::npos) break;
      paths.remove_prefix(plus + 1);
    }
  }
  return out;
}

inline std::string format_alignments(const std::vector<Alignment>& alignments) {
  std::string out;
  for (const Alignment& a : alignments) {
    if (!out.empty()) out += ' ';
    out += std::to_string(a.token_start) + "-" + std::to_string(a.token_end) + "|" +
           format_node_path(a.node_path);
    if (a.edge) out += ".r";
  }
  return out;
}

// Resolves an alignment to the variable it is credited to. Paths ending on a
// constant, and edge alignments, fold onto the edge's source node. Returns
// nullopt when the path does not address anything in `g`.
inline std::optional<std::string> resolve_alignment(const AmrGraph& g, const Alignment& a) {
  if (a.node_path.empty() || a.node_path.front() != 0) return std::nullopt;
  std::string cur = g.root();
  bool on_constant = false;
  for (std::size_t k = 1; k < a.node_path.size(); ++k) {
    if (on_constant) return std::nullopt;
    std::size_t ordinal = a.node_path[k];
    std::optional<std::size_t> hit;
    for (std::size_t i : g.out_edges(cur)) {
      const Edge& e = g.edges()[i];
      if (e.is_reentrant()) continue;
      if (ordinal == 0) {
        hit = i;
        break;
      }
      --ordinal;
    }
    if (!hit) return std::nullopt;
    const Edge& e = g.edges()[*hit];
    if (e.is_constant()) {
      on_constant = true;  // `cur` stays the constant's source
    } else {
      cur = *e.target_variable();
    }
  }
  if (a.edge && !on_constant) {
    std::optional<std::string> p = g.parent(cur);
    if (!p) return std::nullopt;
    return p;
  }
  return cur;
}

// Surface tokens of one sentence, optionally joined to its graph.
struct AlignedSentence {
  std::vector<std::string> tokens;
  std::optional<AmrGraph> graph;
  std::vector<Alignment> alignments;

  // Throws std::invalid_argument if an alignment is out of token bounds, does
  // not resolve in the graph, or is present without a graph.
  void validate() const {
    if (!graph && !alignments.empty()) {
      throw std::invalid_argument("alignments present without a graph");
    }
    for (const Alignment& a : alignments) {
      if (a.token_start >= a.token_end || a.token_end > tokens.size()) {
        throw std::invalid_argument("alignment span " + std::to_string(a.token_start) + "-" +
                                    std::to_string(a.token_end) + " outside " +
                                    std::to_string(tokens.size()) + " tokens");
      }
      if (!resolve_alignment(*graph, a)) {
        throw std::invalid_argument("alignment path " + format_node_path(a.node_path) +
                                    " does not resolve in the graph");
      }
    }
  }

  std::string text() const {
    std::string out;
    for (const std::string& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }
};

inline std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace amrsum
