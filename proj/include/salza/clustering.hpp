#pragma once

// Neighbor-Joining and UPGMA over labeled distance matrices, plus Newick
// serialization and parsing.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "salza/bytes.hpp"

namespace salza {

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> d;

  std::size_t size() const { return labels.size(); }

  void validate(double tolerance = 1e-12) const {
    const std::size_t n = labels.size();
    if (n < 2) throw Error("distance matrix needs at least two items");
    if (d.size() != n) throw Error("distance matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i].size() != n) throw Error("distance matrix is not square");
      if (std::abs(d[i][i]) > tolerance) throw Error("distance matrix diagonal must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(d[i][j]) || d[i][j] < 0.0) throw Error("distance matrix has negative entries");
        if (std::abs(d[i][j] - d[j][i]) > tolerance) throw Error("distance matrix is not symmetric");
      }
    }
  }
};

struct TreeNode {
  std::string label;  // leaves only
  std::vector<std::size_t> children;
  double branchLength = 0.0;  // edge to the parent; unused at the root
  double height = 0.0;        // UPGMA merge height; zero for NJ
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::size_t root = 0;
  bool rooted = false;

  bool isLeaf(std::size_t v) const { return nodes[v].children.empty(); }

  std::vector<std::string> leafLabels() const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
      if (n.children.empty()) out.push_back(n.label);
    return out;
  }
};

namespace detail {

inline Tree leavesOnly(const DistanceMatrix& m) {
  Tree t;
  for (const auto& label : m.labels) t.nodes.push_back({label, {}, 0.0, 0.0});
  return t;
}

inline std::size_t addInternal(Tree& t, std::vector<std::size_t> children) {
  t.nodes.push_back({"", std::move(children), 0.0, 0.0});
  return t.nodes.size() - 1;
}

}  // namespace detail

/// Saitou-Nei neighbor joining. Ties on the Q criterion go to the smallest
/// (i, j) pair of current matrix slots. Branch lengths may be negative.
inline Tree neighborJoining(const DistanceMatrix& m) {
  m.validate();
  Tree tree = detail::leavesOnly(m);
  std::vector<std::size_t> node(m.size());
  for (std::size_t i = 0; i < node.size(); ++i) node[i] = i;
  auto d = m.d;

  if (node.size() == 2) {
    tree.nodes[0].branchLength = tree.nodes[1].branchLength = d[0][1] / 2.0;
    tree.root = detail::addInternal(tree, {0, 1});
    return tree;
  }

  while (node.size() > 3) {
    const std::size_t r = node.size();
    std::vector<double> rowSum(r, 0.0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) rowSum[i] += d[i][k];

    std::size_t bi = 0, bj = 1;
    double bestQ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        const double q = static_cast<double>(r - 2) * d[i][j] - rowSum[i] - rowSum[j];
        if (q < bestQ) {
          bestQ = q;
          bi = i;
          bj = j;
        }
      }
    }

    const double dij = d[bi][bj];
    const double li = dij / 2.0 + (rowSum[bi] - rowSum[bj]) / (2.0 * static_cast<double>(r - 2));
    tree.nodes[node[bi]].branchLength = li;
    tree.nodes[node[bj]].branchLength = dij - li;
    const std::size_t joined = detail::addInternal(tree, {node[bi], node[bj]});

    for (std::size_t k = 0; k < r; ++k) {
      if (k == bi || k == bj) continue;
      d[bi][k] = d[k][bi] = (d[bi][k] + d[bj][k] - dij) / 2.0;
    }
    d[bi][bi] = 0.0;
    node[bi] = joined;
    node.erase(node.begin() + static_cast<std::ptrdiff_t>(bj));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  // Three subtrees left: join them at a central node.
  const double a = (d[0][1] + d[0][2] - d[1][2]) / 2.0;
  const double b = d[0][1] - a;
  const double c = d[0][2] - a;
  tree.nodes[node[0]].branchLength = a;
  tree.nodes[node[1]].branchLength = b;
  tree.nodes[node[2]].branchLength = c;
  tree.root = detail::addInternal(tree, {node[0], node[1], node[2]});
  return tree;
}

/// Average-linkage agglomeration; a merge at distance d sits at height d / 2.
inline Tree upgma(const DistanceMatrix& m) {
  m.validate();
  Tree tree = detail::leavesOnly(m);
  tree.rooted = true;
  std::vector<std::size_t> node(m.size());
  std::vector<double> weight(m.size(), 1.0);
  for (std::size_t i = 0; i < node.size(); ++i) node[i] = i;
  auto d = m.d;

  while (node.size() > 1) {
    const std::size_t r = node.size();
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        if (d[i][j] < best) {
          best = d[i][j];
          bi = i;
          bj = j;
        }

    const double height = std::max({best / 2.0, tree.nodes[node[bi]].height, tree.nodes[node[bj]].height});
    tree.nodes[node[bi]].branchLength = height - tree.nodes[node[bi]].height;
    tree.nodes[node[bj]].branchLength = height - tree.nodes[node[bj]].height;
    const std::size_t joined = detail::addInternal(tree, {node[bi], node[bj]});
    tree.nodes[joined].height = height;

    const double wi = weight[bi], wj = weight[bj];
    for (std::size_t k = 0; k < r; ++k) {
      if (k == bi || k == bj) continue;
      // Incremental form keeps the average exact when both inputs agree.
      d[bi][k] = d[k][bi] = d[bi][k] + wj * (d[bj][k] - d[bi][k]) / (wi + wj);
    }
    weight[bi] = wi + wj;
    node[bi] = joined;
    node.erase(node.begin() + static_cast<std::ptrdiff_t>(bj));
    weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(bj));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  tree.root = node[0];
  return tree;
}

inline std::string formatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string quoteNewickLabel(const std::string& label) {
  const bool plain = !label.empty() && std::none_of(label.begin(), label.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || std::string_view("()[]':;,").find(c) != std::string_view::npos;
  });
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

namespace detail {
inline void writeNewick(const Tree& t, std::size_t v, std::string& out) {
  const auto& n = t.nodes[v];
  if (!n.children.empty()) {
    out += '(';
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      if (k) out += ',';
      writeNewick(t, n.children[k], out);
    }
    out += ')';
  }
  if (n.children.empty() || !n.label.empty()) out += quoteNewickLabel(n.label);
  if (v != t.root) out += ':' + formatReal(n.branchLength);
}
}  // namespace detail

inline std::string toNewick(const Tree& t) {
  std::string out;
  detail::writeNewick(t, t.root, out);
  return out + ';';
}

/// Parses Newick with optional labels, quoted labels, branch lengths and
/// bracketed comments.
inline Tree parseNewick(std::string_view text) {
  Tree tree;
  std::size_t pos = 0;

  auto fail = [&](const std::string& what) -> Error {
    return Error("newick parse error at offset " + std::to_string(pos) + ": " + what);
  };
  auto skip = [&] {
    for (;;) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == '[') {
        const auto close = text.find(']', pos);
        if (close == std::string_view::npos) throw fail("unterminated comment");
        pos = close + 1;
        continue;
      }
      return;
    }
  };
  auto label = [&]() -> std::string {
    skip();
    std::string out;
    if (pos < text.size() && text[pos] == '\'') {
      ++pos;
      for (;;) {
        if (pos >= text.size()) throw fail("unterminated quoted label");
        if (text[pos] == '\'') {
          if (pos + 1 < text.size() && text[pos + 1] == '\'') {
            out += '\'';
            pos += 2;
            continue;
          }
          ++pos;
          break;
        }
        out += text[pos++];
      }
      return out;
    }
    while (pos < text.size() && std::string_view("()[]':;,").find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      out += text[pos++];
    return out;
  };
  auto length = [&]() -> double {
    skip();
    if (pos >= text.size() || text[pos] != ':') return 0.0;
    ++pos;
    skip();
    const std::string s(text.substr(pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw fail("bad branch length");
    }
    pos += used;
    return v;
  };

  auto subtree = [&](auto&& self) -> std::size_t {
    skip();
    std::vector<std::size_t> children;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      for (;;) {
        const auto child = self(self);
        tree.nodes[child].branchLength = length();
        children.push_back(child);
        skip();
        if (pos >= text.size()) throw fail("unexpected end");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        throw fail("expected ',' or ')'");
      }
    }
    auto name = label();
    if (children.empty() && name.empty()) throw fail("empty leaf");
    tree.nodes.push_back({std::move(name), std::move(children), 0.0, 0.0});
    return tree.nodes.size() - 1;
  };

  tree.root = subtree(subtree);
  length();
  skip();
  if (pos >= text.size() || text[pos] != ';') throw fail("expected ';'");
  ++pos;
  skip();
  if (pos != text.size()) throw fail("trailing characters");
  return tree;
}

/// Non-trivial bipartitions of the leaf set, one per internal edge. Each is
/// given as the side that does not contain the lexicographically smallest
/// label, so two unrooted trees share a topology iff their split sets match.
inline std::set<std::set<std::string>> splits(const Tree& t) {
  const auto labels = t.leafLabels();
  const std::set<std::string> all(labels.begin(), labels.end());
  if (all.empty()) return {};
  const std::string& anchor = *all.begin();

  std::set<std::set<std::string>> out;
  auto below = [&](auto&& self, std::size_t v) -> std::set<std::string> {
    if (t.isLeaf(v)) return {t.nodes[v].label};
    std::set<std::string> acc;
    for (auto c : t.nodes[v].children) {
      auto sub = self(self, c);
      if (sub.size() > 1 && sub.size() + 1 < all.size()) {
        if (sub.count(anchor)) {
          std::set<std::string> complement;
          std::set_difference(all.begin(), all.end(), sub.begin(), sub.end(),
                              std::inserter(complement, complement.end()));
          out.insert(complement);
        } else {
          out.insert(sub);
        }
      }
      acc.insert(sub.begin(), sub.end());
    }
    return acc;
  };
  below(below, t.root);
  return out;
}

/// True iff `group` is separated from the other leaves by a single edge.
inline bool isClade(const Tree& t, const std::set<std::string>& group) {
  const auto labels = t.leafLabels();
  const std::set<std::string> all(labels.begin(), labels.end());
  if (group.size() <= 1 || group.size() + 1 >= all.size()) return true;
  std::set<std::string> complement;
  std::set_difference(all.begin(), all.end(), group.begin(), group.end(),
                      std::inserter(complement, complement.end()));
  const auto s = splits(t);
  return s.count(group) > 0 || s.count(complement) > 0;
}

/// Indented console rendering, one node per line.
inline void renderAscii(const Tree& t, std::ostream& os) {
  auto walk = [&](auto&& self, std::size_t v, const std::string& prefix, bool last, bool top) -> void {
    const auto& n = t.nodes[v];
    os << prefix;
    if (!top) os << (last ? "`-- " : "|-- ");
    os << (n.children.empty() ? n.label : std::string("+"));
    if (!top) os << " (" << formatReal(n.branchLength) << ")";
    os << '\n';
    const std::string childPrefix = top ? "" : prefix + (last ? "    " : "|   ");
    for (std::size_t k = 0; k < n.children.size(); ++k)
      self(self, n.children[k], childPrefix, k + 1 == n.children.size(), false);
  };
  walk(walk, t.root, "", true, true);
}

}  // namespace salza
