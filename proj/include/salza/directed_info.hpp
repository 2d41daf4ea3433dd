#pragma once

#include <set>
#include <string>
#include <vector>

#include "salza/complexity.hpp"
#include "salza/parallel.hpp"

namespace salza {

/// Labeled, ordered collection of non-empty strings.
struct StringSet {
  std::vector<std::string> labels;
  std::vector<ByteString> items;

  std::size_t size() const { return items.size(); }

  void add(std::string label, ByteString bytes) {
    labels.push_back(std::move(label));
    items.push_back(std::move(bytes));
  }

  void validate() const {
    if (labels.size() != items.size()) throw Error("label count does not match item count");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].empty()) throw Error("empty input: " + labels[i]);
      if (!seen.insert(labels[i]).second) throw Error("duplicate label: " + labels[i]);
    }
  }
};

enum class DirectedInfoKind { Causal, Full };

inline constexpr double kDefaultEdgeThreshold = 5e-3;

struct DirectedInfoMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // values[i][j]: information flowing i -> j
  DirectedInfoKind kind = DirectedInfoKind::Causal;
  double threshold = kDefaultEdgeThreshold;
};

namespace detail {

inline ConditioningMode modeFor(DirectedInfoKind kind) {
  return kind == DirectedInfoKind::Causal ? ConditioningMode::PastOfBoth : ConditioningMode::PastOfYAllOfX;
}

/// S(x_j | X minus x_j and minus `excluded`), with x_j's own past always available.
inline double conditionedOnRest(const StringSet& set, std::size_t j, std::size_t excluded,
                                DirectedInfoKind kind, const AdmissibleFunction& f) {
  ConditioningContext ctx{{}, modeFor(kind)};
  for (std::size_t k = 0; k < set.size(); ++k)
    if (k != j && k != excluded) ctx.sources.push_back(view(set.items[k]));
  return conditionalComplexity(view(set.items[j]), ctx, f).value;
}

inline void checkPair(const StringSet& set, std::size_t i, std::size_t j) {
  if (set.size() < 2) throw Error("directed information needs at least two strings");
  if (i >= set.size() || j >= set.size()) throw Error("string index out of range");
  if (i == j) throw Error("directed information is undefined for i == j");
}

}  // namespace detail

/// Complexity drop of x_j when x_i joins the conditioning set.
inline double directedInfo(const StringSet& set, std::size_t i, std::size_t j, DirectedInfoKind kind,
                           const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  detail::checkPair(set, i, j);
  return detail::conditionedOnRest(set, j, i, kind, f) - detail::conditionedOnRest(set, j, j, kind, f);
}

/// Online variant: every conditioning string is limited to its aligned past.
inline double causalDirectedInfo(const StringSet& set, std::size_t i, std::size_t j,
                                 const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  return directedInfo(set, i, j, DirectedInfoKind::Causal, f);
}

/// Offline variant: conditioning strings are available in full.
inline double fullDirectedInfo(const StringSet& set, std::size_t i, std::size_t j,
                               const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  return directedInfo(set, i, j, DirectedInfoKind::Full, f);
}

inline DirectedInfoMatrix directedInfoMatrix(const StringSet& set, DirectedInfoKind kind,
                                             const AdmissibleFunction& f = AdmissibleFunction::sigmoid(),
                                             std::size_t threads = 1) {
  set.validate();
  const std::size_t n = set.size();
  if (n < 2) throw Error("directed information needs at least two strings");

  // The "everything else" term only depends on the target string.
  std::vector<double> baseline(n);
  parallelFor(n, threads, [&](std::size_t j) { baseline[j] = detail::conditionedOnRest(set, j, j, kind, f); });

  DirectedInfoMatrix m;
  m.labels = set.labels;
  m.kind = kind;
  m.values.assign(n, std::vector<double>(n, 0.0));
  parallelFor(n * n, threads, [&](std::size_t cell) {
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    if (i == j) return;
    m.values[i][j] = detail::conditionedOnRest(set, j, i, kind, f) - baseline[j];
  });
  return m;
}

struct DirectedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

struct DirectedGraph {
  std::vector<std::string> labels;
  std::vector<DirectedEdge> edges;
  bool cyclic = false;
};

inline bool hasCycle(std::size_t nodeCount, const std::vector<DirectedEdge>& edges) {
  std::vector<std::size_t> indegree(nodeCount, 0);
  std::vector<std::vector<std::size_t>> out(nodeCount);
  for (const auto& e : edges) {
    out[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < nodeCount; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto v = ready.back();
    ready.pop_back();
    ++visited;
    for (auto w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return visited != nodeCount;
}

/// Keeps edge i -> j iff m[i][j] >= threshold. Cycles are reported through
/// the warning handler and flagged on the result.
inline DirectedGraph extractDag(const DirectedInfoMatrix& m, double threshold) {
  if (!(threshold >= 0.0)) throw Error("threshold must be nonnegative");
  DirectedGraph g;
  g.labels = m.labels;
  const std::size_t n = m.values.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m.values[i][j] >= threshold) g.edges.push_back({i, j, m.values[i][j]});
  g.cyclic = hasCycle(n, g.edges);
  if (g.cyclic) warn("extracted causality graph contains a cycle");
  return g;
}

}  // namespace salza
