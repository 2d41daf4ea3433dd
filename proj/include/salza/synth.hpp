#pragma once

// Seeded generators: first-order Markov sources, DAGs of copying processes,
// and the Poisson symbol-length study of the conditional estimator.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the standard. Distributions are implemented here rather than taken from
// <random>, whose algorithms are implementation-defined, so that a seed gives
// the same bytes on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "salza/admissible.hpp"
#include "salza/complexity.hpp"
#include "salza/directed_info.hpp"

namespace salza {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error("empty range");
    const std::uint64_t reject = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const auto v = engine_();
      if (v >= reject) return v % bound;
    }
  }

  /// Uniform real in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  /// Index drawn with probability proportional to weights[i].
  std::size_t pick(const std::vector<double>& weights) {
    double total = 0.0;
    for (auto w : weights) total += w;
    const double u = unit() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  /// Poisson variate; Knuth's product method on chunks of mean <= 30.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double part = std::min(mean, 30.0);
      mean -= part;
      const double floor = std::exp(-part);
      double prod = unit();
      while (prod > floor) {
        ++total;
        prod *= unit();
      }
    }
    return total;
  }

 private:
  std::mt19937_64 engine_;
};

using Matrix = std::vector<std::vector<double>>;

namespace detail {
inline void checkStochasticRows(const Matrix& m, std::size_t columns, const char* what) {
  for (const auto& row : m) {
    if (row.size() != columns) throw Error(std::string(what) + " has wrong row width");
    double sum = 0.0;
    for (auto p : row) {
      if (!(p >= 0.0) || p > 1.0) throw Error(std::string(what) + " entries must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(std::string(what) + " rows must sum to 1");
  }
}
}  // namespace detail

struct MarkovSpec {
  std::size_t alphabetSize = 2;
  Matrix transition;
  std::size_t length = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (alphabetSize < 2 || alphabetSize > 256) throw Error("markov alphabet size must be in [2, 256]");
    if (length < 1) throw Error("markov length must be positive");
    if (transition.size() != alphabetSize) throw Error("transition matrix must be alphabet x alphabet");
    detail::checkStochasticRows(transition, alphabetSize, "transition matrix");
  }
};

/// Row-stochastic matrix whose rows each put random weight on `support`
/// distinct, randomly chosen successor states.
inline Matrix randomTransitionMatrix(std::size_t alphabetSize, std::size_t support, std::uint64_t seed) {
  if (support < 1 || support > alphabetSize) throw Error("support must be in [1, alphabet]");
  Rng rng(seed);
  Matrix m(alphabetSize, std::vector<double>(alphabetSize, 0.0));
  std::vector<std::size_t> states(alphabetSize);
  for (auto& row : m) {
    for (std::size_t i = 0; i < alphabetSize; ++i) states[i] = i;
    double sum = 0.0;
    for (std::size_t k = 0; k < support; ++k) {
      const auto pick = k + rng.below(alphabetSize - k);
      std::swap(states[k], states[pick]);
      row[states[k]] = 0.05 + rng.unit();
      sum += row[states[k]];
    }
    for (auto& p : row) p /= sum;
  }
  return m;
}

/// Realization of the chain from a uniform initial state; state s is emitted as byte s.
inline ByteString genMarkov(const MarkovSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  ByteString out;
  out.reserve(spec.length);
  auto state = static_cast<std::size_t>(rng.below(spec.alphabetSize));
  out.push_back(static_cast<std::uint8_t>(state));
  while (out.size() < spec.length) {
    state = rng.pick(spec.transition[state]);
    out.push_back(static_cast<std::uint8_t>(state));
  }
  return out;
}

/// N processes; row i of the N x (N + 1) connectivity gives the probability
/// that a step of process i copies from process j (j < N) or emits fresh
/// uniform symbols (j = N).
struct DagSpec {
  Matrix connectivity;
  std::size_t length = 10000;
  std::size_t burnIn = 12;
  double copyScale = 20.0;
  std::size_t alphabetSize = 256;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;

  std::size_t processCount() const { return connectivity.size(); }

  void validate() const {
    const std::size_t n = connectivity.size();
    if (n < 1) throw Error("connectivity matrix is empty");
    detail::checkStochasticRows(connectivity, n + 1, "connectivity matrix");
    if (length < 1) throw Error("process length must be positive");
    if (alphabetSize < 2 || alphabetSize > 256) throw Error("alphabet size must be in [2, 256]");
    if (!(copyScale > 0.0)) throw Error("copy scale must be positive");
    if (!labels.empty() && labels.size() != n) throw Error("label count does not match process count");
    std::vector<DirectedEdge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (connectivity[i][j] > 0.0) edges.push_back({j, i, connectivity[i][j]});
    if (hasCycle(n, edges)) throw Error("connectivity must be acyclic");
  }

  /// Edges j -> i for every M[i][j] > 0: the ground truth a recovery aims at.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = connectivity.size();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (connectivity[i][j] > 0.0) out.emplace_back(j, i);
    return out;
  }

  std::size_t segmentLength(double probability) const {
    return std::max<std::size_t>(kMinMatchLength, static_cast<std::size_t>(std::llround(copyScale * probability)));
  }
};

/// Generates the processes round-robin: every round, each unfinished process
/// appends one segment. A copy from process j starts at a uniform point of
/// the past aligned with the writer's position and lies entirely inside it.
inline StringSet genDagProcesses(const DagSpec& spec) {
  spec.validate();
  const std::size_t n = spec.processCount();
  Rng rng(spec.seed);
  std::vector<ByteString> procs(n);

  auto fresh = [&](ByteString& out, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(static_cast<std::uint8_t>(rng.below(spec.alphabetSize)));
  };

  for (auto& p : procs) {
    p.reserve(spec.length + static_cast<std::size_t>(spec.copyScale) + kMinMatchLength);
    fresh(p, std::min(spec.burnIn, spec.length));
  }

  bool pending = true;
  while (pending) {
    pending = false;
    for (std::size_t i = 0; i < n; ++i) {
      auto& out = procs[i];
      if (out.size() >= spec.length) continue;
      const std::size_t column = rng.pick(spec.connectivity[i]);
      std::size_t len = spec.segmentLength(spec.connectivity[i][column]);
      if (column == n) {
        fresh(out, len);
      } else {
        const std::size_t past = std::min(out.size(), procs[column].size());
        len = std::min(len, past);
        if (len > 0) {
          const auto start = static_cast<std::size_t>(rng.below(past - len + 1));
          const auto& src = procs[column];
          for (std::size_t k = 0; k < len; ++k) out.push_back(src[start + k]);
        }
      }
      if (out.size() > spec.length) out.resize(spec.length);
      pending = pending || out.size() < spec.length;
    }
  }

  StringSet set;
  for (std::size_t i = 0; i < n; ++i)
    set.add(spec.labels.empty() ? "p" + std::to_string(i) : spec.labels[i], std::move(procs[i]));
  return set;
}

struct LengthSimSpec {
  double mu = 4.0;
  double l0 = 2.0;
  std::size_t targetLength = 16384;
  std::size_t trials = 200;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(mu > 0.0)) throw Error("mu must be positive");
    if (!(l0 >= 0.0)) throw Error("l0 must be nonnegative");
    if (trials < 1) throw Error("trials must be positive");
    if (targetLength < 1) throw Error("target length must be positive");
  }
};

/// Trial-averaged terms of the estimator under both admissible functions.
struct LengthProfile {
  double mu = 0.0;
  std::size_t length = 0;
  double l0 = 0.0;
  double size = 0.0;              // Z
  double spreadThreshold = 0.0;   // S under the threshold function
  double valueThreshold = 0.0;    // S * Z under the threshold function
  double spreadSigmoid = 0.0;
  double valueSigmoid = 0.0;
};

/// Draws Poisson(mu) symbol lengths (zeros redrawn) until they cover
/// targetLength, clipping the last one, and averages the estimator terms.
inline LengthProfile simulateLengthProfile(const LengthSimSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto threshold = AdmissibleFunction::threshold(spec.l0);
  const auto sigmoid = AdmissibleFunction::sigmoid(spec.l0);

  LengthProfile p;
  p.mu = spec.mu;
  p.length = spec.targetLength;
  p.l0 = spec.l0;
  std::vector<std::size_t> lengths;
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    lengths.clear();
    std::size_t covered = 0;
    while (covered < spec.targetLength) {
      std::size_t l = 0;
      while (l == 0) l = static_cast<std::size_t>(rng.poisson(spec.mu));
      l = std::min(l, spec.targetLength - covered);
      lengths.push_back(l);
      covered += l;
    }
    const auto t = estimateFromLengths(lengths, spec.targetLength, threshold);
    const auto s = estimateFromLengths(lengths, spec.targetLength, sigmoid);
    p.size += t.size;
    p.spreadThreshold += t.spread;
    p.valueThreshold += t.value;
    p.spreadSigmoid += s.spread;
    p.valueSigmoid += s.value;
  }
  const auto trials = static_cast<double>(spec.trials);
  p.size /= trials;
  p.spreadThreshold /= trials;
  p.valueThreshold /= trials;
  p.spreadSigmoid /= trials;
  p.valueSigmoid /= trials;
  return p;
}

}  // namespace salza
