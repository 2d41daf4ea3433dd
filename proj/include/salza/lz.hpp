#pragma once

// Longest-match Lempel-Ziv factorization of a target string against a set of
// reference regions. Four conditioning modes decide which regions may be
// referenced from lookahead position t of the target:
//
//   PastOfX        source[0][0, min(t, |source[0]|))
//   AllOfX         every source in full
//   PastOfBoth     target[0, t) plus source_i[0, min(t, |source_i|))
//   PastOfYAllOfX  target[0, t) plus every source in full
//
// "X" names the conditioning string(s), "Y" the string being factorized.
// Copies from the target's own past may overlap the lookahead (LZ77 style);
// copies from a source must lie inside its permitted region and inside a
// single source.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "salza/bytes.hpp"

namespace salza {

enum class ConditioningMode { PastOfX, AllOfX, PastOfBoth, PastOfYAllOfX };

inline std::string_view modeName(ConditioningMode mode) {
  switch (mode) {
    case ConditioningMode::PastOfX: return "past-of-x";
    case ConditioningMode::AllOfX: return "all-of-x";
    case ConditioningMode::PastOfBoth: return "past-of-both";
    case ConditioningMode::PastOfYAllOfX: return "past-of-y-all-of-x";
  }
  return "?";
}

inline ConditioningMode parseMode(std::string_view name) {
  for (auto m : {ConditioningMode::PastOfX, ConditioningMode::AllOfX, ConditioningMode::PastOfBoth,
                 ConditioningMode::PastOfYAllOfX}) {
    if (modeName(m) == name) return m;
  }
  throw Error("unknown conditioning mode: " + std::string(name));
}

/// Reference regions for a factorization. Sources are non-owning views; the
/// caller keeps the bytes alive for the duration of the call.
struct ConditioningContext {
  std::vector<ByteView> sources;
  ConditioningMode mode = ConditioningMode::AllOfX;

  bool includesTargetPast() const {
    return mode == ConditioningMode::PastOfBoth || mode == ConditioningMode::PastOfYAllOfX;
  }
  bool sourcesArePast() const {
    return mode == ConditioningMode::PastOfX || mode == ConditioningMode::PastOfBoth;
  }
};

/// Context in which only the target's own past may be referenced (plain LZ77).
inline ConditioningContext ownPastContext() { return {{}, ConditioningMode::PastOfBoth}; }

inline constexpr std::size_t kMinMatchLength = 3;
inline constexpr int kSelfRegion = -1;

struct Offset {
  int source = kSelfRegion;  // kSelfRegion or index into ConditioningContext::sources
  std::size_t position = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// One factorizer output. length == 1 is a literal carrying `literal`;
/// length >= kMinMatchLength is a copy starting at `offset`.
struct Symbol {
  std::size_t length = 1;
  std::uint8_t literal = 0;
  Offset offset{};

  bool isLiteral() const { return length == 1; }

  static Symbol makeLiteral(std::uint8_t byte) { return {1, byte, {}}; }
  static Symbol makeReference(std::size_t length, Offset offset) { return {length, 0, offset}; }

  friend bool operator==(const Symbol& a, const Symbol& b) {
    if (a.length != b.length) return false;
    return a.isLiteral() ? a.literal == b.literal : a.offset == b.offset;
  }
};

struct Factorization {
  std::vector<Symbol> symbols;
  std::size_t targetLength = 0;
  ConditioningMode mode = ConditioningMode::AllOfX;
  std::size_t sourceCount = 0;
};

namespace detail {

inline void validateContext(ByteView target, const ConditioningContext& context) {
  if (target.empty()) throw Error("empty input");
  if (context.mode == ConditioningMode::PastOfX && context.sources.size() > 1)
    throw Error("mode expects single source");
  for (auto s : context.sources)
    if (s.empty()) throw Error("empty input");
  if (target.size() >= std::numeric_limits<std::uint32_t>::max())
    throw Error("input too large");
  for (auto s : context.sources)
    if (s.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error("input too large");
}

/// Hash-chain dictionary over one region, keyed by 3-byte prefixes. Chains
/// are kept oldest-first so that candidates are visited in increasing
/// position order; positions are inserted incrementally as the region grows.
class ChainIndex {
 public:
  static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

  explicit ChainIndex(ByteView data)
      : data_(data),
        bits_(std::clamp<unsigned>(std::bit_width(data.size()), 8u, 22u)),
        head_(std::size_t{1} << bits_, kNil),
        tail_(std::size_t{1} << bits_, kNil),
        next_(data.size(), kNil) {}

  /// Inserts every position p with p + kMinMatchLength <= end and p < limit.
  void insertUpTo(std::size_t end, std::size_t limit) {
    const std::size_t hashable =
        data_.size() >= kMinMatchLength ? data_.size() - kMinMatchLength + 1 : 0;
    const std::size_t stop = std::min({end >= kMinMatchLength ? end - kMinMatchLength + 1 : 0,
                                       hashable, limit});
    for (; inserted_ < stop; ++inserted_) {
      const auto h = hash(&data_[inserted_]);
      const auto pos = static_cast<std::uint32_t>(inserted_);
      if (tail_[h] == kNil) {
        head_[h] = pos;
      } else {
        next_[tail_[h]] = pos;
      }
      tail_[h] = pos;
    }
  }

  std::uint32_t first(const std::uint8_t* key) const { return head_[hash(key)]; }
  std::uint32_t next(std::uint32_t pos) const { return next_[pos]; }
  ByteView data() const { return data_; }

 private:
  std::uint32_t hash(const std::uint8_t* p) const {
    const std::uint32_t key = (std::uint32_t{p[0]} << 16) | (std::uint32_t{p[1]} << 8) | p[2];
    return (key * 2654435761u) >> (32 - bits_);
  }

  ByteView data_;
  unsigned bits_;
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> tail_;
  std::vector<std::uint32_t> next_;
  std::size_t inserted_ = 0;
};

struct Match {
  std::size_t length = 0;
  Offset offset{};
};

}  // namespace detail

/// Greedy longest-match factorization. Ties between equal-length matches go
/// to the target's own past, then to sources in list order, then to the
/// smallest start position.
inline Factorization factorize(ByteView target, const ConditioningContext& context) {
  detail::validateContext(target, context);

  const std::size_t n = target.size();
  const bool selfPast = context.includesTargetPast();
  const bool pastSources = context.sourcesArePast();

  std::vector<detail::ChainIndex> sourceIndex;
  sourceIndex.reserve(context.sources.size());
  for (auto s : context.sources) {
    sourceIndex.emplace_back(s);
    if (!pastSources) sourceIndex.back().insertUpTo(s.size(), s.size());
  }
  detail::ChainIndex selfIndex(selfPast ? target : ByteView{});

  Factorization out;
  out.targetLength = n;
  out.mode = context.mode;
  out.sourceCount = context.sources.size();

  std::size_t t = 0;
  while (t < n) {
    const std::size_t remaining = n - t;
    detail::Match best;
    best.length = kMinMatchLength - 1;

    if (remaining >= kMinMatchLength) {
      const std::uint8_t* look = &target[t];

      if (selfPast) {
        // Overlapping copies are allowed: the hashed prefix may run past t.
        selfIndex.insertUpTo(n, t);
        for (auto p = selfIndex.first(look); p != detail::ChainIndex::kNil && best.length < remaining;
             p = selfIndex.next(p)) {
          if (target[p + best.length] != look[best.length]) continue;
          std::size_t len = 0;
          while (len < remaining && target[p + len] == look[len]) ++len;
          if (len > best.length) best = {len, {kSelfRegion, p}};
        }
      }

      for (std::size_t s = 0; s < sourceIndex.size() && best.length < remaining; ++s) {
        auto& index = sourceIndex[s];
        const ByteView src = index.data();
        const std::size_t limit = pastSources ? std::min(t, src.size()) : src.size();
        if (pastSources) index.insertUpTo(limit, limit);
        for (auto p = index.first(look); p != detail::ChainIndex::kNil; p = index.next(p)) {
          const std::size_t maxLen = std::min(remaining, limit - p);
          // Candidates come in increasing position order, so reach only shrinks.
          if (maxLen <= best.length) break;
          if (src[p + best.length] != look[best.length]) continue;
          std::size_t len = 0;
          while (len < maxLen && src[p + len] == look[len]) ++len;
          if (len > best.length) best = {len, {static_cast<int>(s), p}};
        }
      }
    }

    if (best.length >= kMinMatchLength) {
      out.symbols.push_back(Symbol::makeReference(best.length, best.offset));
      t += best.length;
    } else {
      out.symbols.push_back(Symbol::makeLiteral(target[t]));
      ++t;
    }
  }
  return out;
}

/// Rebuilds the target from its factorization, checking that every copy
/// stays inside the region the mode permits.
inline ByteString decode(const Factorization& f, const ConditioningContext& context) {
  if (f.mode != context.mode || f.sourceCount != context.sources.size())
    throw Error("corrupt factorization");
  ByteString out;
  out.reserve(f.targetLength);
  for (const auto& sym : f.symbols) {
    const std::size_t t = out.size();
    if (sym.length == 0) throw Error("corrupt factorization");
    if (sym.isLiteral()) {
      out.push_back(sym.literal);
      continue;
    }
    if (sym.length < kMinMatchLength) throw Error("corrupt factorization");
    const auto& off = sym.offset;
    if (off.source == kSelfRegion) {
      if (!context.includesTargetPast() || off.position >= t) throw Error("corrupt factorization");
      for (std::size_t k = 0; k < sym.length; ++k) out.push_back(out[off.position + k]);
    } else {
      if (off.source < 0 || static_cast<std::size_t>(off.source) >= context.sources.size())
        throw Error("corrupt factorization");
      const ByteView src = context.sources[static_cast<std::size_t>(off.source)];
      const std::size_t limit = context.sourcesArePast() ? std::min(t, src.size()) : src.size();
      if (off.position > limit || sym.length > limit - off.position)
        throw Error("corrupt factorization");
      out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(off.position),
                 src.begin() + static_cast<std::ptrdiff_t>(off.position + sym.length));
    }
  }
  if (out.size() != f.targetLength) throw Error("corrupt factorization");
  return out;
}

/// Lengths of all symbols, literals included.
inline std::vector<std::size_t> referenceLengths(const Factorization& f) {
  std::vector<std::size_t> lengths;
  lengths.reserve(f.symbols.size());
  for (const auto& s : f.symbols) lengths.push_back(s.length);
  return lengths;
}

}  // namespace salza
