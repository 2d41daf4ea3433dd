#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "salza/admissible.hpp"
#include "salza/lz.hpp"

namespace salza {

/// l0 = log_{|A_R|} |R|. A unary alphabet makes every repeat trivial, so the
/// cutoff degenerates to |R| itself.
inline double meaningfulCutoff(std::size_t regionLength, std::size_t alphabetSize) {
  if (regionLength == 0) throw Error("empty conditioning context");
  if (alphabetSize < 2) return static_cast<double>(regionLength);
  return std::log(static_cast<double>(regionLength)) / std::log(static_cast<double>(alphabetSize));
}

/// Cutoff for the regions `context` permits once the whole target has been
/// scanned (past regions taken at t = |target|).
inline double meaningfulCutoff(ByteView target, const ConditioningContext& context) {
  std::size_t total = 0;
  Alphabet alphabet;
  if (context.includesTargetPast()) {
    total += target.size();
    alphabet.add(target);
  }
  for (auto s : context.sources) {
    const auto region = context.sourcesArePast() ? s.first(std::min(s.size(), target.size())) : s;
    total += region.size();
    alphabet.add(region);
  }
  return meaningfulCutoff(total, alphabet.size());
}

/// value = spread * size, with spread the share of the target left
/// unexplained by weighted copies and size the normalized symbol count.
struct ConditionalEstimate {
  double value = 0.0;
  double spread = 0.0;
  double size = 0.0;
};

/// Evaluates the estimator on a multiset of symbol lengths summing to `targetLength`.
inline ConditionalEstimate estimateFromLengths(std::span<const std::size_t> lengths,
                                               std::size_t targetLength, const AdmissibleFunction& f) {
  if (targetLength == 0 || lengths.empty()) throw Error("empty input");
  // sum l f(l) - (|L|_f - 1) == sum f(l)(l - 1) + 1
  double weighted = 0.0;
  for (auto l : lengths) weighted += f(l) * static_cast<double>(l - 1);
  const double n = static_cast<double>(targetLength);
  ConditionalEstimate e;
  e.spread = 1.0 - (weighted + 1.0) / n;
  e.size = static_cast<double>(lengths.size() - 1) / n;
  e.value = e.spread * e.size;
  return e;
}

inline AdmissibleFunction resolveFunction(const AdmissibleFunction& f, ByteView target,
                                          const ConditioningContext& context) {
  return f.needsCutoff() ? f.bound(meaningfulCutoff(target, context)) : f;
}

inline ConditionalEstimate conditionalComplexity(ByteView target, const ConditioningContext& context,
                                                 const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  const auto factorization = factorize(target, context);
  const auto lengths = referenceLengths(factorization);
  return estimateFromLengths(lengths, target.size(), resolveFunction(f, target, context));
}

/// Complexity of x against its own past (plain LZ77 self-factorization).
inline ConditionalEstimate simpleComplexity(ByteView x,
                                            const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  return conditionalComplexity(x, ownPastContext(), f);
}

/// S(x, y) = S(y | past of y, all of x) + S(x) + log_{|A_x|}(|x| / |y|).
inline double jointComplexity(ByteView x, ByteView y,
                              const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  if (x.empty() || y.empty()) throw Error("empty input");
  const auto base = Alphabet(x).size();
  if (base < 2) throw Error("undefined log base");
  const ConditioningContext ctx{{x}, ConditioningMode::PastOfYAllOfX};
  const double conditional = conditionalComplexity(y, ctx, f).value;
  const double ratio = std::log(static_cast<double>(x.size()) / static_cast<double>(y.size())) /
                       std::log(static_cast<double>(base));
  return conditional + simpleComplexity(x, f).value + ratio;
}

/// Normalized semi-distance: max of the two Ziv-Merhav conditional
/// estimates. An auto function is bound separately for each direction.
inline double nsd(ByteView x, ByteView y, const AdmissibleFunction& f = AdmissibleFunction::sigmoid()) {
  if (x.empty() || y.empty()) throw Error("empty input");
  if (x.size() < kMinMatchLength || y.size() < kMinMatchLength)
    warn("semi-distance on strings shorter than 3 bytes is the all-literal value");
  const double xy = conditionalComplexity(x, {{y}, ConditioningMode::AllOfX}, f).value;
  const double yx = conditionalComplexity(y, {{x}, ConditioningMode::AllOfX}, f).value;
  return std::max(xy, yx);
}

}  // namespace salza
