#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "salza/lz.hpp"

namespace salza {
namespace {

using testing::naiveFactorize;

std::vector<std::size_t> lengthsOf(const Factorization& f) { return referenceLengths(f); }

TEST(Factorize, StringGivenItselfIsOneSymbol) {
  const auto x = toBytes("the quick brown fox jumps over the lazy dog");
  const auto f = factorize(view(x), {{view(x)}, ConditioningMode::AllOfX});
  ASSERT_EQ(f.symbols.size(), 1u);
  EXPECT_EQ(f.symbols[0].length, x.size());
  EXPECT_EQ(f.symbols[0].offset, (Offset{0, 0}));
}

TEST(Factorize, DisjointAlphabetsGiveOnlyLiterals) {
  const auto x = toBytes("abbababbbaabababbbbaaab");
  const auto y = toBytes("cdcdcdddccdcdccdcdcdcc");
  const auto f = factorize(view(x), {{view(y)}, ConditioningMode::AllOfX});
  ASSERT_EQ(f.symbols.size(), x.size());
  for (const auto& s : f.symbols) EXPECT_TRUE(s.isLiteral());
}

TEST(Factorize, OverlappingSelfCopy) {
  const auto x = toBytes("aaaaaa");
  const auto f = factorize(view(x), ownPastContext());
  ASSERT_EQ(f.symbols.size(), 2u);
  EXPECT_EQ(f.symbols[0], Symbol::makeLiteral('a'));
  EXPECT_EQ(f.symbols[1], Symbol::makeReference(5, {kSelfRegion, 0}));
  EXPECT_EQ(naiveFactorize(view(x), ownPastContext()).symbols, f.symbols);
}

TEST(Factorize, RepeatedTriple) {
  const auto x = toBytes("abcabcabd");
  const auto f = factorize(view(x), ownPastContext());
  const std::vector<Symbol> expected{Symbol::makeLiteral('a'), Symbol::makeLiteral('b'), Symbol::makeLiteral('c'),
                                     Symbol::makeReference(5, {kSelfRegion, 0}), Symbol::makeLiteral('d')};
  EXPECT_EQ(f.symbols, expected);
  EXPECT_EQ(naiveFactorize(view(x), ownPastContext()).symbols, expected);
  EXPECT_EQ(lengthsOf(f), (std::vector<std::size_t>{1, 1, 1, 5, 1}));
}

TEST(Factorize, ShortMatchesBecomeLiterals) {
  const auto x = toBytes("abxab");
  const auto f = factorize(view(x), ownPastContext());
  EXPECT_EQ(f.symbols.size(), 5u);
}

TEST(Factorize, PastOfSourceIsPositionAligned) {
  // At t = 3 only "abc" of the source is past, so "xyz" cannot be referenced
  // and the later "abc" can.
  const auto y = toBytes("abcxyz");
  const auto x = toBytes("xyzabc");
  const auto f = factorize(view(x), {{view(y)}, ConditioningMode::PastOfX});
  const std::vector<Symbol> expected{Symbol::makeLiteral('x'), Symbol::makeLiteral('y'), Symbol::makeLiteral('z'),
                                     Symbol::makeReference(3, {0, 0})};
  EXPECT_EQ(f.symbols, expected);

  const auto all = factorize(view(x), {{view(y)}, ConditioningMode::AllOfX});
  EXPECT_EQ(all.symbols.front(), Symbol::makeReference(3, {0, 3}));
}

TEST(Factorize, PastSourceMatchMustEndInsidePast) {
  // Source past at t = 4 is "abcd"; the match "abcdef" would run past it.
  const auto y = toBytes("abcdefgh");
  const auto x = toBytes("wxyzabcdef");
  const auto f = factorize(view(x), {{view(y)}, ConditioningMode::PastOfX});
  EXPECT_EQ(f.symbols[4], Symbol::makeReference(4, {0, 0}));
  EXPECT_EQ(f.symbols.size(), 7u);
}

TEST(Factorize, MatchesDoNotSpanSources) {
  const auto a = toBytes("qqqqabc");
  const auto b = toBytes("defrrrr");
  const auto x = toBytes("abcdef");
  const auto f = factorize(view(x), {{view(a), view(b)}, ConditioningMode::AllOfX});
  EXPECT_EQ(lengthsOf(f), (std::vector<std::size_t>{3, 3}));
}

TEST(Factorize, TieBreakPrefersOwnPastThenSourceOrder) {
  const auto s0 = toBytes("zzabczz");
  const auto s1 = toBytes("abcabc");
  const auto x = toBytes("abcabc");
  const auto f = factorize(view(x), {{view(s0), view(s1)}, ConditioningMode::PastOfYAllOfX});
  // t = 0: own past is empty; source 1 holds the full string.
  EXPECT_EQ(f.symbols.front(), Symbol::makeReference(6, {1, 0}));

  const auto y = toBytes("abcxabc");
  const auto g = factorize(view(y), {{view(s0)}, ConditioningMode::PastOfYAllOfX});
  ASSERT_EQ(g.symbols.size(), 3u);
  EXPECT_EQ(g.symbols[0], Symbol::makeReference(3, {0, 2}));
  EXPECT_EQ(g.symbols[2], Symbol::makeReference(3, {kSelfRegion, 0}));
}

TEST(Factorize, Errors) {
  const auto x = toBytes("abc");
  EXPECT_THROW(
      {
        try {
          factorize(ByteView{}, ownPastContext());
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "empty input");
          throw;
        }
      },
      Error);
  EXPECT_THROW(
      {
        try {
          factorize(view(x), {{view(x), view(x)}, ConditioningMode::PastOfX});
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "mode expects single source");
          throw;
        }
      },
      Error);
}

TEST(Decode, Examples) {
  const auto ctx = ownPastContext();
  Factorization single;
  single.targetLength = 1;
  single.mode = ctx.mode;
  single.symbols = {Symbol::makeLiteral('q')};
  EXPECT_EQ(decode(single, ctx), toBytes("q"));

  Factorization overlapped = single;
  overlapped.targetLength = 6;
  overlapped.symbols = {Symbol::makeLiteral('a'), Symbol::makeReference(5, {kSelfRegion, 0})};
  EXPECT_EQ(decode(overlapped, ctx), toBytes("aaaaaa"));
}

TEST(Decode, RejectsOffsetsOutsidePermittedRegion) {
  const auto y = toBytes("abcdef");
  const ConditioningContext past{{view(y)}, ConditioningMode::PastOfX};
  Factorization f;
  f.mode = past.mode;
  f.sourceCount = 1;
  f.targetLength = 3;
  f.symbols = {Symbol::makeReference(3, {0, 0})};  // t = 0, nothing is past yet
  EXPECT_THROW(decode(f, past), Error);

  Factorization self;
  self.mode = ConditioningMode::AllOfX;
  self.sourceCount = 1;
  self.targetLength = 4;
  self.symbols = {Symbol::makeLiteral('a'), Symbol::makeReference(3, {kSelfRegion, 0})};
  EXPECT_THROW(decode(self, {{view(y)}, ConditioningMode::AllOfX}), Error);

  Factorization shortRef = self;
  shortRef.symbols = {Symbol::makeLiteral('a'), Symbol::makeReference(3, {0, 5})};
  EXPECT_THROW(decode(shortRef, {{view(y)}, ConditioningMode::AllOfX}), Error);
}

TEST(ReferenceLengths, Examples) {
  const auto x = toBytes("abcdefghij");
  EXPECT_EQ(lengthsOf(factorize(view(x), {{view(x)}, ConditioningMode::AllOfX})), std::vector<std::size_t>{10});
  const auto lits = lengthsOf(factorize(view(x), ownPastContext()));
  EXPECT_EQ(lits, std::vector<std::size_t>(10, 1));
}

ConditioningContext randomContext(std::mt19937_64& rng, ConditioningMode mode, std::vector<ByteString>& storage,
                                  unsigned alphabet) {
  std::uniform_int_distribution<int> count(0, mode == ConditioningMode::PastOfX ? 1 : 3);
  std::uniform_int_distribution<std::size_t> len(1, 700);
  storage.clear();
  const int k = count(rng);
  for (int i = 0; i < k; ++i) storage.push_back(testing::repetitiveBytes(rng, len(rng), alphabet));
  ConditioningContext ctx{{}, mode};
  for (const auto& s : storage) ctx.sources.push_back(view(s));
  return ctx;
}

TEST(FactorizeProperty, MatchesNaiveOracleAndRoundTrips) {
  std::mt19937_64 rng(20240611);
  std::vector<ByteString> storage;
  const ConditioningMode modes[] = {ConditioningMode::PastOfX, ConditioningMode::AllOfX,
                                    ConditioningMode::PastOfBoth, ConditioningMode::PastOfYAllOfX};
  std::uniform_int_distribution<std::size_t> len(1, 700);
  std::uniform_int_distribution<unsigned> alpha(2, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mode = modes[trial % 4];
    const unsigned a = alpha(rng);
    const auto ctx = randomContext(rng, mode, storage, a);
    const auto x = testing::repetitiveBytes(rng, len(rng), a);
    const auto f = factorize(view(x), ctx);
    ASSERT_EQ(f.symbols, naiveFactorize(view(x), ctx).symbols) << "trial " << trial;
    ASSERT_EQ(decode(f, ctx), x);
    std::size_t total = 0;
    for (const auto& s : f.symbols) {
      total += s.length;
      ASSERT_TRUE(s.length == 1 || s.length >= kMinMatchLength);
    }
    ASSERT_EQ(total, x.size());
  }
}

// Greedy parsing with a 3-byte minimum is not monotone in the dictionary:
// here the larger context takes "aba" at t = 3 and strands "ba" as two
// literals, while the aligned past only offers "baba" one step later.
TEST(Factorize, WholeContextCanCostOneMoreSymbol) {
  const auto y = toBytes("baba");
  const auto x = toBytes("aaaababa");
  EXPECT_EQ(factorize(view(x), {{view(y)}, ConditioningMode::AllOfX}).symbols.size(), 6u);
  EXPECT_EQ(factorize(view(x), {{view(y)}, ConditioningMode::PastOfX}).symbols.size(), 5u);
}

TEST(FactorizeProperty, WholeContextNeedsFewerSymbolsOnAverage) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> len(1, 600);
  std::uniform_int_distribution<unsigned> alpha(2, 6);
  std::size_t pastTotal = 0, allTotal = 0, worse = 0;
  constexpr int kTrials = 300;
  for (int trial = 0; trial < kTrials; ++trial) {
    const unsigned a = alpha(rng);
    const auto y = testing::repetitiveBytes(rng, len(rng), a);
    const auto x = testing::repetitiveBytes(rng, len(rng), a);
    const auto past = factorize(view(x), {{view(y)}, ConditioningMode::PastOfX}).symbols.size();
    const auto all = factorize(view(x), {{view(y)}, ConditioningMode::AllOfX}).symbols.size();
    pastTotal += past;
    allTotal += all;
    worse += all > past;
  }
  EXPECT_LT(allTotal, pastTotal);
  EXPECT_LT(worse, kTrials / 10);
}

TEST(Factorize, ReferencesReachBeyondAnyFixedWindow) {
  constexpr std::size_t kMiB = 1 << 20;
  std::mt19937_64 rng(5);
  const auto y = testing::randomBytes(rng, kMiB, 256);
  // x = second half of y followed by first half: both copies are far apart.
  ByteString x(y.begin() + kMiB / 2, y.end());
  x.insert(x.end(), y.begin(), y.begin() + kMiB / 2);
  const auto f = factorize(view(x), {{view(y)}, ConditioningMode::AllOfX});
  ASSERT_EQ(f.symbols.size(), 2u);
  EXPECT_EQ(f.symbols[0], Symbol::makeReference(kMiB / 2, {0, kMiB / 2}));
  EXPECT_EQ(f.symbols[1], Symbol::makeReference(kMiB / 2, {0, 0}));
}

TEST(Factorize, ConcurrentCallsAgree) {
  std::mt19937_64 rng(9);
  const auto y = testing::repetitiveBytes(rng, 20000, 4);
  const auto x = testing::repetitiveBytes(rng, 20000, 4);
  const ConditioningContext ctx{{view(y)}, ConditioningMode::PastOfYAllOfX};
  const auto expected = factorize(view(x), ctx);
  std::vector<Factorization> results(4);
  {
    std::vector<std::jthread> threads;
    for (auto& r : results) threads.emplace_back([&] { r = factorize(view(x), ctx); });
  }
  for (const auto& r : results) EXPECT_EQ(r.symbols, expected.symbols);
}

}  // namespace
}  // namespace salza
