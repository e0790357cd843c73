#include "mteval/bleu.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mteval/error.h"
#include "test_util.h"

namespace mteval::bleu {
namespace {

using ::mteval::testing::Toks;

TokenSequence RandomSeq(std::mt19937& rng, int max_len, int alphabet) {
  std::vector<std::string> t;
  const int len = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < len; ++i) t.push_back(std::string(1, 'a' + rng() % alphabet));
  return TokenSequence(std::move(t));
}

TEST(CountNgramsTest, Examples) {
  const auto counts = CountNgrams(Toks({"a", "b", "a", "b"}), 2);
  EXPECT_EQ(counts, (NgramCounts{{{"a", "b"}, 2}, {{"b", "a"}, 1}}));
  EXPECT_EQ(CountNgrams(Toks({"x", "y", "z"}), 3).size(), 1u);
  EXPECT_TRUE(CountNgrams(Toks({"x", "y"}), 3).empty());
}

TEST(ClippedMatchesTest, ClipsToMaxReferenceCount) {
  const std::vector<TokenSequence> refs = {Toks({"the", "cat"})};
  EXPECT_EQ(ClippedMatches(Toks({"the", "the", "the"}), refs, 1),
            (OrderStats{1, 3}));
  const std::vector<TokenSequence> two = {Toks({"the", "cat"}),
                                          Toks({"the", "the", "mat"})};
  EXPECT_EQ(ClippedMatches(Toks({"the", "the", "the"}), two, 1),
            (OrderStats{2, 3}));
}

TEST(ClippedMatchesTest, IdentityAndDisjoint) {
  const auto x = Toks({"a", "b", "c", "d"});
  const std::vector<TokenSequence> self = {x};
  for (int n = 1; n <= 4; ++n) {
    EXPECT_EQ(ClippedMatches(x, self, n), (OrderStats{5 - n, 5 - n}));
  }
  const std::vector<TokenSequence> other = {Toks({"p", "q"})};
  EXPECT_EQ(ClippedMatches(x, other, 1), (OrderStats{0, 4}));
}

TEST(ClippedMatchesTest, AddingReferenceNeverDecreasesMatches) {
  std::mt19937 rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    const auto hyp = RandomSeq(rng, 8, 4);
    std::vector<TokenSequence> refs = {RandomSeq(rng, 8, 4)};
    for (int n = 1; n <= 4; ++n) {
      const auto before = ClippedMatches(hyp, refs, n);
      auto more = refs;
      more.push_back(RandomSeq(rng, 8, 4));
      const auto after = ClippedMatches(hyp, more, n);
      EXPECT_GE(after.matched_clipped, before.matched_clipped);
      EXPECT_LE(after.matched_clipped, after.total_hyp);
      EXPECT_EQ(after.total_hyp,
                std::max<long>(0, static_cast<long>(hyp.size()) - n + 1));
    }
  }
}

TEST(EffectiveReferenceLengthTest, ClosestWithTiesToShorter) {
  const std::vector<TokenSequence> refs = {Toks({"a", "b"}),
                                           Toks({"a", "b", "c", "d"})};
  EXPECT_EQ(EffectiveReferenceLength(3, refs), 2);
  EXPECT_EQ(EffectiveReferenceLength(4, refs), 4);
  EXPECT_EQ(EffectiveReferenceLength(1, refs), 2);
}

TEST(BrevityFactorTest, Examples) {
  EXPECT_DOUBLE_EQ(BrevityFactor(3, 4, BrevityMode::kPaperLinear), 0.75);
  EXPECT_EQ(BrevityFactor(5, 4, BrevityMode::kPaperLinear), 1.0);
  EXPECT_EQ(BrevityFactor(4, 4, BrevityMode::kClassicExponential), 1.0);
  EXPECT_EQ(BrevityFactor(9, 4, BrevityMode::kClassicExponential), 1.0);
  EXPECT_NEAR(BrevityFactor(2, 4, BrevityMode::kClassicExponential),
              0.36787944117144233, 1e-15);
}

TEST(BrevityFactorTest, EmptyHypothesis) {
  try {
    BrevityFactor(0, 4, BrevityMode::kPaperLinear);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyHypothesis);
  }
}

TEST(BleuSegmentTest, IdentityIsOne) {
  const auto x = Toks({"a", "b", "c", "d"});
  const std::vector<TokenSequence> refs = {x};
  EXPECT_EQ(BleuSegment(x, refs, BleuConfig::Uniform(4)).value, 1.0);
}

TEST(BleuSegmentTest, ShortHypothesisUnigram) {
  const std::vector<TokenSequence> refs = {Toks({"a", "b", "c", "d"})};
  EXPECT_DOUBLE_EQ(
      BleuSegment(Toks({"a", "b", "c"}), refs, BleuConfig::Uniform(1)).value,
      0.75);
}

TEST(BleuSegmentTest, ZeroBigramOverlapScoresZero) {
  const std::vector<TokenSequence> refs = {Toks({"a", "b", "c"})};
  EXPECT_EQ(BleuSegment(Toks({"b", "a", "c", "b"}), refs, BleuConfig::Uniform(2))
                .value,
            0.0);
}

TEST(BleuSegmentTest, EpsilonSmoothingReplacesZeroMatches) {
  const std::vector<TokenSequence> refs = {Toks({"a", "b", "c", "x"})};
  const auto hyp = Toks({"b", "a", "c", "b"});
  const auto cfg = BleuConfig::Uniform(2, BrevityMode::kPaperLinear,
                                       Smoothing::AddEpsilon(1e-9));
  // p1 = 3/4, p2 = eps/3, factor 1
  const double expected = std::sqrt(0.75 * (1e-9 / 3.0));
  EXPECT_NEAR(BleuSegment(hyp, refs, cfg).value, expected, 1e-15);
}

TEST(BleuSegmentTest, EmptyHypothesisScoresZero) {
  const std::vector<TokenSequence> refs = {Toks({"a"})};
  EXPECT_EQ(BleuSegment(TokenSequence(), refs, BleuConfig::Uniform(4)).value, 0.0);
}

TEST(BleuConfigTest, Validation) {
  BleuConfig c = BleuConfig::Uniform(3);
  EXPECT_NO_THROW(c.Validate());
  c.weights = {0.5, 0.5, 0.5};
  EXPECT_THROW(c.Validate(), EvalError);
  c = BleuConfig::Uniform(2);
  c.max_n = 5;
  EXPECT_THROW(c.Validate(), EvalError);
}

TEST(BleuAggregateTest, SingleSegmentMatchesSegmentScore) {
  const auto hyp = Toks({"a", "b", "c", "a"});
  const std::vector<TokenSequence> refs = {Toks({"a", "b", "c", "d", "e"})};
  const auto cfg = BleuConfig::Uniform(2);
  const std::vector<NgramStats> stats = {CollectStats(hyp, refs, 2)};
  EXPECT_EQ(BleuAggregate(stats, Level::kDocument, cfg).value,
            BleuSegment(hyp, refs, cfg).value);
}

TEST(BleuAggregateTest, PerfectSegmentsPoolToOne) {
  const auto x = Toks({"a", "b", "c"});
  const auto y = Toks({"d", "e"});
  const std::vector<TokenSequence> rx = {x};
  const std::vector<TokenSequence> ry = {y};
  const std::vector<NgramStats> stats = {CollectStats(x, rx, 4),
                                         CollectStats(y, ry, 4)};
  EXPECT_EQ(BleuAggregate(stats, Level::kSystem, BleuConfig::Uniform(4)).value,
            1.0);
}

TEST(BleuAggregateTest, PoolsCountsBeforeDividing) {
  // (1 of 2, lengths 2/2) and (0 of 2, lengths 2/2): pooled p1 = 1/4.
  const std::vector<TokenSequence> r1 = {Toks({"a", "z"})};
  const std::vector<TokenSequence> r2 = {Toks({"y", "z"})};
  const std::vector<NgramStats> stats = {CollectStats(Toks({"a", "b"}), r1, 1),
                                         CollectStats(Toks({"c", "d"}), r2, 1)};
  const auto cfg = BleuConfig::Uniform(1, BrevityMode::kPaperLinear,
                                       Smoothing::AddEpsilon(1e-9));
  EXPECT_DOUBLE_EQ(BleuAggregate(stats, Level::kDocument, cfg).value, 0.25);
}

TEST(NistVariantTest, Examples) {
  const auto x = Toks({"a", "b", "c"});
  const std::vector<TokenSequence> self = {x};
  EXPECT_EQ(NistVariantSegment(x, self, 4).value, 1.0);

  // p1 = 1, p2 = 0, factor 1
  const NgramStats s = CollectStats(Toks({"a", "b"}), std::vector{Toks({"b", "a"})}, 2);
  ASSERT_EQ(s.orders[0], (OrderStats{2, 2}));
  ASSERT_EQ(s.orders[1], (OrderStats{0, 1}));
  EXPECT_DOUBLE_EQ(NistFromStats(s, 2, BrevityMode::kPaperLinear), 0.5);
  EXPECT_EQ(BleuFromStats(s, BleuConfig::Uniform(2)), 0.0);

  const std::vector<TokenSequence> disjoint = {Toks({"p", "q"})};
  EXPECT_EQ(NistVariantSegment(Toks({"a", "b"}), disjoint, 2).value, 0.0);
}

TEST(NistVariantTest, NeverBelowBleu) {
  std::mt19937 rng(99);
  for (int iter = 0; iter < 500; ++iter) {
    const auto hyp = RandomSeq(rng, 8, 3);
    if (hyp.empty()) continue;
    std::vector<TokenSequence> refs;
    const int nrefs = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < nrefs; ++k) {
      auto r = RandomSeq(rng, 8, 3);
      if (r.empty()) r = Toks({"a"});
      refs.push_back(r);
    }
    for (int n = 1; n <= 4; ++n) {
      const auto stats = CollectStats(hyp, refs, n);
      for (auto mode : {BrevityMode::kPaperLinear, BrevityMode::kClassicExponential}) {
        const double b = BleuFromStats(stats, BleuConfig::Uniform(n, mode));
        const double nist = NistFromStats(stats, n, mode);
        EXPECT_GE(nist + 1e-12, b);
        EXPECT_GE(b, 0.0);
        EXPECT_LE(nist, 1.0);
      }
    }
  }
}

}  // namespace
}  // namespace mteval::bleu
