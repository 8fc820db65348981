// Copyright 2026 The privrewrite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privrewrite/alignment/alignment.h"
#include "privrewrite/backends/mock.h"
#include "privrewrite/core/rng.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace privrewrite {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;
using testing::MakeUtterance;
using testing::PiiSpec;

MockEmbedder Embedder(MockEmbedderOptions options = {}) {
  auto e = MockEmbedder::Create(std::move(options));
  EXPECT_TRUE(e.ok()) << e.status();
  return *std::move(e);
}

std::vector<std::string> Surfaces(const AlignmentResult& r) {
  std::vector<std::string> out;
  for (const AlignedSegment& s : r.segments) out.push_back(s.surface);
  return out;
}

TEST(RescaleCosineTest, MapsOntoUnitInterval) {
  EXPECT_DOUBLE_EQ(RescaleCosine(1.0), 1.0);
  EXPECT_DOUBLE_EQ(RescaleCosine(0.0), 0.5);
  EXPECT_DOUBLE_EQ(RescaleCosine(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(RescaleCosine(0.2), kDefaultCosineAlignThreshold);
}

TEST(ScoreSegmentTest, IdenticalTextScoresOne) {
  const MockEmbedder embedder = Embedder();
  const PrivacySpec spec = PiiSpec({"ohio"});
  const std::vector<std::string> seg = {"ohio"};
  auto score = ScoreSegment(spec, seg, embedder);
  ASSERT_TRUE(score.ok());
  EXPECT_NEAR(*score, 1.0, 1e-12);
}

TEST(ScoreSegmentTest, OrthogonalEmbeddingsScoreHalf) {
  MockEmbedderOptions options;
  options.fixed = {{"a", {1, 0}}, {"b", {0, 1}}};
  const MockEmbedder embedder = Embedder(options);
  const std::vector<std::string> seg = {"a"};
  auto score = ScoreSegment(PiiSpec({"b"}), seg, embedder);
  ASSERT_TRUE(score.ok());
  EXPECT_NEAR(*score, 0.5, 1e-12);
}

TEST(ScoreSegmentTest, HandComputedCosine) {
  // cos = (1*0.8 + 0*0.6) / (1 * 1) = 0.8, rescaled (0.8 + 1) / 2 = 0.9.
  MockEmbedderOptions options;
  options.fixed = {{"scotch", {1, 0}}, {"whisky", {0.8, 0.6}}};
  const MockEmbedder embedder = Embedder(options);
  const std::vector<std::string> seg = {"scotch"};
  auto score = ScoreSegment(PiiSpec({"whisky"}), seg, embedder);
  ASSERT_TRUE(score.ok());
  EXPECT_NEAR(*score, 0.9, 1e-12);
}

TEST(AlignSegmentsTest, ExactSurfaceMatch) {
  const MockEmbedder embedder = Embedder();
  CosineEmbeddingScorer scorer(embedder);
  auto result = AlignSegments(MakeUtterance("i am an ohio mom"),
                              PiiSpec({"mom"}), scorer,
                              scorer.DefaultThreshold());
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->segments.size(), 1u);
  EXPECT_EQ(result->segments[0].surface, "mom");
  EXPECT_NEAR(result->segments[0].score, 1.0, 1e-12);
  EXPECT_EQ(result->segments[0].span, (TokenSpan{4, 5}));
  EXPECT_EQ(result->scorer_name, "cosine");
}

TEST(AlignSegmentsTest, NothingAboveThreshold) {
  testing::TableSegmentScorer scorer({{"mom", 0.3}});
  auto result = AlignSegments(MakeUtterance("i am an ohio mom"),
                              PiiSpec({"mom"}), scorer, 0.5);
  ASSERT_TRUE(result.ok());
  EXPECT_THAT(result->segments, IsEmpty());
  EXPECT_DOUBLE_EQ(result->threshold_used, 0.5);
}

TEST(AlignSegmentsTest, PlantedSimilaritiesPickDrinkAndScotch) {
  // Raw cosines scotch 0.95, drink 0.6, relax 0.1 against the persona; the
  // raw threshold 0.2 lives at 0.6 on the rescaled axis.
  testing::TableSegmentScorer scorer({{"scotch", RescaleCosine(0.95)},
                                      {"drink", RescaleCosine(0.6)},
                                      {"relax", RescaleCosine(0.1)}});
  auto result = AlignSegments(MakeUtterance("i like to drink scotch to relax"),
                              testing::PersonaSpec("I like to drink scotch"),
                              scorer, RescaleCosine(0.2));
  ASSERT_TRUE(result.ok());
  EXPECT_THAT(Surfaces(*result), ElementsAre("drink", "scotch"));
}

TEST(AlignSegmentsTest, GreedyKeepsHighestDisjointSpans) {
  testing::TableSegmentScorer scorer(
      {{"low income", 0.9}, {"income", 0.95}, {"low", 0.7}, {"apartment", 0.8}});
  auto result = AlignSegments(
      MakeUtterance("i live in a low income apartment"), PiiSpec({"x"}),
      scorer, 0.5);
  ASSERT_TRUE(result.ok());
  // "income" wins first; "low income" overlaps it; "low" is still free.
  EXPECT_THAT(Surfaces(*result), ElementsAre("low", "income", "apartment"));
}

TEST(AlignSegmentsTest, RewardScorerPrefersContentBoundedSpans) {
  auto suite = MakeMockSuite();
  ASSERT_TRUE(suite.ok());
  RewardModelScorer scorer(*suite->reward);
  auto result = AlignSegments(MakeUtterance("Hello . I live in an apartment ."),
                              PiiSpec({"apartment"}), scorer,
                              scorer.DefaultThreshold());
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_THAT(Surfaces(*result), ElementsAre("apartment"));
}

TEST(AlignSegmentsTest, SpanLengthCap) {
  testing::TableSegmentScorer scorer({{"a b c d e", 1.0}, {"c", 0.6}});
  const Utterance u = MakeUtterance("a b c d e");
  auto capped = AlignSegments(u, PiiSpec({"x"}), scorer, 0.5);
  ASSERT_TRUE(capped.ok());
  EXPECT_THAT(Surfaces(*capped), ElementsAre("c"));
  auto wide = AlignSegments(u, PiiSpec({"x"}), scorer, 0.5,
                            AlignOptions{.max_span_length = 5});
  ASSERT_TRUE(wide.ok());
  EXPECT_THAT(Surfaces(*wide), ElementsAre("a b c d e"));
  EXPECT_FALSE(AlignSegments(u, PiiSpec({"x"}), scorer, 1.5).ok());
}

TEST(AlignSegmentsTest, SegmentsAreSortedAndDisjoint) {
  Rng rng(17);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const size_t n = 1 + rng.UniformIndex(8);
    for (size_t i = 0; i < n; ++i) {
      text += vocab[rng.UniformIndex(vocab.size())] + " ";
    }
    std::map<std::string, double> table;
    for (const auto& x : vocab) table[x] = rng.UniformDouble();
    for (const auto& x : vocab) {
      for (const auto& y : vocab) table[x + " " + y] = rng.UniformDouble();
    }
    testing::TableSegmentScorer scorer(table);
    auto r = AlignSegments(MakeUtterance(text), PiiSpec({"x"}), scorer, 0.4);
    ASSERT_TRUE(r.ok());
    for (size_t i = 0; i < r->segments.size(); ++i) {
      EXPECT_GE(r->segments[i].score, 0.4);
      if (i > 0) {
        EXPECT_LE(r->segments[i - 1].span.end, r->segments[i].span.start);
      }
    }
  }
}

TEST(ScrubSegmentsTest, MasksSpans) {
  const Utterance u = MakeUtterance("the applicant is a british national");
  auto scrubbed =
      ScrubSegments(u, std::vector{testing::SegmentOf(u, "british")});
  ASSERT_TRUE(scrubbed.ok());
  EXPECT_EQ(scrubbed->text(), "the applicant is a <MASK> national");
}

TEST(ScrubSegmentsTest, NoSegmentsLeavesTextUnchanged) {
  const Utterance u = MakeUtterance("the applicant is a british national");
  auto scrubbed = ScrubSegments(u, {});
  ASSERT_TRUE(scrubbed.ok());
  EXPECT_EQ(scrubbed->text(), u.text());
}

TEST(ScrubSegmentsTest, SeveralSpansWithCustomToken) {
  const Utterance u = MakeUtterance("a b c");
  auto scrubbed = ScrubSegments(
      u, std::vector{testing::SegmentOf(u, "a"), testing::SegmentOf(u, "c")},
      "X");
  ASSERT_TRUE(scrubbed.ok());
  EXPECT_EQ(scrubbed->text(), "X b X");
  const auto ab = testing::SegmentOf(u, "a b");
  const auto b = testing::SegmentOf(u, "b");
  EXPECT_FALSE(ScrubSegments(u, std::vector{ab, b}).ok());
}

TEST(OverlapCoefficientTest, WorkedExamples) {
  EXPECT_DOUBLE_EQ(
      OverlapCoefficient({"mom", "two", "sons", "married"}, {"two", "sons"}),
      1.0);
  EXPECT_DOUBLE_EQ(OverlapCoefficient({"a", "b"}, {"c", "d"}), 0.0);
  EXPECT_DOUBLE_EQ(OverlapCoefficient({"a", "b", "c"}, {"b", "c", "d", "e"}),
                   2.0 / 3.0);
  EXPECT_DOUBLE_EQ(OverlapCoefficient({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(OverlapCoefficient({"a"}, {}), 0.0);
}

TEST(OverlapCoefficientTest, MatchesOracle) {
  Rng rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> a(rng.UniformIndex(5));
    std::vector<std::string> b(rng.UniformIndex(5));
    for (auto& t : a) t = std::string(1, static_cast<char>('a' + rng.UniformIndex(5)));
    for (auto& t : b) t = std::string(1, static_cast<char>('a' + rng.UniformIndex(5)));
    EXPECT_EQ(OverlapCoefficient({a.begin(), a.end()}, {b.begin(), b.end()}),
              oracle::OverlapCoefficient(a, b).ToDouble());
  }
}

TEST(MakeSegmentTest, ValidatesSpan) {
  const Utterance u = MakeUtterance("a b c");
  auto seg = MakeSegment(u, {1, 3}, 0.7);
  ASSERT_TRUE(seg.ok());
  EXPECT_EQ(seg->surface, "b c");
  EXPECT_THAT(seg->Tokens(), ElementsAre("b", "c"));
  EXPECT_FALSE(MakeSegment(u, {2, 2}, 0.1).ok());
  EXPECT_FALSE(MakeSegment(u, {2, 4}, 0.1).ok());
}

}  // namespace
}  // namespace privrewrite
