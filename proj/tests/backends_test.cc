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
#include <numbers>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/backends/mock.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/rng.h"
#include "privrewrite/rewriter/prompt.h"
#include "testing/fixtures.h"

namespace privrewrite {
namespace {

using ::testing::Each;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using testing::MakeUtterance;
using testing::PiiSpec;
using testing::SegmentOf;

RewritePrompt Prompt(std::string_view sentence, std::string_view surface,
                     RewriteAction action) {
  const Utterance u = MakeUtterance(std::string(sentence));
  auto p = BuildPrompt(sentence, SegmentOf(u, surface), action);
  EXPECT_TRUE(p.ok()) << p.status();
  return *std::move(p);
}

class FixedNli : public NliModel {
 public:
  explicit FixedNli(double p) : p_(p) {}
  std::string Identity() const override { return "fixed-nli"; }

 protected:
  absl::StatusOr<double> DoEntailment(std::string_view,
                                      std::string_view) const override {
    return p_;
  }

 private:
  double p_;
};

class FixedReward : public RewardModel {
 public:
  explicit FixedReward(double r) : r_(r) {}
  std::string Identity() const override { return "fixed-reward"; }

 protected:
  absl::StatusOr<double> DoScore(const RewardQuery&) const override {
    return r_;
  }

 private:
  double r_;
};

TEST(MockGeneratorTest, DeleteRemovesSegment) {
  MockGenerator gen;
  auto out = gen.Generate(Prompt("i drink scotch", "scotch",
                                 RewriteAction::kDelete), 3);
  ASSERT_TRUE(out.ok());
  EXPECT_THAT(*out, ElementsAre("i drink", "i drink", "i drink"));
}

TEST(MockGeneratorTest, ObscureUsesHypernymTable) {
  MockGenerator gen({.hypernyms = {{"scotch", "a beverage"}}});
  auto out = gen.Generate(
      Prompt("i drink scotch", "scotch", RewriteAction::kObscure), 2);
  ASSERT_TRUE(out.ok());
  EXPECT_THAT(*out, Each(std::string("i drink a beverage")));
  MockGenerator plain;
  auto fallback = plain.Generate(
      Prompt("i drink scotch", "scotch", RewriteAction::kObscure), 1);
  ASSERT_TRUE(fallback.ok());
  EXPECT_THAT(*fallback, ElementsAre("i drink something"));
}

TEST(MockGeneratorTest, ScriptedReplacementsCycle) {
  MockGeneratorOptions options;
  options.scripted[{RewriteAction::kDelete, "scotch"}] = {"gin", "rum"};
  MockGenerator gen(options);
  auto out =
      gen.Generate(Prompt("i drink scotch", "scotch", RewriteAction::kDelete), 3);
  ASSERT_TRUE(out.ok());
  EXPECT_THAT(*out, ElementsAre("i drink gin", "i drink rum", "i drink gin"));
}

TEST(MockGeneratorTest, ZeroSamplesIsAnError) {
  MockGenerator gen;
  auto out =
      gen.Generate(Prompt("i drink scotch", "scotch", RewriteAction::kDelete), 0);
  ASSERT_FALSE(out.ok());
  EXPECT_THAT(std::string(out.status().message()), HasSubstr("n must be >= 1"));
}

TEST(MockRewardTest, ResidualFraction) {
  MockRewardModel reward;
  const std::vector<std::string> sensitive = {"low income", "apartment"};
  auto clean = reward.Score({"i reside in our community", sensitive, nullptr});
  ASSERT_TRUE(clean.ok());
  EXPECT_DOUBLE_EQ(*clean, 1.0);
  auto full = reward.Score(
      {"i live in a low income apartment", sensitive, nullptr});
  ASSERT_TRUE(full.ok());
  EXPECT_DOUBLE_EQ(*full, 0.0);
  auto partial = reward.Score({"a low rent apartment", sensitive, nullptr});
  ASSERT_TRUE(partial.ok());
  EXPECT_DOUBLE_EQ(*partial, 1.0 - 2.0 / 3.0);
  EXPECT_FALSE(reward.Score({"", sensitive, nullptr}).ok());
}

TEST(MockNliTest, ContainmentOfContentTokens) {
  MockNliModel nli;
  auto same = nli.Entailment("i live in low income apartments",
                             "i live in low income apartments");
  ASSERT_TRUE(same.ok());
  EXPECT_DOUBLE_EQ(*same, 1.0);
  auto other = nli.Entailment("i reside in our community",
                              "i live in low income apartments");
  ASSERT_TRUE(other.ok());
  EXPECT_DOUBLE_EQ(*other, 0.0);
  EXPECT_FALSE(nli.Entailment("premise", "").ok());
  EXPECT_FALSE(nli.Entailment("", "hypothesis").ok());
}

TEST(MockEmbedderTest, DeterministicAndUnitNorm) {
  auto e = MockEmbedder::Create({.dimension = 64, .seed = 3});
  ASSERT_TRUE(e.ok());
  auto a = e->Embed("same text");
  auto b = e->Embed("same text");
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(*a, *b);
  double norm = 0;
  for (double x : *a) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_FALSE(e->Embed("").ok());
}

TEST(MockEmbedderTest, PlantedCosine) {
  MockEmbedderOptions options;
  options.dimension = 32;
  options.planted = {{"apartment", "residence", 0.8},
                     {"residence", "home", -0.25}};
  auto e = MockEmbedder::Create(options);
  ASSERT_TRUE(e.ok()) << e.status();
  auto a = e->Embed("apartment");
  auto b = e->Embed("residence");
  auto c = e->Embed("home");
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_NEAR(CosineSimilarity(*a, *b), 0.8, 1e-9);
  EXPECT_NEAR(CosineSimilarity(*b, *c), -0.25, 1e-9);
  options.planted = {{"x", "y", 1.5}};
  EXPECT_FALSE(MockEmbedder::Create(options).ok());
}

TEST(MockLogProbTest, UniformPerToken) {
  MockLogProbModel model(std::numbers::e);
  auto r = model.ScoreLogProb("one two three four");
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->total_logprob, -4.0, 1e-12);
  EXPECT_EQ(r->token_count, 4u);
  EXPECT_FALSE(model.ScoreLogProb("").ok());
  NoLogProbModel none;
  EXPECT_EQ(none.ScoreLogProb("text").status().code(),
            absl::StatusCode::kUnimplemented);
}

TEST(MockSuiteTest, IsCompleteAndNamed) {
  auto suite = MakeMockSuite({.logprob_vocabulary = 10});
  ASSERT_TRUE(suite.ok());
  EXPECT_THAT(suite->Identity(), HasSubstr("mock-generator"));
  EXPECT_EQ(suite->logprob->Identity(), "mock-logprob");
  auto bare = MakeMockSuite();
  ASSERT_TRUE(bare.ok());
  EXPECT_EQ(bare->logprob->Identity(), "none");
}

class ScorerTest : public ::testing::Test {
 protected:
  const Utterance u_ = MakeUtterance("i drink scotch every night");
  const PrivacySpec spec_ = PiiSpec({"scotch"});
  const AlignedSegment seg_ = SegmentOf(u_, "scotch");
  MockRewardModel reward_;
  MockNliModel nli_;
};

TEST_F(ScorerTest, RewardModelKind) {
  ScorerSpec spec;
  auto clean = ScoreReward("i drink every night", seg_, spec_, spec, &reward_,
                           nullptr);
  ASSERT_TRUE(clean.ok());
  EXPECT_DOUBLE_EQ(*clean, 1.0);
  auto leak = ScoreReward(u_.text(), seg_, spec_, spec, &reward_, nullptr);
  ASSERT_TRUE(leak.ok());
  EXPECT_DOUBLE_EQ(*leak, 0.0);
}

TEST_F(ScorerTest, PrivacyNliIsOneMinusEntailment) {
  auto spec = ScorerSpec::Create(ScorerKind::kPrivacyNli);
  ASSERT_TRUE(spec.ok());
  for (std::string candidate :
       {"i drink scotch", "i drink tea", "scotch is fine"}) {
    auto score = ScoreReward(candidate, seg_, spec_, *spec, nullptr, &nli_);
    auto e = nli_.Entailment(candidate, "scotch");
    ASSERT_TRUE(score.ok() && e.ok());
    EXPECT_EQ(*score, 1.0 - *e) << candidate;
  }
}

TEST_F(ScorerTest, LinearCombinationOfHandPickedParts) {
  FixedNli nli(0.4);
  auto spec = ScorerSpec::Create(ScorerKind::kLinearCombination,
                                 std::pair{0.5, 0.5});
  ASSERT_TRUE(spec.ok());
  auto score =
      ScoreReward("i drink every night", seg_, spec_, *spec, &reward_, &nli);
  ASSERT_TRUE(score.ok());
  EXPECT_NEAR(*score, 0.8, 1e-12);
}

TEST_F(ScorerTest, LinearCombinationIsMonotone) {
  Rng rng(4);
  auto spec = ScorerSpec::Create(ScorerKind::kLinearCombination,
                                 std::pair{0.3, 0.7});
  ASSERT_TRUE(spec.ok());
  for (int i = 0; i < 200; ++i) {
    const double r = rng.UniformDouble();
    const double e_hi = rng.UniformDouble();
    const double e_lo = e_hi * rng.UniformDouble();
    FixedReward reward(r);
    FixedNli leaky(e_hi);
    FixedNli private_nli(e_lo);
    auto a = ScoreReward("text", seg_, spec_, *spec, &reward, &leaky);
    auto b = ScoreReward("text", seg_, spec_, *spec, &reward, &private_nli);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_LE(*a, *b);
  }
}

TEST_F(ScorerTest, WeightsAreValidated) {
  EXPECT_FALSE(ScorerSpec::Create(ScorerKind::kLinearCombination,
                                  std::pair{0.7, 0.7})
                   .ok());
  EXPECT_FALSE(ScorerSpec::Create(ScorerKind::kLinearCombination,
                                  std::pair{-0.5, 1.5})
                   .ok());
}

TEST_F(ScorerTest, OutOfRangeRewardIsClampedAndCounted) {
  FixedReward loud(1.7);
  PrivacyScorer scorer(ScorerSpec{}, &loud, nullptr);
  auto score = scorer.Score("i drink", std::vector{seg_}, spec_);
  ASSERT_TRUE(score.ok());
  EXPECT_DOUBLE_EQ(*score, 1.0);
  EXPECT_EQ(scorer.clamp_count(), 1);
}

TEST_F(ScorerTest, MissingModelIsAnError) {
  PrivacyScorer scorer(*ScorerSpec::Create(ScorerKind::kPrivacyNli), &reward_,
                       nullptr);
  EXPECT_FALSE(scorer.Score("i drink", std::vector{seg_}, spec_).ok());
}

TEST(ScorerKindTest, NamesRoundTrip) {
  for (ScorerKind k : {ScorerKind::kRewardModel, ScorerKind::kPrivacyNli,
                       ScorerKind::kLinearCombination}) {
    auto parsed = ParseScorerKind(ScorerKindName(k));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, k);
  }
}

}  // namespace
}  // namespace privrewrite
