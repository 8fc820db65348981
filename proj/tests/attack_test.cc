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

#include <map>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "privrewrite/core/rng.h"
#include "privrewrite/eval/attack.h"
#include "privrewrite/eval/report.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace privrewrite {
namespace {

using ::testing::HasSubstr;
using nlohmann::json;

ChannelModel Channel(Distribution prior,
                     std::map<std::string, Distribution> emission,
                     std::map<AttackContext, ContextTable> contextual = {}) {
  auto c = ChannelModel::Create(std::move(prior), std::move(emission),
                                std::move(contextual));
  EXPECT_TRUE(c.ok()) << c.status();
  return *std::move(c);
}

ChannelModel PersonChannel() {
  return Channel({{"alice", 0.9}, {"bob", 0.1}},
                 {{"alice", {{"person", 1.0}}}, {"bob", {{"person", 1.0}}}});
}

TEST(ChannelModelTest, ValidatesProbabilities) {
  EXPECT_FALSE(ChannelModel::Create({{"a", 0.5}}, {{"a", {{"y", 1.0}}}}).ok());
  EXPECT_FALSE(
      ChannelModel::Create({{"a", 1.0}}, {{"a", {{"y", 0.7}}}}).ok());
  EXPECT_FALSE(ChannelModel::Create({{"a", 1.0}}, {}).ok());
  EXPECT_FALSE(ChannelModel::Create({}, {}).ok());
  EXPECT_TRUE(ChannelModel::Create({{"a", 1.0 - 1e-12}}, {{"a", {{"y", 1.0}}}})
                  .ok());
}

TEST(ChannelModelTest, JsonRoundTripAndFile) {
  const ChannelModel c = Channel(
      {{"alice", 0.9}, {"bob", 0.1}},
      {{"alice", {{"person", 1.0}}}, {"bob", {{"person", 1.0}}}},
      {{{"dr", "</s>"}, {{{"alice", 0.2}, {"bob", 0.8}}, {}}}});
  auto back = ChannelModel::FromJson(c.ToJson());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->ToJson(), c.ToJson());
  EXPECT_TRUE(back->has_contextual());
  const auto dir = testing::MakeTempDir("channel");
  const std::string path =
      testing::WriteText(dir, "channel.json", c.ToJson().dump(2));
  auto loaded = ChannelModel::Load(path);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(loaded->vocabulary(), (std::vector<std::string>{"alice", "bob"}));
  EXPECT_FALSE(ChannelModel::FromJson(json::array()).ok());
  EXPECT_FALSE(ChannelModel::FromJson(json{{"prior", {{"a", 1.0}}}}).ok());
}

TEST(ReconstructTest, PriorDecidesWhenEmissionsTie) {
  auto x = ReconstructContextFree("person", PersonChannel());
  ASSERT_TRUE(x.ok());
  EXPECT_EQ(*x, "alice");
}

TEST(ReconstructTest, InvertibleChannel) {
  const ChannelModel c =
      Channel({{"a", 0.5}, {"b", 0.3}, {"c", 0.2}},
              {{"a", {{"1", 1.0}}}, {"b", {{"2", 1.0}}}, {"c", {{"3", 1.0}}}});
  EXPECT_EQ(*ReconstructContextFree("1", c), "a");
  EXPECT_EQ(*ReconstructContextFree("2", c), "b");
  EXPECT_EQ(*ReconstructContextFree("3", c), "c");
}

TEST(ReconstructTest, LikelihoodTimesPrior) {
  // 1 * 0.5 = 0.5 beats 0.5 * 0.5 = 0.25.
  const ChannelModel c =
      Channel({{"alice", 0.5}, {"bob", 0.5}},
              {{"alice", {{"person", 1.0}}},
               {"bob", {{"person", 0.5}, {"someone", 0.5}}}});
  EXPECT_EQ(*ReconstructContextFree("person", c), "alice");
  EXPECT_EQ(*ReconstructContextFree("someone", c), "bob");
}

TEST(ReconstructTest, TiesGoToLexicographicallySmallest) {
  const ChannelModel c =
      Channel({{"zed", 0.5}, {"amy", 0.5}},
              {{"zed", {{"person", 1.0}}}, {"amy", {{"person", 1.0}}}});
  EXPECT_EQ(*ReconstructContextFree("person", c), "amy");
}

TEST(ReconstructTest, UnreachableObservation) {
  auto x = ReconstructContextFree("robot", PersonChannel());
  ASSERT_FALSE(x.ok());
  EXPECT_THAT(std::string(x.status().message()),
              HasSubstr("unreachable observation"));
}

TEST(ReconstructTest, MatchesExhaustiveOracle) {
  Rng rng(8);
  const std::vector<std::string> ys = {"p", "q", "r", "<gap>"};
  for (int trial = 0; trial < 500; ++trial) {
    const size_t nx = 1 + rng.UniformIndex(6);
    // Dyadic probabilities keep every product exact.
    std::map<std::string, double> prior;
    std::map<std::string, std::map<std::string, double>> emission;
    std::vector<int> weights(nx, 0);
    for (int k = 0; k < 16; ++k) ++weights[rng.UniformIndex(nx)];
    for (size_t i = 0; i < nx; ++i) {
      const std::string x(1, static_cast<char>('a' + i));
      prior[x] = weights[i] / 16.0;
      std::vector<int> ew(ys.size(), 0);
      for (int k = 0; k < 8; ++k) ++ew[rng.UniformIndex(ys.size())];
      for (size_t j = 0; j < ys.size(); ++j) {
        if (ew[j] > 0) emission[x][ys[j]] = ew[j] / 8.0;
      }
    }
    auto channel = ChannelModel::Create(prior, emission);
    ASSERT_TRUE(channel.ok()) << channel.status();
    for (const std::string& y : ys) {
      const auto expected = oracle::PosteriorArgmax(y, prior, emission);
      auto got = ReconstructContextFree(y, *channel);
      if (!expected.has_value()) {
        EXPECT_FALSE(got.ok());
      } else {
        ASSERT_TRUE(got.ok());
        EXPECT_EQ(*got, *expected);
      }
    }
  }
}

TEST(ReconstructTest, DegenerateContextEqualsContextFree) {
  const ChannelModel base = PersonChannel();
  const ContextTable same{{{"alice", 0.9}, {"bob", 0.1}},
                          {{"alice", {{"person", 1.0}}},
                           {"bob", {{"person", 1.0}}}}};
  const ChannelModel c = Channel({{"alice", 0.9}, {"bob", 0.1}},
                                 {{"alice", {{"person", 1.0}}},
                                  {"bob", {{"person", 1.0}}}},
                                 {{{"met", "</s>"}, same}});
  for (const AttackContext& ctx :
       {AttackContext{"met", "</s>"}, AttackContext{"<s>", "today"}}) {
    EXPECT_EQ(*ReconstructContextual("person", ctx, c),
              *ReconstructContextFree("person", base));
  }
}

TEST(ReconstructTest, PlantedContextFlipsPrior) {
  const ChannelModel c = Channel(
      {{"alice", 0.9}, {"bob", 0.1}},
      {{"alice", {{"person", 1.0}}}, {"bob", {{"person", 1.0}}}},
      {{{"dr", "</s>"}, {{{"alice", 0.2}, {"bob", 0.8}}, {}}}});
  EXPECT_EQ(*ReconstructContextFree("person", c), "alice");
  EXPECT_EQ(*ReconstructContextual("person", {"dr", "</s>"}, c), "bob");
  // Unseen context falls back.
  EXPECT_EQ(*ReconstructContextual("person", {"mr", "</s>"}, c), "alice");
  EXPECT_EQ(ReconstructContextual("person", {"dr", "</s>"}, PersonChannel())
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

std::vector<AttackPair> Pairs(
    const std::vector<std::pair<std::string, std::string>>& texts) {
  std::vector<AttackPair> out;
  for (const auto& [orig, rew] : texts) {
    out.push_back(MakeAttackPair(testing::MakeUtterance(orig), rew));
  }
  return out;
}

TEST(AttackSuccessRateTest, InvertibleChannelIsFullyBroken) {
  const ChannelModel c =
      Channel({{"ohio", 0.5}, {"texas", 0.5}},
              {{"ohio", {{"midwest", 1.0}}}, {"texas", {{"south", 1.0}}}});
  auto r = AttackSuccessRate(
      Pairs({{"born in ohio", "born in the midwest"},
             {"texas is big", "south is big"}}),
      c, AttackMode::kContextFree);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->differing_pairs, 2u);
  EXPECT_DOUBLE_EQ(*r->asr_context_free, 1.0);
  EXPECT_LE(r->differing_pairs, r->aligned_pairs);
}

TEST(AttackSuccessRateTest, NoDifferingTokensIsUndefined) {
  auto r = AttackSuccessRate(Pairs({{"alice went home", "alice went home"}}),
                             PersonChannel(), AttackMode::kContextFree);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->asr_context_free.has_value());
  EXPECT_THAT(RenderTable(*r), HasSubstr("undefined"));
}

TEST(AttackSuccessRateTest, DeletionObservesGap) {
  const ChannelModel c =
      Channel({{"alice", 0.5}, {"bob", 0.5}},
              {{"alice", {{"<gap>", 1.0}}}, {"bob", {{"person", 1.0}}}});
  auto r = AttackSuccessRate(Pairs({{"alice went home", "went home"}}), c,
                             AttackMode::kContextFree);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->differing_pairs, 1u);
  EXPECT_DOUBLE_EQ(*r->asr_context_free, 1.0);
}

TEST(AttackSuccessRateTest, MonteCarloApproachesBayesAccuracy) {
  const ChannelModel c = PersonChannel();
  EXPECT_NEAR(BayesAccuracy(c), 0.9, 1e-12);
  Rng rng(2024);
  std::vector<AttackPair> pairs;
  for (int i = 0; i < 10000; ++i) {
    const bool alice = rng.UniformDouble() < 0.9;
    pairs.push_back({{alice ? "alice" : "bob"}, "person"});
  }
  auto r = AttackSuccessRate(pairs, c, AttackMode::kContextFree);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r->asr_context_free, 0.9, 0.02);
}

TEST(AttackSuccessRateTest, ContextualModeUsesNeighbours) {
  const ChannelModel c = Channel(
      {{"alice", 0.9}, {"bob", 0.1}},
      {{"alice", {{"person", 1.0}}}, {"bob", {{"person", 1.0}}}},
      {{{"dr", "</s>"}, {{{"alice", 0.2}, {"bob", 0.8}}, {}}}});
  auto r = AttackSuccessRate(
      Pairs({{"dr bob", "dr person"}, {"alice came", "person came"}}), c,
      AttackMode::kContextual);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(*r->asr_context_free, 0.5);
  EXPECT_DOUBLE_EQ(*r->asr_contextual, 1.0);
  EXPECT_FALSE(AttackSuccessRate(Pairs({{"a", "b"}}), PersonChannel(),
                                 AttackMode::kContextual)
                   .ok());
}

TEST(EstimateChannelTest, AddOneSmoothing) {
  auto c = EstimateChannel(
      Pairs({{"alice came", "person came"}, {"bob came", "person came"},
             {"alice left", "someone left"}}),
      {"alice", "bob"});
  ASSERT_TRUE(c.ok()) << c.status();
  // alice: 2 observations, bob: 1; outputs {person, someone}.
  EXPECT_DOUBLE_EQ(c->Prior("alice"), 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(c->Emission("person", "alice"), 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(c->Emission("someone", "bob"), 1.0 / 3.0);
  EXPECT_FALSE(EstimateChannel({}, {}).ok());
}

TEST(AttackReportTest, JsonFields) {
  AttackReport r;
  r.asr_context_free = 0.25;
  r.aligned_pairs = 10;
  r.differing_pairs = 4;
  const json doc = ToJson(r);
  EXPECT_DOUBLE_EQ(doc["asr_context_free"].get<double>(), 0.25);
  EXPECT_TRUE(doc["asr_contextual"].is_null());
  EXPECT_EQ(doc["differing_pairs"], 4);
}

}  // namespace
}  // namespace privrewrite
