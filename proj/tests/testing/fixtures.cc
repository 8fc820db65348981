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

#include "testing/fixtures.h"

#include <cstdlib>
#include <fstream>
#include <utility>

#include <unistd.h>

#include "json.hpp"
#include "privrewrite/core/rng.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite::testing {
namespace {

using nlohmann::json;

std::string Line(json record) { return record.dump() + "\n"; }

json Pii(std::string surface, std::string category) {
  return json{{"surface", std::move(surface)},
              {"category", std::move(category)}};
}

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) std::abort();
  return *std::move(v);
}

}  // namespace

std::filesystem::path MakeTempDir(std::string_view name) {
  static std::atomic<int> counter{0};
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("privrewrite_" + std::string(name) + "_" + std::to_string(::getpid()) +
       "_" + std::to_string(counter.fetch_add(1)));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

StrategyFixture MakeStrategyFixture() {
  StrategyFixture f;
  f.dataset_jsonl =
      Line({{"doc_id", "r1"},
            {"utterance", "i like to drink scotch to relax"},
            {"pii", json::array({Pii("scotch", "beverage")})},
            {"reference", "i like to drink a beverage to relax"}}) +
      Line({{"doc_id", "r2"},
            {"utterance", "we rent an apartment near the station"},
            {"pii", json::array({Pii("apartment", "residence")})}}) +
      Line({{"doc_id", "r3"},
            {"utterance", "my salary is very low"},
            {"persona", "I have a low salary."}}) +
      Line({{"doc_id", "r4"},
            {"utterance", "she was born in ohio"},
            {"pii", json::array({Pii("ohio", "location")})}});
  f.mock.generator.hypernyms = {{"scotch", "a beverage"}};
  // The Delete rewrite of r1 leaves the drink in place.
  f.mock.generator.scripted[{RewriteAction::kDelete, "scotch"}] = {
      "scotch whisky"};
  return f;
}

HousingFixture MakeHousingFixture() {
  HousingFixture f;
  f.dataset_jsonl = Line(
      {{"doc_id", "housing-1"},
       {"utterance",
        "Hello . I live in an apartment . It is a low income residence ."},
       {"persona", "I live in low income apartments."},
       {"pii", json::array({Pii("apartment", "residence"),
                            Pii("low income", "finance")})}});
  f.segment_surfaces = {"apartment", "low income"};
  return f;
}

std::string MakeSmallDatasetJsonl() {
  return Line({{"doc_id", "s1"},
               {"utterance", "i am an ohio mom with two amazing sons"},
               {"pii", json::array({Pii("ohio", "location")})}}) +
         Line({{"doc_id", "s2"},
               {"utterance", "i drink scotch every night"},
               {"persona", "I like scotch."}}) +
         Line({{"doc_id", "s3"},
               {"utterance", "my dog is named rex. we walk in the park."},
               {"pii", json::array({Pii("rex", "name")})}}) +
         Line({{"doc_id", "s4"},
               {"utterance", "the weather is nice today"},
               {"persona", "I am a nurse."}}) +
         Line({{"doc_id", "s5"},
               {"utterance", "i work as a nurse in boston"},
               {"persona", "I am a nurse."},
               {"pii", json::array({Pii("boston", "location")})}});
}

std::string WriteText(const std::filesystem::path& dir, std::string_view name,
                      std::string_view text) {
  const std::filesystem::path p = dir / std::string(name);
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

absl::StatusOr<std::unique_ptr<PipelineContext>> MakeMockContext(
    MockSuiteOptions options, RunConfig cfg) {
  auto suite = MakeMockSuite(std::move(options));
  if (!suite.ok()) return suite.status();
  return PipelineContext::Create(*std::move(suite), std::move(cfg));
}

PrivacySpec PiiSpec(std::vector<std::string> surfaces) {
  std::vector<PiiItem> items;
  for (std::string& s : surfaces) items.push_back({std::move(s), "misc"});
  return Unwrap(PrivacySpec::Create("spec", std::nullopt, std::move(items)));
}

PrivacySpec PersonaSpec(std::string persona) {
  return Unwrap(PrivacySpec::Create("spec", std::move(persona), {}));
}

Utterance MakeUtterance(std::string text, std::string doc_id) {
  return Unwrap(Utterance::Create(std::move(doc_id), std::move(text)));
}

AlignedSegment SegmentOf(const Utterance& u, std::string_view surface) {
  const std::vector<std::string> needle = Tokenize(surface);
  const size_t at = FindTokenRun(u.tokens(), needle);
  if (at == u.tokens().size()) std::abort();
  return Unwrap(MakeSegment(u, {at, at + needle.size()}, 1.0));
}

absl::StatusOr<std::vector<SpanScore>> TableSegmentScorer::ScoreSpans(
    const PrivacySpec&, std::span<const std::vector<std::string>> spans) const {
  std::vector<SpanScore> out;
  for (const auto& span : spans) {
    auto it = table_.find(JoinTokens(span));
    out.push_back({it == table_.end() ? 0.0 : it->second, size_t{0}});
  }
  return out;
}

absl::StatusOr<double> ScriptedScorer::Score(std::string_view candidate,
                                             std::span<const AlignedSegment>,
                                             const PrivacySpec&) const {
  const int call = calls_.fetch_add(1);
  if (!cycle_.empty()) return cycle_[call % cycle_.size()];
  Rng rng(Fnv1a64(candidate) ^ salt_);
  return rng.UniformDouble();
}

absl::StatusOr<std::vector<std::string>> FailingGenerator::DoGenerate(
    const RewritePrompt&, int) const {
  calls_.fetch_add(1);
  return status_;
}

}  // namespace privrewrite::testing
