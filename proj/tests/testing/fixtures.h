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

// Shared fixtures and test doubles.

#ifndef PRIVREWRITE_TESTS_TESTING_FIXTURES_H_
#define PRIVREWRITE_TESTS_TESTING_FIXTURES_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrewrite/alignment/alignment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/backends/mock.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/types.h"
#include "privrewrite/pipeline/context.h"
#include "privrewrite/pipeline/run_config.h"

namespace privrewrite::testing {

// Fresh empty directory under the system temp dir.
std::filesystem::path MakeTempDir(std::string_view name);

// Four records where a scripted generator makes the first Delete on
// record r1 leave the segment behind. Tree recovers through Obscure; a
// single one-step rewrite does not.
struct StrategyFixture {
  std::string dataset_jsonl;
  MockSuiteOptions mock;
};
StrategyFixture MakeStrategyFixture();

// A persona-chat style utterance with two private details.
struct HousingFixture {
  std::string dataset_jsonl;
  std::vector<std::string> segment_surfaces;
};
HousingFixture MakeHousingFixture();

// Five plain records for end-to-end runs.
std::string MakeSmallDatasetJsonl();

// Writes text to dir/name and returns the path.
std::string WriteText(const std::filesystem::path& dir, std::string_view name,
                      std::string_view text);

absl::StatusOr<std::unique_ptr<PipelineContext>> MakeMockContext(
    MockSuiteOptions options, RunConfig cfg = {});

PrivacySpec PiiSpec(std::vector<std::string> surfaces);
PrivacySpec PersonaSpec(std::string persona);
Utterance MakeUtterance(std::string text, std::string doc_id = "doc");
AlignedSegment SegmentOf(const Utterance& u, std::string_view surface);

// Scores spans from a surface -> score table; unknown spans score 0.
class TableSegmentScorer : public SegmentScorer {
 public:
  explicit TableSegmentScorer(std::map<std::string, double> table)
      : table_(std::move(table)) {}
  absl::StatusOr<std::vector<SpanScore>> ScoreSpans(
      const PrivacySpec& spec,
      std::span<const std::vector<std::string>> spans) const override;
  std::string Name() const override { return "table"; }
  double DefaultThreshold() const override { return 0.5; }

 private:
  std::map<std::string, double> table_;
};

// Candidate scores from a fixed cycle, or a pseudo-random function of the
// candidate text when the cycle is empty.
class ScriptedScorer : public CandidateScorer {
 public:
  explicit ScriptedScorer(std::vector<double> cycle, uint64_t salt = 0)
      : cycle_(std::move(cycle)), salt_(salt) {}
  absl::StatusOr<double> Score(std::string_view candidate,
                               std::span<const AlignedSegment> targets,
                               const PrivacySpec& spec) const override;
  int calls() const { return calls_.load(); }

 private:
  std::vector<double> cycle_;
  uint64_t salt_;
  mutable std::atomic<int> calls_{0};
};

class FailingGenerator : public Generator {
 public:
  explicit FailingGenerator(absl::Status status) : status_(std::move(status)) {}
  std::string Identity() const override { return "failing"; }
  int calls() const { return calls_.load(); }

 protected:
  absl::StatusOr<std::vector<std::string>> DoGenerate(
      const RewritePrompt& prompt, int n) const override;

 private:
  absl::Status status_;
  mutable std::atomic<int> calls_{0};
};

}  // namespace privrewrite::testing

#endif  // PRIVREWRITE_TESTS_TESTING_FIXTURES_H_
