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

#ifndef PRIVREWRITE_BACKENDS_SCORER_H_
#define PRIVREWRITE_BACKENDS_SCORER_H_

#include <atomic>
#include <optional>
#include <span>
#include <string_view>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/segment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

enum class ScorerKind { kRewardModel, kPrivacyNli, kLinearCombination };

std::string_view ScorerKindName(ScorerKind kind);
absl::StatusOr<ScorerKind> ParseScorerKind(std::string_view name);

struct ScorerSpec {
  ScorerKind kind = ScorerKind::kRewardModel;
  // Only read for kLinearCombination; non-negative and summing to 1.
  double reward_weight = 0.5;
  double nli_weight = 0.5;

  static absl::StatusOr<ScorerSpec> Create(
      ScorerKind kind,
      std::optional<std::pair<double, double>> weights = std::nullopt);
};

// Judges how private a candidate rewrite is with respect to the targeted
// segments and the full spec. Serves both as the one-step gate and as the
// tree-search reward.
class CandidateScorer {
 public:
  virtual ~CandidateScorer() = default;
  virtual absl::StatusOr<double> Score(
      std::string_view candidate, std::span<const AlignedSegment> targets,
      const PrivacySpec& spec) const = 0;
};

// Composition of a reward model and an NLI model.
//   RewardModel        reward endpoint score, clamped to [0, 1]
//   PrivacyNli         1 - max over spec statements of
//                      entailment(candidate, statement)
//   LinearCombination  weighted sum of the two
class PrivacyScorer : public CandidateScorer {
 public:
  // Models must outlive the scorer. A model the kind does not use may be
  // null.
  PrivacyScorer(ScorerSpec spec, const RewardModel* reward,
                const NliModel* nli)
      : spec_(spec), reward_(reward), nli_(nli) {}

  absl::StatusOr<double> Score(std::string_view candidate,
                               std::span<const AlignedSegment> targets,
                               const PrivacySpec& spec) const override;

  // Number of reward values that fell outside [0, 1] and were clamped.
  int clamp_count() const { return clamp_count_.load(); }

 private:
  absl::StatusOr<double> RewardPart(std::string_view candidate,
                                    std::span<const AlignedSegment> targets,
                                    const PrivacySpec& spec) const;
  absl::StatusOr<double> NliPart(std::string_view candidate,
                                 const PrivacySpec& spec) const;

  ScorerSpec spec_;
  const RewardModel* reward_;
  const NliModel* nli_;
  mutable std::atomic<int> clamp_count_{0};
};

// One-shot form of PrivacyScorer::Score for a single segment.
absl::StatusOr<double> ScoreReward(std::string_view candidate,
                                   const AlignedSegment& segment,
                                   const PrivacySpec& spec,
                                   const ScorerSpec& scorer,
                                   const RewardModel* reward,
                                   const NliModel* nli);

}  // namespace privrewrite

#endif  // PRIVREWRITE_BACKENDS_SCORER_H_
