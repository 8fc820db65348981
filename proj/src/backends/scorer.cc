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

#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/absl_compat.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privrewrite {

std::string_view ScorerKindName(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kRewardModel:
      return "reward_model";
    case ScorerKind::kPrivacyNli:
      return "privacy_nli";
    case ScorerKind::kLinearCombination:
      return "linear_combination";
  }
  return "unknown";
}

absl::StatusOr<ScorerKind> ParseScorerKind(std::string_view name) {
  for (ScorerKind kind :
       {ScorerKind::kRewardModel, ScorerKind::kPrivacyNli,
        ScorerKind::kLinearCombination}) {
    if (ScorerKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown scorer kind '", Sv(name), "'"));
}

absl::StatusOr<ScorerSpec> ScorerSpec::Create(
    ScorerKind kind, std::optional<std::pair<double, double>> weights) {
  ScorerSpec spec;
  spec.kind = kind;
  if (weights.has_value()) {
    const auto [w_reward, w_nli] = *weights;
    if (!(w_reward >= 0.0) || !(w_nli >= 0.0)) {
      return absl::InvalidArgumentError("scorer weights must be non-negative");
    }
    if (std::abs(w_reward + w_nli - 1.0) > 1e-9) {
      return absl::InvalidArgumentError("scorer weights must sum to 1");
    }
    spec.reward_weight = w_reward;
    spec.nli_weight = w_nli;
  }
  return spec;
}

absl::StatusOr<double> PrivacyScorer::RewardPart(
    std::string_view candidate, std::span<const AlignedSegment> targets,
    const PrivacySpec& spec) const {
  if (reward_ == nullptr) {
    return absl::FailedPreconditionError("scorer needs a reward model");
  }
  std::vector<std::string> sensitive;
  sensitive.reserve(targets.size());
  for (const AlignedSegment& t : targets) sensitive.push_back(t.surface);
  auto raw = reward_->Score(RewardQuery{
      .candidate = candidate, .sensitive = sensitive, .spec = &spec});
  if (!raw.ok()) return raw.status();
  if (std::isnan(*raw)) {
    return absl::InternalError("reward model returned NaN");
  }
  if (*raw < 0.0 || *raw > 1.0) {
    clamp_count_.fetch_add(1);
    return std::clamp(*raw, 0.0, 1.0);
  }
  return *raw;
}

absl::StatusOr<double> PrivacyScorer::NliPart(std::string_view candidate,
                                              const PrivacySpec& spec) const {
  if (nli_ == nullptr) {
    return absl::FailedPreconditionError("scorer needs an NLI model");
  }
  double max_entailment = 0.0;
  for (const std::string& statement : spec.Statements()) {
    auto p = nli_->Entailment(candidate, statement);
    if (!p.ok()) return p.status();
    max_entailment = std::max(max_entailment, std::clamp(*p, 0.0, 1.0));
  }
  return 1.0 - max_entailment;
}

absl::StatusOr<double> PrivacyScorer::Score(
    std::string_view candidate, std::span<const AlignedSegment> targets,
    const PrivacySpec& spec) const {
  // Nothing is left to leak.
  if (candidate.empty()) return 1.0;
  switch (spec_.kind) {
    case ScorerKind::kRewardModel:
      return RewardPart(candidate, targets, spec);
    case ScorerKind::kPrivacyNli:
      return NliPart(candidate, spec);
    case ScorerKind::kLinearCombination: {
      auto r = RewardPart(candidate, targets, spec);
      if (!r.ok()) return r.status();
      auto n = NliPart(candidate, spec);
      if (!n.ok()) return n.status();
      return spec_.reward_weight * *r + spec_.nli_weight * *n;
    }
  }
  return absl::InternalError("unhandled scorer kind");
}

absl::StatusOr<double> ScoreReward(std::string_view candidate,
                                   const AlignedSegment& segment,
                                   const PrivacySpec& spec,
                                   const ScorerSpec& scorer,
                                   const RewardModel* reward,
                                   const NliModel* nli) {
  PrivacyScorer composed(scorer, reward, nli);
  return composed.Score(candidate, std::span<const AlignedSegment>(&segment, 1),
                        spec);
}

}  // namespace privrewrite
