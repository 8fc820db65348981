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

#include "privrewrite/backends/backend.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privrewrite {

absl::StatusOr<std::vector<std::string>> Generator::Generate(
    const RewritePrompt& prompt, int n) const {
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (n > kMaxSamplesPerCall) {
    return absl::InvalidArgumentError(
        absl::StrCat("n must be <= ", kMaxSamplesPerCall));
  }
  auto texts = DoGenerate(prompt, n);
  if (!texts.ok()) return texts.status();
  if (texts->empty()) {
    return absl::InternalError(
        absl::StrCat("generator ", Identity(), " returned no candidates"));
  }
  if (static_cast<int>(texts->size()) > n) texts->resize(n);
  return texts;
}

absl::StatusOr<double> RewardModel::Score(const RewardQuery& query) const {
  if (query.candidate.empty()) {
    return absl::InvalidArgumentError("reward candidate is empty");
  }
  return DoScore(query);
}

absl::StatusOr<double> NliModel::Entailment(std::string_view premise,
                                            std::string_view hypothesis) const {
  if (premise.empty() || hypothesis.empty()) {
    return absl::InvalidArgumentError("nli premise and hypothesis must be non-empty");
  }
  return DoEntailment(premise, hypothesis);
}

absl::StatusOr<std::vector<double>> Embedder::Embed(
    std::string_view text) const {
  if (text.empty()) return absl::InvalidArgumentError("cannot embed empty text");
  return DoEmbed(text);
}

absl::StatusOr<LogProbResult> LogProbModel::ScoreLogProb(
    std::string_view text) const {
  if (text.empty()) {
    return absl::InvalidArgumentError("cannot score empty text");
  }
  return DoScoreLogProb(text);
}

absl::StatusOr<LogProbResult> NoLogProbModel::DoScoreLogProb(
    std::string_view) const {
  return absl::UnimplementedError("backend does not expose log-probabilities");
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) return 0.0;
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string BackendSuite::Identity() const {
  auto name = [](const auto& p) { return p ? p->Identity() : "none"; };
  return absl::StrCat("generator=", name(generator), ";reward=", name(reward),
                      ";nli=", name(nli), ";embedder=", name(embedder),
                      ";logprob=", name(logprob));
}

}  // namespace privrewrite
