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

#ifndef PRIVREWRITE_BACKENDS_BACKEND_H_
#define PRIVREWRITE_BACKENDS_BACKEND_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/core/types.h"
#include "privrewrite/rewriter/prompt.h"

namespace privrewrite {

// Upper bound on candidates per generation call.
inline constexpr int kMaxSamplesPerCall = 64;

// Every backend is safe to call concurrently. Public entry points check
// preconditions and then dispatch to the Do* hook.

class Generator {
 public:
  virtual ~Generator() = default;

  // Returns between 1 and n candidate rewrites.
  absl::StatusOr<std::vector<std::string>> Generate(const RewritePrompt& prompt,
                                                    int n) const;
  virtual std::string Identity() const = 0;

 protected:
  virtual absl::StatusOr<std::vector<std::string>> DoGenerate(
      const RewritePrompt& prompt, int n) const = 0;
};

struct RewardQuery {
  std::string_view candidate;
  // Surfaces whose residual presence in candidate is being judged.
  std::span<const std::string> sensitive;
  const PrivacySpec* spec = nullptr;
};

// Scalar reward in [0, 1]; higher means less of the sensitive material
// survives in the candidate.
class RewardModel {
 public:
  virtual ~RewardModel() = default;
  absl::StatusOr<double> Score(const RewardQuery& query) const;
  virtual std::string Identity() const = 0;

 protected:
  virtual absl::StatusOr<double> DoScore(const RewardQuery& query) const = 0;
};

class NliModel {
 public:
  virtual ~NliModel() = default;
  // Probability that premise entails hypothesis.
  absl::StatusOr<double> Entailment(std::string_view premise,
                                    std::string_view hypothesis) const;
  virtual std::string Identity() const = 0;

 protected:
  virtual absl::StatusOr<double> DoEntailment(
      std::string_view premise, std::string_view hypothesis) const = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Unit-normalized vector.
  absl::StatusOr<std::vector<double>> Embed(std::string_view text) const;
  virtual std::string Identity() const = 0;

 protected:
  virtual absl::StatusOr<std::vector<double>> DoEmbed(
      std::string_view text) const = 0;
};

struct LogProbResult {
  double total_logprob = 0.0;
  size_t token_count = 0;
};

// Implementations without log-prob support return kUnimplemented; callers
// report the dependent metric as unavailable.
class LogProbModel {
 public:
  virtual ~LogProbModel() = default;
  absl::StatusOr<LogProbResult> ScoreLogProb(std::string_view text) const;
  virtual std::string Identity() const = 0;

 protected:
  virtual absl::StatusOr<LogProbResult> DoScoreLogProb(
      std::string_view text) const = 0;
};

class NoLogProbModel : public LogProbModel {
 public:
  std::string Identity() const override { return "none"; }

 protected:
  absl::StatusOr<LogProbResult> DoScoreLogProb(
      std::string_view text) const override;
};

double CosineSimilarity(std::span<const double> a, std::span<const double> b);

struct BackendSuite {
  std::shared_ptr<const Generator> generator;
  std::shared_ptr<const RewardModel> reward;
  std::shared_ptr<const NliModel> nli;
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const LogProbModel> logprob;

  std::string Identity() const;
};

}  // namespace privrewrite

#endif  // PRIVREWRITE_BACKENDS_BACKEND_H_
