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

#ifndef PRIVREWRITE_PIPELINE_RUN_CONFIG_H_
#define PRIVREWRITE_PIPELINE_RUN_CONFIG_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/config.h"
#include "privrewrite/eval/cost.h"

namespace privrewrite {

enum class AlignScorerKind { kCosine, kRewardModel };

std::string_view AlignScorerName(AlignScorerKind kind);

// Endpoint settings shared by all HTTP roles. Role model names fall back to
// generator_model when empty.
struct HttpSettings {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string generator_model;
  std::string judge_model;
  std::string embedding_model;
  std::string logprob_model;
  int timeout_ms = 60000;
  int max_retries = 2;
  int retry_backoff_ms = 250;
  int max_in_flight = 4;
  std::string auth_token_env;
  double temperature = 0.7;
  bool supports_logprobs = false;
  double reward_min = 0.0;
  double reward_max = 1.0;
};

struct MockSettings {
  // JSON object mapping segment surfaces to their obscured form.
  std::string hypernyms_path;
  uint64_t embedder_seed = 0;
  // Zero disables log-probabilities.
  double logprob_vocabulary = 0.0;
};

struct RunConfig {
  SearchConfig search;
  AlignScorerKind align_scorer = AlignScorerKind::kRewardModel;
  // Scorer default when absent.
  std::optional<double> align_threshold;
  int max_span_length = 4;
  // One-step gate and node reward.
  ScorerSpec monitor;
  ScorerSpec reward;
  int workers = 4;
  // Rewrite only the first N sentences of each record.
  std::optional<int> max_sentences;
  double nli_cutoff = 0.5;
  std::string prompt_template_path;
  HttpSettings http;
  MockSettings mock;
  std::optional<CostInputs> cost;
};

// Every key ParseRunConfig accepts, search keys included.
std::span<const std::string_view> RunConfigKeys();

absl::StatusOr<RunConfig> ParseRunConfig(const RawConfig& raw);
RawConfig SerializeRunConfig(const RunConfig& config);

// Reads the optional file, then applies PRIVREWRITE_<KEY> overrides.
absl::StatusOr<RunConfig> LoadRunConfig(const std::optional<std::string>& path,
                                        const EnvLookup& lookup);

}  // namespace privrewrite

#endif  // PRIVREWRITE_PIPELINE_RUN_CONFIG_H_
