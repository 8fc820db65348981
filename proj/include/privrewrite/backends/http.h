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

#ifndef PRIVREWRITE_BACKENDS_HTTP_H_
#define PRIVREWRITE_BACKENDS_HTTP_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "privrewrite/backends/backend.h"

// Adapters for OpenAI-style inference servers (vLLM, llama.cpp server,
// text-generation-inference and the like) running on the local machine.

namespace privrewrite {

struct BackendEndpoint {
  // e.g. http://127.0.0.1:8000/v1
  std::string base_url;
  std::string model_name;
  std::chrono::milliseconds timeout{60000};
  int max_retries = 2;
  // Name of the environment variable holding the bearer token; empty means
  // no Authorization header.
  std::string auth_token_env;
  std::chrono::milliseconds retry_backoff{250};
  int max_in_flight = 4;
  double temperature = 0.7;
  int max_tokens = 128;
  bool supports_logprobs = false;
  // Raw reward-endpoint scores are min-max normalized against these.
  double reward_min = 0.0;
  double reward_max = 1.0;

  absl::Status Validate() const;
};

// JSON over HTTP with bounded retries and a cap on in-flight requests.
// Transport failures and 5xx responses are retried up to max_retries times;
// 4xx responses are returned at once.
class HttpTransport {
 public:
  static absl::StatusOr<std::shared_ptr<HttpTransport>> Create(
      BackendEndpoint endpoint);

  absl::StatusOr<nlohmann::json> PostJson(std::string_view path,
                                          const nlohmann::json& body) const;
  // GET {base_url}/models; used to fail fast before a run.
  absl::Status Probe() const;

  const BackendEndpoint& endpoint() const { return endpoint_; }
  // Total HTTP attempts made so far, retries included.
  int attempt_count() const { return attempts_.load(); }

 private:
  HttpTransport(BackendEndpoint endpoint, std::string origin,
                std::string path_prefix);

  BackendEndpoint endpoint_;
  std::string origin_;
  std::string path_prefix_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
  mutable std::atomic<int> attempts_{0};
};

// POST /chat/completions with n samples.
class HttpGenerator : public Generator {
 public:
  explicit HttpGenerator(std::shared_ptr<const HttpTransport> transport)
      : transport_(std::move(transport)) {}
  std::string Identity() const override;

 protected:
  absl::StatusOr<std::vector<std::string>> DoGenerate(
      const RewritePrompt& prompt, int n) const override;

 private:
  std::shared_ptr<const HttpTransport> transport_;
};

// Asks a judge model for a scalar over chat completions and normalizes it
// with the endpoint's reward bounds.
class HttpRewardModel : public RewardModel {
 public:
  explicit HttpRewardModel(std::shared_ptr<const HttpTransport> transport)
      : transport_(std::move(transport)) {}
  std::string Identity() const override;

 protected:
  absl::StatusOr<double> DoScore(const RewardQuery& query) const override;

 private:
  std::shared_ptr<const HttpTransport> transport_;
};

class HttpNliModel : public NliModel {
 public:
  explicit HttpNliModel(std::shared_ptr<const HttpTransport> transport)
      : transport_(std::move(transport)) {}
  std::string Identity() const override;

 protected:
  absl::StatusOr<double> DoEntailment(
      std::string_view premise, std::string_view hypothesis) const override;

 private:
  std::shared_ptr<const HttpTransport> transport_;
};

// POST /embeddings.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(std::shared_ptr<const HttpTransport> transport)
      : transport_(std::move(transport)) {}
  std::string Identity() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoEmbed(
      std::string_view text) const override;

 private:
  std::shared_ptr<const HttpTransport> transport_;
};

// POST /completions with echo and logprobs. Returns kUnimplemented unless
// the endpoint is declared to support log-probabilities.
class HttpLogProbModel : public LogProbModel {
 public:
  explicit HttpLogProbModel(std::shared_ptr<const HttpTransport> transport)
      : transport_(std::move(transport)) {}
  std::string Identity() const override;

 protected:
  absl::StatusOr<LogProbResult> DoScoreLogProb(
      std::string_view text) const override;

 private:
  std::shared_ptr<const HttpTransport> transport_;
};

// First decimal number in a model reply.
absl::StatusOr<double> ParseLeadingNumber(std::string_view reply);

}  // namespace privrewrite

#endif  // PRIVREWRITE_BACKENDS_HTTP_H_
