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

#include "privrewrite/backends/http.h"
#include "privrewrite/core/absl_compat.h"

#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/strip.h"
#include "httplib.h"

namespace privrewrite {
namespace {

using nlohmann::json;

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

absl::StatusOr<std::string> FirstMessageContent(const json& response) {
  if (!response.contains("choices") || !response["choices"].is_array() ||
      response["choices"].empty()) {
    return absl::InternalError("response has no choices");
  }
  const json& choice = response["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content") ||
      !choice["message"]["content"].is_string()) {
    return absl::InternalError("choice has no message content");
  }
  return choice["message"]["content"].get<std::string>();
}

json ChatBody(const BackendEndpoint& ep, std::string_view content, int n,
              double temperature, int max_tokens) {
  return json{{"model", ep.model_name},
              {"messages", json::array({json{{"role", "user"},
                                             {"content", content}}})},
              {"n", n},
              {"temperature", temperature},
              {"max_tokens", max_tokens}};
}

}  // namespace

absl::Status BackendEndpoint::Validate() const {
  if (base_url.empty()) return absl::InvalidArgumentError("base_url is empty");
  if (timeout.count() <= 0) {
    return absl::InvalidArgumentError("timeout must be > 0");
  }
  if (max_retries < 0) {
    return absl::InvalidArgumentError("max_retries must be >= 0");
  }
  if (max_in_flight < 1) {
    return absl::InvalidArgumentError("max_in_flight must be >= 1");
  }
  if (!(reward_max > reward_min)) {
    return absl::InvalidArgumentError("reward_max must exceed reward_min");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::shared_ptr<HttpTransport>> HttpTransport::Create(
    BackendEndpoint endpoint) {
  if (auto s = endpoint.Validate(); !s.ok()) return s;
  std::string_view url = endpoint.base_url;
  if (!absl::StartsWith(Sv(url), "http://")) {
    return absl::InvalidArgumentError(
        absl::StrCat("only http:// endpoints are supported, got ", Sv(url)));
  }
  const size_t host_begin = std::string_view("http://").size();
  const size_t slash = url.find('/', host_begin);
  std::string origin(url.substr(0, slash));
  std::string prefix =
      slash == std::string_view::npos ? "" : std::string(url.substr(slash));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return std::shared_ptr<HttpTransport>(new HttpTransport(
      std::move(endpoint), std::move(origin), std::move(prefix)));
}

HttpTransport::HttpTransport(BackendEndpoint endpoint, std::string origin,
                             std::string path_prefix)
    : endpoint_(std::move(endpoint)),
      origin_(std::move(origin)),
      path_prefix_(std::move(path_prefix)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(
          endpoint_.max_in_flight)) {}

absl::StatusOr<json> HttpTransport::PostJson(std::string_view path,
                                             const json& body) const {
  SlotGuard slot(*in_flight_);
  const std::string full_path = absl::StrCat(path_prefix_, Sv(path));
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!endpoint_.auth_token_env.empty()) {
    if (const char* token = std::getenv(endpoint_.auth_token_env.c_str())) {
      headers.emplace("Authorization", absl::StrCat("Bearer ", token));
    }
  }
  absl::Status last = absl::UnavailableError("no attempt made");
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0 && endpoint_.retry_backoff.count() > 0) {
      std::this_thread::sleep_for(endpoint_.retry_backoff * (1 << (attempt - 1)));
    }
    attempts_.fetch_add(1);
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
        endpoint_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto result = client.Post(full_path, headers, payload, "application/json");
    if (!result) {
      last = absl::UnavailableError(
          absl::StrCat("transport error talking to ", origin_, full_path, ": ",
                       httplib::to_string(result.error())));
      continue;
    }
    const int status = result->status;
    if (status >= 500) {
      last = absl::UnavailableError(absl::StrCat(
          "HTTP ", status, " from ", origin_, full_path, ": ", result->body));
      continue;
    }
    if (status >= 400) {
      return absl::InvalidArgumentError(absl::StrCat(
          "HTTP ", status, " from ", origin_, full_path, ": ", result->body));
    }
    json parsed = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
      return absl::InternalError(
          absl::StrCat("malformed JSON from ", origin_, full_path));
    }
    return parsed;
  }
  return absl::Status(last.code(),
                      absl::StrCat(last.message(), " (",
                                   endpoint_.max_retries + 1, " attempts)"));
}

absl::Status HttpTransport::Probe() const {
  httplib::Client client(origin_);
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  client.set_connection_timeout(std::max<long>(1, secs.count()), 0);
  auto result = client.Get(absl::StrCat(path_prefix_, "/models"));
  if (!result) {
    return absl::UnavailableError(
        absl::StrCat("cannot reach ", endpoint_.base_url, ": ",
                     httplib::to_string(result.error())));
  }
  if (result->status >= 500) {
    return absl::UnavailableError(absl::StrCat(
        "endpoint ", endpoint_.base_url, " answered HTTP ", result->status));
  }
  return absl::OkStatus();
}

std::string HttpGenerator::Identity() const {
  return absl::StrCat("http-generator:", transport_->endpoint().model_name, "@",
                      transport_->endpoint().base_url);
}

absl::StatusOr<std::vector<std::string>> HttpGenerator::DoGenerate(
    const RewritePrompt& prompt, int n) const {
  const BackendEndpoint& ep = transport_->endpoint();
  auto response =
      transport_->PostJson("/chat/completions",
                           ChatBody(ep, prompt.instruction_text, n,
                                    ep.temperature, ep.max_tokens));
  if (!response.ok()) return response.status();
  if (!response->contains("choices") || !(*response)["choices"].is_array()) {
    return absl::InternalError("response has no choices");
  }
  std::vector<std::string> out;
  for (const json& choice : (*response)["choices"]) {
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
      continue;
    }
    std::string text(absl::StripAsciiWhitespace(
        choice["message"]["content"].get<std::string>()));
    if (!text.empty()) out.push_back(std::move(text));
  }
  if (out.empty()) return absl::InternalError("empty generation response");
  return out;
}

std::string HttpRewardModel::Identity() const {
  return absl::StrCat("http-reward:", transport_->endpoint().model_name, "@",
                      transport_->endpoint().base_url);
}

absl::StatusOr<double> HttpRewardModel::DoScore(const RewardQuery& query) const {
  const BackendEndpoint& ep = transport_->endpoint();
  std::string details = absl::StrJoin(query.sensitive, "; ");
  if (query.spec != nullptr) {
    if (!details.empty()) details += "; ";
    details += absl::StrJoin(query.spec->Statements(), "; ");
  }
  const std::string content = absl::StrCat(
      "Score how well the text below hides the following private details. "
      "Use a number between ",
      ep.reward_min, " (details fully revealed) and ", ep.reward_max,
      " (nothing revealed, text still natural).\nPrivate details: ", details,
      "\nText: ", Sv(query.candidate), "\nReply with the number only.");
  auto response = transport_->PostJson(
      "/chat/completions", ChatBody(ep, content, 1, 0.0, 16));
  if (!response.ok()) return response.status();
  auto reply = FirstMessageContent(*response);
  if (!reply.ok()) return reply.status();
  auto raw = ParseLeadingNumber(*reply);
  if (!raw.ok()) return raw.status();
  return (*raw - ep.reward_min) / (ep.reward_max - ep.reward_min);
}

std::string HttpNliModel::Identity() const {
  return absl::StrCat("http-nli:", transport_->endpoint().model_name, "@",
                      transport_->endpoint().base_url);
}

absl::StatusOr<double> HttpNliModel::DoEntailment(
    std::string_view premise, std::string_view hypothesis) const {
  const std::string content = absl::StrCat(
      "Premise: ", Sv(premise), "\nHypothesis: ", Sv(hypothesis),
      "\nWhat is the probability, between 0 and 1, that the premise entails "
      "the hypothesis? Reply with the number only.");
  auto response = transport_->PostJson(
      "/chat/completions",
      ChatBody(transport_->endpoint(), content, 1, 0.0, 16));
  if (!response.ok()) return response.status();
  auto reply = FirstMessageContent(*response);
  if (!reply.ok()) return reply.status();
  auto p = ParseLeadingNumber(*reply);
  if (!p.ok()) return p.status();
  return std::clamp(*p, 0.0, 1.0);
}

std::string HttpEmbedder::Identity() const {
  return absl::StrCat("http-embedder:", transport_->endpoint().model_name, "@",
                      transport_->endpoint().base_url);
}

absl::StatusOr<std::vector<double>> HttpEmbedder::DoEmbed(
    std::string_view text) const {
  auto response = transport_->PostJson(
      "/embeddings",
      json{{"model", transport_->endpoint().model_name}, {"input", text}});
  if (!response.ok()) return response.status();
  const json& r = *response;
  if (!r.contains("data") || !r["data"].is_array() || r["data"].empty() ||
      !r["data"][0].contains("embedding") ||
      !r["data"][0]["embedding"].is_array()) {
    return absl::InternalError("embedding response has no data[0].embedding");
  }
  std::vector<double> v;
  for (const json& x : r["data"][0]["embedding"]) {
    if (!x.is_number()) return absl::InternalError("non-numeric embedding");
    v.push_back(x.get<double>());
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  if (v.empty() || norm == 0) {
    return absl::InternalError("embedding is empty or zero");
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::string HttpLogProbModel::Identity() const {
  return absl::StrCat("http-logprob:", transport_->endpoint().model_name, "@",
                      transport_->endpoint().base_url);
}

absl::StatusOr<LogProbResult> HttpLogProbModel::DoScoreLogProb(
    std::string_view text) const {
  const BackendEndpoint& ep = transport_->endpoint();
  if (!ep.supports_logprobs) {
    return absl::UnimplementedError(absl::StrCat(
        "endpoint ", ep.base_url, " is not configured for log-probabilities"));
  }
  auto response = transport_->PostJson(
      "/completions", json{{"model", ep.model_name},
                           {"prompt", text},
                           {"max_tokens", 1},
                           {"temperature", 0.0},
                           {"echo", true},
                           {"logprobs", 0}});
  if (!response.ok()) return response.status();
  const json& r = *response;
  if (!r.contains("choices") || r["choices"].empty() ||
      !r["choices"][0].contains("logprobs") ||
      !r["choices"][0]["logprobs"].is_object()) {
    return absl::UnimplementedError("endpoint returned no logprobs");
  }
  const json& lp = r["choices"][0]["logprobs"];
  if (!lp.contains("token_logprobs") || !lp["token_logprobs"].is_array()) {
    return absl::UnimplementedError("endpoint returned no token_logprobs");
  }
  const json& values = lp["token_logprobs"];
  const bool has_offsets =
      lp.contains("text_offset") && lp["text_offset"].is_array() &&
      lp["text_offset"].size() == values.size();
  LogProbResult result;
  for (size_t i = 0; i < values.size(); ++i) {
    // The echoed prompt comes first; skip the generated tail.
    if (has_offsets && lp["text_offset"][i].get<size_t>() >= text.size()) break;
    if (!values[i].is_number()) continue;
    result.total_logprob += values[i].get<double>();
    ++result.token_count;
  }
  if (result.token_count == 0) {
    return absl::InternalError("no scored prompt tokens in logprob response");
  }
  return result;
}

absl::StatusOr<double> ParseLeadingNumber(std::string_view reply) {
  static const std::regex kNumber(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
  std::cmatch match;
  if (!std::regex_search(reply.data(), reply.data() + reply.size(), match,
                         kNumber)) {
    return absl::InternalError(
        absl::StrCat("no number in model reply '", Sv(reply), "'"));
  }
  double value = 0;
  if (!absl::SimpleAtod(match.str(), &value)) {
    return absl::InternalError(
        absl::StrCat("cannot parse number '", match.str(), "'"));
  }
  return value;
}

}  // namespace privrewrite
