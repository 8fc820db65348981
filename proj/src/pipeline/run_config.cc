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

#include "privrewrite/pipeline/run_config.h"

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privrewrite/core/absl_compat.h"

namespace privrewrite {
namespace {

constexpr std::array<std::string_view, 32> kRunKeys = {
    "align_scorer",
    "align_threshold",
    "max_span_length",
    "monitor",
    "reward",
    "scorer_reward_weight",
    "scorer_nli_weight",
    "workers",
    "max_sentences",
    "nli_cutoff",
    "prompt_template",
    "http_base_url",
    "http_generator_model",
    "http_judge_model",
    "http_embedding_model",
    "http_logprob_model",
    "http_timeout_ms",
    "http_max_retries",
    "http_retry_backoff_ms",
    "http_max_in_flight",
    "http_auth_token_env",
    "http_temperature",
    "http_supports_logprobs",
    "http_reward_min",
    "http_reward_max",
    "mock_hypernyms",
    "mock_embedder_seed",
    "mock_logprob_vocabulary",
    "cost_p_ours",
    "cost_p_base",
    "cost_c_ours",
    "cost_c_base",
};

const std::vector<std::string_view>& AllKeys() {
  static const auto* keys = [] {
    auto* v = new std::vector<std::string_view>(SearchConfigKeys().begin(),
                                                SearchConfigKeys().end());
    v->insert(v->end(), kRunKeys.begin(), kRunKeys.end());
    return v;
  }();
  return *keys;
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const std::string* Find(std::string_view key) const {
    auto it = raw_.find(std::string(key));
    return it == raw_.end() ? nullptr : &it->second;
  }

  absl::Status Int(std::string_view key, int min, int& out) const {
    const std::string* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    int value = 0;
    if (!absl::SimpleAtoi(*v, &value)) {
      return Error(key, absl::StrCat("must be an integer, got '", *v, "'"));
    }
    if (value < min) return Error(key, absl::StrCat("must be >= ", min));
    out = value;
    return absl::OkStatus();
  }

  absl::Status Real(std::string_view key, double& out) const {
    const std::string* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    double value = 0;
    if (!absl::SimpleAtod(*v, &value) || !std::isfinite(value)) {
      return Error(key, absl::StrCat("must be a finite real, got '", *v, "'"));
    }
    out = value;
    return absl::OkStatus();
  }

  absl::Status Bool(std::string_view key, bool& out) const {
    const std::string* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!absl::SimpleAtob(*v, &out)) {
      return Error(key, absl::StrCat("must be true or false, got '", *v, "'"));
    }
    return absl::OkStatus();
  }

  void String(std::string_view key, std::string& out) const {
    if (const std::string* v = Find(key)) out = *v;
  }

  static absl::Status Error(std::string_view key, std::string_view message) {
    return absl::InvalidArgumentError(
        absl::StrCat(Sv(key), " ", Sv(message)));
  }

 private:
  const RawConfig& raw_;
};

std::string Real(double v) { return absl::StrFormat("%.17g", v); }

}  // namespace

std::string_view AlignScorerName(AlignScorerKind kind) {
  return kind == AlignScorerKind::kCosine ? "cosine" : "reward_model";
}

std::span<const std::string_view> RunConfigKeys() { return AllKeys(); }

absl::StatusOr<RunConfig> ParseRunConfig(const RawConfig& raw) {
  const std::set<std::string_view> search_keys(SearchConfigKeys().begin(),
                                               SearchConfigKeys().end());
  const std::set<std::string_view> known(AllKeys().begin(), AllKeys().end());
  RawConfig search_raw;
  for (const auto& [key, value] : raw) {
    if (!known.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
    if (search_keys.contains(key)) search_raw[key] = value;
  }
  RunConfig cfg;
  auto search = ValidateConfig(search_raw);
  if (!search.ok()) return search.status();
  cfg.search = *search;

  const Reader r(raw);
  if (const std::string* v = r.Find("align_scorer")) {
    if (*v == "cosine") {
      cfg.align_scorer = AlignScorerKind::kCosine;
    } else if (*v == "reward_model") {
      cfg.align_scorer = AlignScorerKind::kRewardModel;
    } else {
      return Reader::Error("align_scorer", "must be cosine or reward_model");
    }
  }
  if (r.Find("align_threshold") != nullptr) {
    double t = 0;
    if (auto s = r.Real("align_threshold", t); !s.ok()) return s;
    if (t < 0.0 || t > 1.0) {
      return Reader::Error("align_threshold", "must be within [0, 1]");
    }
    cfg.align_threshold = t;
  }
  if (auto s = r.Int("max_span_length", 1, cfg.max_span_length); !s.ok()) {
    return s;
  }

  std::optional<std::pair<double, double>> weights;
  if (r.Find("scorer_reward_weight") != nullptr ||
      r.Find("scorer_nli_weight") != nullptr) {
    double rw = 0.5, nw = 0.5;
    if (auto s = r.Real("scorer_reward_weight", rw); !s.ok()) return s;
    if (auto s = r.Real("scorer_nli_weight", nw); !s.ok()) return s;
    weights = std::make_pair(rw, nw);
  }
  for (auto [key, out] : {std::pair{"monitor", &cfg.monitor},
                          std::pair{"reward", &cfg.reward}}) {
    ScorerKind kind = ScorerKind::kRewardModel;
    if (const std::string* v = r.Find(key)) {
      auto parsed = ParseScorerKind(*v);
      if (!parsed.ok()) return Reader::Error(key, StdSv(parsed.status().message()));
      kind = *parsed;
    }
    auto spec = ScorerSpec::Create(
        kind, kind == ScorerKind::kLinearCombination ? weights : std::nullopt);
    if (!spec.ok()) return spec.status();
    *out = *spec;
  }

  if (auto s = r.Int("workers", 1, cfg.workers); !s.ok()) return s;
  if (r.Find("max_sentences") != nullptr) {
    int n = 0;
    if (auto s = r.Int("max_sentences", 1, n); !s.ok()) return s;
    cfg.max_sentences = n;
  }
  if (auto s = r.Real("nli_cutoff", cfg.nli_cutoff); !s.ok()) return s;
  if (cfg.nli_cutoff <= 0.0 || cfg.nli_cutoff > 1.0) {
    return Reader::Error("nli_cutoff", "must be within (0, 1]");
  }
  r.String("prompt_template", cfg.prompt_template_path);

  HttpSettings& h = cfg.http;
  r.String("http_base_url", h.base_url);
  r.String("http_generator_model", h.generator_model);
  r.String("http_judge_model", h.judge_model);
  r.String("http_embedding_model", h.embedding_model);
  r.String("http_logprob_model", h.logprob_model);
  r.String("http_auth_token_env", h.auth_token_env);
  if (auto s = r.Int("http_timeout_ms", 1, h.timeout_ms); !s.ok()) return s;
  if (auto s = r.Int("http_max_retries", 0, h.max_retries); !s.ok()) return s;
  if (auto s = r.Int("http_retry_backoff_ms", 0, h.retry_backoff_ms); !s.ok()) {
    return s;
  }
  if (auto s = r.Int("http_max_in_flight", 1, h.max_in_flight); !s.ok()) {
    return s;
  }
  if (auto s = r.Real("http_temperature", h.temperature); !s.ok()) return s;
  if (auto s = r.Bool("http_supports_logprobs", h.supports_logprobs); !s.ok()) {
    return s;
  }
  if (auto s = r.Real("http_reward_min", h.reward_min); !s.ok()) return s;
  if (auto s = r.Real("http_reward_max", h.reward_max); !s.ok()) return s;
  if (h.reward_max <= h.reward_min) {
    return Reader::Error("http_reward_max", "must exceed http_reward_min");
  }

  r.String("mock_hypernyms", cfg.mock.hypernyms_path);
  if (const std::string* v = r.Find("mock_embedder_seed")) {
    if (!absl::SimpleAtoi(*v, &cfg.mock.embedder_seed)) {
      return Reader::Error("mock_embedder_seed", "must be an unsigned integer");
    }
  }
  if (auto s = r.Real("mock_logprob_vocabulary", cfg.mock.logprob_vocabulary);
      !s.ok()) {
    return s;
  }
  if (cfg.mock.logprob_vocabulary != 0.0 && cfg.mock.logprob_vocabulary <= 1.0) {
    return Reader::Error("mock_logprob_vocabulary", "must be 0 or > 1");
  }

  const std::array<std::string_view, 4> cost_keys = {
      "cost_p_ours", "cost_p_base", "cost_c_ours", "cost_c_base"};
  size_t cost_present = 0;
  for (std::string_view key : cost_keys) cost_present += r.Find(key) ? 1 : 0;
  if (cost_present != 0) {
    if (cost_present != cost_keys.size()) {
      return absl::InvalidArgumentError(
          "cost inputs need all of cost_p_ours, cost_p_base, cost_c_ours, "
          "cost_c_base");
    }
    CostInputs in;
    if (auto s = r.Real("cost_p_ours", in.p_ours); !s.ok()) return s;
    if (auto s = r.Real("cost_p_base", in.p_base); !s.ok()) return s;
    if (auto s = r.Real("cost_c_ours", in.c_ours); !s.ok()) return s;
    if (auto s = r.Real("cost_c_base", in.c_base); !s.ok()) return s;
    cfg.cost = in;
  }
  return cfg;
}

RawConfig SerializeRunConfig(const RunConfig& cfg) {
  RawConfig raw = SerializeConfig(cfg.search);
  raw["align_scorer"] = std::string(AlignScorerName(cfg.align_scorer));
  if (cfg.align_threshold) raw["align_threshold"] = Real(*cfg.align_threshold);
  raw["max_span_length"] = absl::StrCat(cfg.max_span_length);
  raw["monitor"] = std::string(ScorerKindName(cfg.monitor.kind));
  raw["reward"] = std::string(ScorerKindName(cfg.reward.kind));
  for (const ScorerSpec* spec : {&cfg.monitor, &cfg.reward}) {
    if (spec->kind == ScorerKind::kLinearCombination) {
      raw["scorer_reward_weight"] = Real(spec->reward_weight);
      raw["scorer_nli_weight"] = Real(spec->nli_weight);
    }
  }
  raw["workers"] = absl::StrCat(cfg.workers);
  if (cfg.max_sentences) raw["max_sentences"] = absl::StrCat(*cfg.max_sentences);
  raw["nli_cutoff"] = Real(cfg.nli_cutoff);
  if (!cfg.prompt_template_path.empty()) {
    raw["prompt_template"] = cfg.prompt_template_path;
  }
  const HttpSettings& h = cfg.http;
  raw["http_base_url"] = h.base_url;
  raw["http_generator_model"] = h.generator_model;
  raw["http_judge_model"] = h.judge_model;
  raw["http_embedding_model"] = h.embedding_model;
  raw["http_logprob_model"] = h.logprob_model;
  raw["http_timeout_ms"] = absl::StrCat(h.timeout_ms);
  raw["http_max_retries"] = absl::StrCat(h.max_retries);
  raw["http_retry_backoff_ms"] = absl::StrCat(h.retry_backoff_ms);
  raw["http_max_in_flight"] = absl::StrCat(h.max_in_flight);
  raw["http_auth_token_env"] = h.auth_token_env;
  raw["http_temperature"] = Real(h.temperature);
  raw["http_supports_logprobs"] = h.supports_logprobs ? "true" : "false";
  raw["http_reward_min"] = Real(h.reward_min);
  raw["http_reward_max"] = Real(h.reward_max);
  raw["mock_hypernyms"] = cfg.mock.hypernyms_path;
  raw["mock_embedder_seed"] = absl::StrCat(cfg.mock.embedder_seed);
  raw["mock_logprob_vocabulary"] = Real(cfg.mock.logprob_vocabulary);
  if (cfg.cost) {
    raw["cost_p_ours"] = Real(cfg.cost->p_ours);
    raw["cost_p_base"] = Real(cfg.cost->p_base);
    raw["cost_c_ours"] = Real(cfg.cost->c_ours);
    raw["cost_c_base"] = Real(cfg.cost->c_base);
  }
  return raw;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::optional<std::string>& path,
                                        const EnvLookup& lookup) {
  RawConfig raw;
  if (path.has_value()) {
    auto loaded = LoadConfigFile(*path);
    if (!loaded.ok()) return loaded.status();
    raw = *std::move(loaded);
  }
  ApplyEnvironmentOverrides(raw, RunConfigKeys(), lookup);
  return ParseRunConfig(raw);
}

}  // namespace privrewrite
