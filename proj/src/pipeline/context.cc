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

#include "privrewrite/pipeline/context.h"

#include <fstream>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "privrewrite/backends/http.h"
#include "privrewrite/backends/mock.h"
#include "privrewrite/core/absl_compat.h"

namespace privrewrite {
namespace {

absl::StatusOr<std::map<std::string, std::string>> LoadHypernyms(
    const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": hypernyms must be a JSON object"));
  }
  for (const auto& [surface, general] : doc.items()) {
    if (!general.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": hypernym for '", surface, "' is not a string"));
    }
    out[surface] = general.get<std::string>();
  }
  return out;
}

BackendEndpoint Endpoint(const HttpSettings& h, const std::string& model) {
  BackendEndpoint ep;
  ep.base_url = h.base_url;
  ep.model_name = model.empty() ? h.generator_model : model;
  ep.timeout = std::chrono::milliseconds(h.timeout_ms);
  ep.max_retries = h.max_retries;
  ep.auth_token_env = h.auth_token_env;
  ep.retry_backoff = std::chrono::milliseconds(h.retry_backoff_ms);
  ep.max_in_flight = h.max_in_flight;
  ep.temperature = h.temperature;
  ep.supports_logprobs = h.supports_logprobs;
  ep.reward_min = h.reward_min;
  ep.reward_max = h.reward_max;
  return ep;
}

absl::StatusOr<BackendSuite> MakeHttpSuite(const RunConfig& cfg) {
  const HttpSettings& h = cfg.http;
  if (h.generator_model.empty()) {
    return absl::InvalidArgumentError(
        "http backend needs http_generator_model");
  }
  BackendEndpoint gen_ep = Endpoint(h, h.generator_model);
  gen_ep.max_tokens = cfg.search.max_tokens;
  auto gen = HttpTransport::Create(gen_ep);
  if (!gen.ok()) return gen.status();
  auto judge = HttpTransport::Create(Endpoint(h, h.judge_model));
  if (!judge.ok()) return judge.status();
  auto embed = HttpTransport::Create(Endpoint(h, h.embedding_model));
  if (!embed.ok()) return embed.status();
  auto logprob = HttpTransport::Create(Endpoint(h, h.logprob_model));
  if (!logprob.ok()) return logprob.status();
  // All roles share one server.
  if (auto s = (*gen)->Probe(); !s.ok()) return s;

  BackendSuite suite;
  suite.generator = std::make_shared<HttpGenerator>(*gen);
  suite.reward = std::make_shared<HttpRewardModel>(*judge);
  suite.nli = std::make_shared<HttpNliModel>(*judge);
  suite.embedder = std::make_shared<HttpEmbedder>(*embed);
  if (h.supports_logprobs) {
    suite.logprob = std::make_shared<HttpLogProbModel>(*logprob);
  } else {
    suite.logprob = std::make_shared<NoLogProbModel>();
  }
  return suite;
}

}  // namespace

std::string_view BackendKindName(BackendKind kind) {
  return kind == BackendKind::kMock ? "mock" : "http";
}

absl::StatusOr<BackendKind> ParseBackendKind(std::string_view name) {
  if (name == "mock") return BackendKind::kMock;
  if (name == "http") return BackendKind::kHttp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown backend '", Sv(name), "' (http|mock)"));
}

absl::StatusOr<BackendSuite> MakeBackendSuite(BackendKind kind,
                                              const RunConfig& cfg) {
  if (kind == BackendKind::kHttp) return MakeHttpSuite(cfg);
  MockSuiteOptions options;
  auto hypernyms = LoadHypernyms(cfg.mock.hypernyms_path);
  if (!hypernyms.ok()) return hypernyms.status();
  options.generator.hypernyms = *std::move(hypernyms);
  options.embedder.seed = cfg.mock.embedder_seed;
  options.logprob_vocabulary = cfg.mock.logprob_vocabulary;
  return MakeMockSuite(std::move(options));
}

PipelineContext::PipelineContext(BackendSuite suite, RunConfig cfg,
                                 PromptTemplate prompts)
    : suite_(std::move(suite)),
      cfg_(std::move(cfg)),
      prompts_(std::move(prompts)) {}

absl::StatusOr<std::unique_ptr<PipelineContext>> PipelineContext::Create(
    BackendSuite suite, RunConfig cfg) {
  if (!suite.generator || !suite.reward || !suite.nli || !suite.embedder ||
      !suite.logprob) {
    return absl::InvalidArgumentError("backend suite is incomplete");
  }
  PromptTemplate prompts = PromptTemplate::Default();
  if (!cfg.prompt_template_path.empty()) {
    auto loaded = PromptTemplate::Load(cfg.prompt_template_path);
    if (!loaded.ok()) return loaded.status();
    prompts = *std::move(loaded);
  }
  std::unique_ptr<PipelineContext> ctx(
      new PipelineContext(std::move(suite), std::move(cfg), std::move(prompts)));
  if (ctx->cfg_.align_scorer == AlignScorerKind::kCosine) {
    ctx->align_scorer_ =
        std::make_unique<CosineEmbeddingScorer>(*ctx->suite_.embedder);
  } else {
    ctx->align_scorer_ =
        std::make_unique<RewardModelScorer>(*ctx->suite_.reward);
  }
  ctx->monitor_ = std::make_unique<PrivacyScorer>(
      ctx->cfg_.monitor, ctx->suite_.reward.get(), ctx->suite_.nli.get());
  ctx->reward_ = std::make_unique<PrivacyScorer>(
      ctx->cfg_.reward, ctx->suite_.reward.get(), ctx->suite_.nli.get());
  return ctx;
}

double PipelineContext::align_threshold() const {
  return cfg_.align_threshold.value_or(align_scorer_->DefaultThreshold());
}

SearchContext PipelineContext::search_context() const {
  SearchContext sc;
  sc.generator = suite_.generator.get();
  sc.monitor = monitor_.get();
  sc.reward = reward_.get();
  sc.prompts = &prompts_;
  return sc;
}

EvalContext PipelineContext::eval_context() const {
  EvalContext ec;
  ec.nli = suite_.nli.get();
  ec.logprob = suite_.logprob.get();
  ec.pii_detector = align_scorer_.get();
  ec.pii_threshold = align_threshold();
  ec.nli_cutoff = cfg_.nli_cutoff;
  return ec;
}

absl::StatusOr<RecordAlignment> AlignRecord(const DatasetRecord& record,
                                            const PipelineContext& ctx) {
  RecordAlignment out;
  out.doc_id = record.doc_id;
  std::vector<std::string> sentences = SplitSentences(record.utterance.text());
  if (sentences.empty()) sentences.push_back(record.utterance.text());
  const size_t limit = ctx.config().max_sentences.has_value()
                           ? static_cast<size_t>(*ctx.config().max_sentences)
                           : sentences.size();
  AlignOptions options;
  options.max_span_length = static_cast<size_t>(ctx.config().max_span_length);
  for (size_t i = 0; i < sentences.size(); ++i) {
    auto sentence =
        Utterance::Create(absl::StrCat(record.doc_id, "#", i), sentences[i]);
    if (!sentence.ok()) return sentence.status();
    AlignmentResult alignment;
    alignment.threshold_used = ctx.align_threshold();
    alignment.scorer_name = ctx.align_scorer().Name();
    const bool rewrite = i < limit;
    if (rewrite) {
      auto aligned = AlignSegments(*sentence, record.spec, ctx.align_scorer(),
                                   ctx.align_threshold(), options);
      if (!aligned.ok()) return aligned.status();
      alignment = *std::move(aligned);
    }
    out.sentences.push_back(
        SentenceAlignment{*std::move(sentence), std::move(alignment), rewrite});
  }
  return out;
}

absl::StatusOr<RecordOutcome> RewriteRecord(const DatasetRecord& record,
                                            const RecordAlignment& alignment,
                                            StrategyKind strategy,
                                            const PipelineContext& ctx) {
  RecordOutcome out;
  out.doc_id = record.doc_id;
  std::vector<std::string> pieces;
  const SearchContext sc = ctx.search_context();
  for (size_t i = 0; i < alignment.sentences.size(); ++i) {
    const SentenceAlignment& sa = alignment.sentences[i];
    if (!sa.rewrite) {
      pieces.push_back(sa.sentence.text());
      continue;
    }
    auto rewritten = RewriteDocument(sa.sentence, record.spec, sa.alignment,
                                     strategy, sc, ctx.config().search);
    if (!rewritten.ok()) {
      return absl::Status(rewritten.status().code(),
                          absl::StrCat("sentence ", i, ": ",
                                       rewritten.status().message()));
    }
    for (SearchTrace& trace : rewritten->traces) {
      out.traces.push_back(SentenceTrace{i, std::move(trace)});
    }
    if (!rewritten->final_text.empty()) {
      pieces.push_back(std::move(rewritten->final_text));
    }
  }
  out.rewrite = absl::StrJoin(pieces, " ");
  return out;
}

}  // namespace privrewrite
