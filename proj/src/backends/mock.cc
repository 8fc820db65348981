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

#include "privrewrite/backends/mock.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/rng.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {
namespace {

void Normalize(std::vector<double>& v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0) return;
  for (double& x : v) x /= norm;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

absl::StatusOr<std::vector<std::string>> MockGenerator::DoGenerate(
    const RewritePrompt& prompt, int n) const {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> tokens = Tokenize(prompt.base_sentence);
    for (const AlignedSegment& segment : prompt.segments) {
      const std::vector<std::string> needle = segment.Tokens();
      const size_t at = FindTokenRun(tokens, needle);
      if (at == tokens.size()) continue;
      std::string replacement;
      auto scripted = options_.scripted.find({prompt.action, segment.surface});
      if (scripted != options_.scripted.end() && !scripted->second.empty()) {
        replacement = scripted->second[i % scripted->second.size()];
      } else if (prompt.action == RewriteAction::kObscure) {
        auto h = options_.hypernyms.find(segment.surface);
        replacement = h != options_.hypernyms.end() ? h->second
                                                    : options_.default_hypernym;
      }
      std::vector<std::string> inserted = Tokenize(replacement);
      tokens.erase(tokens.begin() + at, tokens.begin() + at + needle.size());
      tokens.insert(tokens.begin() + at, inserted.begin(), inserted.end());
    }
    out.push_back(JoinTokens(tokens));
  }
  return out;
}

absl::StatusOr<double> MockRewardModel::DoScore(const RewardQuery& query) const {
  const std::vector<std::string> candidate = Tokenize(query.candidate);
  const std::set<std::string> present(candidate.begin(), candidate.end());
  size_t total = 0;
  size_t residual = 0;
  for (const std::string& surface : query.sensitive) {
    for (const std::string& token : Tokenize(surface)) {
      if (IsStopword(token)) continue;
      ++total;
      if (present.contains(token)) ++residual;
    }
  }
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(residual) / static_cast<double>(total);
}

absl::StatusOr<double> MockNliModel::DoEntailment(
    std::string_view premise, std::string_view hypothesis) const {
  const std::vector<std::string> p = Tokenize(premise);
  const std::set<std::string> present(p.begin(), p.end());
  const std::vector<std::string> h = Tokenize(hypothesis);
  if (h.empty()) {
    return absl::InvalidArgumentError("hypothesis has no tokens");
  }
  std::vector<std::string> content;
  for (const std::string& t : h) {
    if (!IsStopword(t)) content.push_back(t);
  }
  const std::vector<std::string>& required = content.empty() ? h : content;
  for (const std::string& t : required) {
    if (!present.contains(t)) return 0.0;
  }
  return 1.0;
}

absl::StatusOr<MockEmbedder> MockEmbedder::Create(MockEmbedderOptions options) {
  size_t dimension = options.dimension;
  if (!options.fixed.empty()) dimension = options.fixed.begin()->second.size();
  if (dimension < 2) {
    return absl::InvalidArgumentError("mock embedder dimension must be >= 2");
  }
  MockEmbedder embedder(dimension, options.seed);
  for (auto& [text, vec] : options.fixed) {
    if (vec.size() != dimension) {
      return absl::InvalidArgumentError(
          absl::StrCat("fixed vector for '", text, "' has wrong dimension"));
    }
    Normalize(vec);
    embedder.table_[text] = vec;
  }
  for (const PlantedSimilarity& p : options.planted) {
    if (!(p.cosine >= -1.0 && p.cosine <= 1.0)) {
      return absl::InvalidArgumentError("planted cosine must be in [-1, 1]");
    }
    auto anchor_it = embedder.table_.find(p.anchor);
    std::vector<double> anchor = anchor_it != embedder.table_.end()
                                     ? anchor_it->second
                                     : embedder.HashedVector(p.anchor);
    embedder.table_[p.anchor] = anchor;
    // Component of the partner's hashed direction orthogonal to the anchor.
    std::vector<double> ortho = embedder.HashedVector(p.partner);
    const double proj = Dot(ortho, anchor);
    for (size_t i = 0; i < dimension; ++i) ortho[i] -= proj * anchor[i];
    Normalize(ortho);
    const double s = std::sqrt(std::max(0.0, 1.0 - p.cosine * p.cosine));
    std::vector<double> partner(dimension);
    for (size_t i = 0; i < dimension; ++i) {
      partner[i] = p.cosine * anchor[i] + s * ortho[i];
    }
    Normalize(partner);
    embedder.table_[p.partner] = std::move(partner);
  }
  return embedder;
}

std::vector<double> MockEmbedder::HashedVector(std::string_view text) const {
  Rng rng(seed_ ^ Fnv1a64(text));
  std::vector<double> v(dimension_);
  for (size_t i = 0; i < dimension_; ++i) {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - rng.UniformDouble();
    const double u2 = rng.UniformDouble();
    v[i] = std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  Normalize(v);
  return v;
}

absl::StatusOr<std::vector<double>> MockEmbedder::DoEmbed(
    std::string_view text) const {
  if (auto it = table_.find(text); it != table_.end()) return it->second;
  return HashedVector(text);
}

absl::StatusOr<LogProbResult> MockLogProbModel::DoScoreLogProb(
    std::string_view text) const {
  if (!(vocabulary_size_ > 1.0)) {
    return absl::FailedPreconditionError("mock vocabulary size must exceed 1");
  }
  const size_t count = Tokenize(text).size();
  if (count == 0) return absl::InvalidArgumentError("text has no tokens");
  return LogProbResult{
      .total_logprob = -static_cast<double>(count) * std::log(vocabulary_size_),
      .token_count = count};
}

absl::StatusOr<BackendSuite> MakeMockSuite(MockSuiteOptions options) {
  auto embedder = MockEmbedder::Create(std::move(options.embedder));
  if (!embedder.ok()) return embedder.status();
  BackendSuite suite;
  suite.generator =
      std::make_shared<MockGenerator>(std::move(options.generator));
  suite.reward = std::make_shared<MockRewardModel>();
  suite.nli = std::make_shared<MockNliModel>();
  suite.embedder = std::make_shared<MockEmbedder>(*std::move(embedder));
  if (options.logprob_vocabulary > 0.0) {
    suite.logprob =
        std::make_shared<MockLogProbModel>(options.logprob_vocabulary);
  } else {
    suite.logprob = std::make_shared<NoLogProbModel>();
  }
  return suite;
}

}  // namespace privrewrite
