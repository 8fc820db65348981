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

#ifndef PRIVREWRITE_BACKENDS_MOCK_H_
#define PRIVREWRITE_BACKENDS_MOCK_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "privrewrite/backends/backend.h"

// Deterministic offline backends. Every output is a pure function of the
// inputs and the construction options.

namespace privrewrite {

struct MockGeneratorOptions {
  // Obscure replacement per segment surface; "something" otherwise.
  std::map<std::string, std::string> hypernyms;
  std::string default_hypernym = "something";
  // Scripted replacements that take precedence over the default behavior.
  // Candidate i uses entry i modulo the list size.
  std::map<std::pair<RewriteAction, std::string>, std::vector<std::string>>
      scripted;
};

// Delete removes the first occurrence of each segment and collapses
// whitespace; Obscure substitutes the hypernym. Output is the normalized
// token form of the sentence.
class MockGenerator : public Generator {
 public:
  explicit MockGenerator(MockGeneratorOptions options = {})
      : options_(std::move(options)) {}
  std::string Identity() const override { return "mock-generator"; }

 protected:
  absl::StatusOr<std::vector<std::string>> DoGenerate(
      const RewritePrompt& prompt, int n) const override;

 private:
  MockGeneratorOptions options_;
};

// 1 - (fraction of sensitive content tokens still present in the candidate).
// Stopwords are not sensitive; with none left the score is 1.
class MockRewardModel : public RewardModel {
 public:
  std::string Identity() const override { return "mock-reward"; }

 protected:
  absl::StatusOr<double> DoScore(const RewardQuery& query) const override;
};

// 1 when every content token of the hypothesis occurs in the premise,
// else 0. Hypotheses made only of stopwords use all their tokens.
class MockNliModel : public NliModel {
 public:
  std::string Identity() const override { return "mock-nli"; }

 protected:
  absl::StatusOr<double> DoEntailment(
      std::string_view premise, std::string_view hypothesis) const override;
};

struct PlantedSimilarity {
  std::string anchor;
  std::string partner;
  double cosine = 0.0;
};

struct MockEmbedderOptions {
  size_t dimension = 256;
  uint64_t seed = 0;
  // Explicit vectors (normalized on construction). When present, their
  // length overrides dimension.
  std::map<std::string, std::vector<double>> fixed;
  // Partner vectors are built at the requested cosine to their anchor.
  // Applied in order; a partner may serve as a later anchor.
  std::vector<PlantedSimilarity> planted;
};

// Texts not named in the options hash to a seeded Gaussian direction.
class MockEmbedder : public Embedder {
 public:
  static absl::StatusOr<MockEmbedder> Create(MockEmbedderOptions options);
  std::string Identity() const override { return "mock-embedder"; }
  size_t dimension() const { return dimension_; }

 protected:
  absl::StatusOr<std::vector<double>> DoEmbed(
      std::string_view text) const override;

 private:
  MockEmbedder(size_t dimension, uint64_t seed)
      : dimension_(dimension), seed_(seed) {}
  std::vector<double> HashedVector(std::string_view text) const;

  size_t dimension_;
  uint64_t seed_;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// Every token gets log-probability -ln(vocabulary_size).
class MockLogProbModel : public LogProbModel {
 public:
  explicit MockLogProbModel(double vocabulary_size)
      : vocabulary_size_(vocabulary_size) {}
  std::string Identity() const override { return "mock-logprob"; }

 protected:
  absl::StatusOr<LogProbResult> DoScoreLogProb(
      std::string_view text) const override;

 private:
  double vocabulary_size_;
};

struct MockSuiteOptions {
  MockGeneratorOptions generator;
  MockEmbedderOptions embedder;
  // Zero selects NoLogProbModel.
  double logprob_vocabulary = 0.0;
};

absl::StatusOr<BackendSuite> MakeMockSuite(MockSuiteOptions options = {});

}  // namespace privrewrite

#endif  // PRIVREWRITE_BACKENDS_MOCK_H_
