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

#ifndef PRIVREWRITE_PIPELINE_CONTEXT_H_
#define PRIVREWRITE_PIPELINE_CONTEXT_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/alignment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/eval/report.h"
#include "privrewrite/pipeline/dataset.h"
#include "privrewrite/pipeline/run_config.h"
#include "privrewrite/rewriter/prompt.h"
#include "privrewrite/search/search.h"

namespace privrewrite {

enum class BackendKind { kMock, kHttp };

std::string_view BackendKindName(BackendKind kind);
absl::StatusOr<BackendKind> ParseBackendKind(std::string_view name);

// For kHttp every endpoint is probed first, so an unreachable server fails
// here with the transport diagnostics.
absl::StatusOr<BackendSuite> MakeBackendSuite(BackendKind kind,
                                              const RunConfig& cfg);

// Scorers and prompts derived from a backend suite and a run config.
class PipelineContext {
 public:
  static absl::StatusOr<std::unique_ptr<PipelineContext>> Create(
      BackendSuite suite, RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const BackendSuite& suite() const { return suite_; }
  const SegmentScorer& align_scorer() const { return *align_scorer_; }
  double align_threshold() const;
  SearchContext search_context() const;
  EvalContext eval_context() const;

 private:
  PipelineContext(BackendSuite suite, RunConfig cfg, PromptTemplate prompts);

  BackendSuite suite_;
  RunConfig cfg_;
  PromptTemplate prompts_;
  std::unique_ptr<SegmentScorer> align_scorer_;
  std::unique_ptr<PrivacyScorer> monitor_;
  std::unique_ptr<PrivacyScorer> reward_;
};

struct SentenceAlignment {
  Utterance sentence;
  AlignmentResult alignment;
  // False past max_sentences; such sentences are copied unchanged.
  bool rewrite = true;
};

struct RecordAlignment {
  std::string doc_id;
  std::vector<SentenceAlignment> sentences;
};

// Splits the record into sentences and aligns those that will be rewritten.
absl::StatusOr<RecordAlignment> AlignRecord(const DatasetRecord& record,
                                            const PipelineContext& ctx);

struct SentenceTrace {
  size_t sentence_index = 0;
  SearchTrace trace;
};

struct RecordOutcome {
  std::string doc_id;
  std::string rewrite;
  std::vector<SentenceTrace> traces;
};

absl::StatusOr<RecordOutcome> RewriteRecord(const DatasetRecord& record,
                                            const RecordAlignment& alignment,
                                            StrategyKind strategy,
                                            const PipelineContext& ctx);

}  // namespace privrewrite

#endif  // PRIVREWRITE_PIPELINE_CONTEXT_H_
