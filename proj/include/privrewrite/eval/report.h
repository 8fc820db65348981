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

#ifndef PRIVREWRITE_EVAL_REPORT_H_
#define PRIVREWRITE_EVAL_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "privrewrite/alignment/alignment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/core/types.h"
#include "privrewrite/eval/attack.h"
#include "privrewrite/eval/metrics.h"

namespace privrewrite {

struct DocumentMetrics {
  std::string doc_id;
  // Absent when the NLI backend failed on this document.
  std::optional<double> max_entailment;
  std::optional<bool> is_private;
  double rouge1_f = 0.0;
  // Present only for specs with a PII list.
  std::optional<PrfScores> pii;
  double distinct2 = 0.0;
  // Absent when the log-prob backend cannot score.
  std::optional<double> perplexity;
};

struct MetricReport {
  // Percentage over documents the NLI backend scored.
  std::optional<double> privacy_nli_rate;
  double rouge1_f = 0.0;
  std::optional<double> pii_precision;
  std::optional<double> pii_recall;
  std::optional<double> pii_f1;
  double distinct2 = 0.0;
  std::optional<double> perplexity;
  size_t documents = 0;
  size_t nli_failures = 0;
  size_t perplexity_unavailable = 0;
  std::vector<DocumentMetrics> per_document;
};

struct DocumentEvalInput {
  std::string doc_id;
  std::string original;
  std::string rewrite;
  std::optional<std::string> reference;
  const PrivacySpec* spec = nullptr;
};

struct EvalContext {
  const NliModel* nli = nullptr;
  // Optional; perplexity is reported unavailable without it.
  const LogProbModel* logprob = nullptr;
  // Extracts PII from rewrites for precision and F1. Optional.
  const SegmentScorer* pii_detector = nullptr;
  double pii_threshold = 0.5;
  double nli_cutoff = kDefaultNliCutoff;
};

// ROUGE-1 is taken against the reference rewrite when present, otherwise
// against the original.
absl::StatusOr<DocumentMetrics> ComputeDocumentMetrics(
    const DocumentEvalInput& input, const EvalContext& ctx);

// Aggregates are means over the rows that carry each value.
MetricReport AggregateMetrics(std::vector<DocumentMetrics> rows,
                              double nli_cutoff = kDefaultNliCutoff);

nlohmann::json ToJson(const MetricReport& report);
absl::StatusOr<MetricReport> MetricReportFromJson(const nlohmann::json& doc);
std::string RenderTable(const MetricReport& report);

nlohmann::json ToJson(const AttackReport& report);
std::string RenderTable(const AttackReport& report);

// Fixed-width table; the first row is the header.
std::string RenderRows(const std::vector<std::vector<std::string>>& rows);

// "n/a" when absent.
std::string FormatOptional(const std::optional<double>& value,
                           int precision = 4);

}  // namespace privrewrite

#endif  // PRIVREWRITE_EVAL_REPORT_H_
