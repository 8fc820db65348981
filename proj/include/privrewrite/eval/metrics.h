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

#ifndef PRIVREWRITE_EVAL_METRICS_H_
#define PRIVREWRITE_EVAL_METRICS_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

// Unigram F1 over token multisets; 0 when either side has no tokens.
double Rouge1F(std::string_view candidate, std::string_view reference);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact set matching after tokenizer normalization. Empty sets give
// vacuous precision or recall of 1.
PrfScores PiiMatchScores(const std::set<std::string>& predicted,
                         const std::set<std::string>& truth);

// A document counts as private when its highest entailment over spec
// statements stays below this cutoff.
inline constexpr double kDefaultNliCutoff = 0.5;

struct PrivacyNliOutcome {
  // 100 * private / scored documents.
  double rate_percent = 0.0;
  size_t private_count = 0;
  size_t scored = 0;
  size_t failures = 0;
  // Per input; absent where the backend failed.
  std::vector<std::optional<double>> max_entailment;
};

struct RewriteForNli {
  std::string text;
  const PrivacySpec* spec = nullptr;
};

// Entailment of each spec statement by the rewrite. Backend failures are
// counted and excluded rather than aborting. Fails only on empty input or
// when every document failed.
absl::StatusOr<PrivacyNliOutcome> PrivacyNliRate(
    std::span<const RewriteForNli> rewrites, const NliModel& nli,
    double cutoff = kDefaultNliCutoff);

// Rate from precomputed per-document max entailments.
double PrivacyRateFromEntailments(std::span<const double> max_entailment,
                                  double cutoff = kDefaultNliCutoff);

// Unique bigrams / total bigrams of one text; 1 below two tokens.
double Distinct2(std::string_view text);
// Mean of the per-text values; 0 for an empty list.
double Distinct2(std::span<const std::string> texts);

// exp(-total_logprob / token_count). kUnimplemented from the backend is
// passed through so callers can report the value as unavailable.
absl::StatusOr<double> Perplexity(std::string_view text,
                                  const LogProbModel& model);

struct AlignedPair {
  // Absent on the side that has a gap.
  std::optional<std::string> original;
  std::optional<std::string> rewritten;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

// Global minimum edit alignment: equal tokens pair for free, substitutions
// and gaps cost 1. Among optimal alignments, substitutions are preferred to
// gaps, and a gap in the rewritten side to a gap in the original.
std::vector<AlignedPair> AlignTokens(const std::vector<std::string>& original,
                                     const std::vector<std::string>& rewritten);

// Edit cost of an alignment.
size_t AlignmentCost(std::span<const AlignedPair> alignment);

}  // namespace privrewrite

#endif  // PRIVREWRITE_EVAL_METRICS_H_
