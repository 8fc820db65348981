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

#ifndef PRIVREWRITE_REWRITER_REWRITER_H_
#define PRIVREWRITE_REWRITER_REWRITER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/segment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/config.h"
#include "privrewrite/core/rng.h"
#include "privrewrite/rewriter/prompt.h"

namespace privrewrite {

struct ScoredCandidate {
  std::string text;
  double gate_score = 0.0;
};

struct CandidateSet {
  std::vector<ScoredCandidate> candidates;
  // Candidates whose gate score passes the threshold, ascending.
  std::vector<size_t> accepted_indices;
  // A uniformly drawn accepted candidate, or the best-scoring candidate
  // (lowest index on ties) when none passed.
  size_t chosen_index = 0;

  const ScoredCandidate& chosen() const { return candidates[chosen_index]; }
};

// Cuts text to its first max_tokens whitespace-separated words.
std::string TruncateToTokens(std::string_view text, int max_tokens);

// The reduction step of a one-step rewrite: threshold the scores, then draw
// uniformly among the accepted or fall back to the extremal score.
// Exposed separately so the selection rule can be tested on raw scores.
size_t ChooseCandidate(std::span<const double> scores, double threshold,
                       GateDirection direction, Rng& rng,
                       std::vector<size_t>* accepted);

// True when every token of the sentence lies inside some target.
bool TargetsCoverSentence(std::string_view sentence,
                          std::span<const AlignedSegment> segments);

// Samples cfg.sample_count candidates for the given segments and action,
// scores each with the monitor and picks one. Empty candidates are dropped
// unless the action is Delete and the targets cover the whole sentence.
absl::StatusOr<CandidateSet> OneStepRewrite(
    std::string_view sentence, std::span<const AlignedSegment> segments,
    RewriteAction action, const PrivacySpec& spec, const Generator& generator,
    const CandidateScorer& monitor, const SearchConfig& cfg, Rng& rng,
    const PromptTemplate& tmpl = PromptTemplate::Default());

absl::StatusOr<CandidateSet> OneStepRewrite(
    std::string_view sentence, const AlignedSegment& segment,
    RewriteAction action, const PrivacySpec& spec, const Generator& generator,
    const CandidateScorer& monitor, const SearchConfig& cfg, Rng& rng,
    const PromptTemplate& tmpl = PromptTemplate::Default());

}  // namespace privrewrite

#endif  // PRIVREWRITE_REWRITER_REWRITER_H_
