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

#include "privrewrite/rewriter/rewriter.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {

std::string TruncateToTokens(std::string_view text, int max_tokens) {
  std::vector<std::string> words = SplitWhitespace(text);
  if (static_cast<int>(words.size()) <= max_tokens) {
    return JoinTokens(words);
  }
  words.resize(max_tokens);
  return JoinTokens(words);
}

size_t ChooseCandidate(std::span<const double> scores, double threshold,
                       GateDirection direction, Rng& rng,
                       std::vector<size_t>* accepted) {
  std::vector<size_t> local;
  std::vector<size_t>& passing = accepted != nullptr ? *accepted : local;
  passing.clear();
  for (size_t i = 0; i < scores.size(); ++i) {
    if (GateAccepts(scores[i], threshold, direction)) passing.push_back(i);
  }
  if (!passing.empty()) return passing[rng.UniformIndex(passing.size())];
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (OrientScore(scores[i], direction) >
        OrientScore(scores[best], direction)) {
      best = i;
    }
  }
  return best;
}

bool TargetsCoverSentence(std::string_view sentence,
                          std::span<const AlignedSegment> segments) {
  const std::vector<std::string> tokens = Tokenize(sentence);
  std::vector<bool> covered(tokens.size(), false);
  for (const AlignedSegment& segment : segments) {
    const std::vector<std::string> needle = segment.Tokens();
    const size_t at = FindTokenRun(tokens, needle);
    if (at == tokens.size()) continue;
    for (size_t k = at; k < at + needle.size(); ++k) covered[k] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
}

absl::StatusOr<CandidateSet> OneStepRewrite(
    std::string_view sentence, std::span<const AlignedSegment> segments,
    RewriteAction action, const PrivacySpec& spec, const Generator& generator,
    const CandidateScorer& monitor, const SearchConfig& cfg, Rng& rng,
    const PromptTemplate& tmpl) {
  auto prompt = BuildPrompt(sentence, segments, action, tmpl);
  if (!prompt.ok()) return prompt.status();
  auto texts = generator.Generate(*prompt, cfg.sample_count);
  if (!texts.ok()) return texts.status();

  const bool empty_ok = action == RewriteAction::kDelete &&
                        TargetsCoverSentence(sentence, segments);
  CandidateSet set;
  std::vector<double> scores;
  for (size_t i = 0; i < texts->size(); ++i) {
    std::string text = TruncateToTokens((*texts)[i], cfg.max_tokens);
    if (text.empty() && !empty_ok) continue;
    auto score = monitor.Score(text, segments, spec);
    if (!score.ok()) {
      return absl::Status(score.status().code(),
                          absl::StrCat("monitor failed on candidate ", i, ": ",
                                       score.status().message()));
    }
    set.candidates.push_back({std::move(text), *score});
    scores.push_back(*score);
  }
  if (set.candidates.empty()) {
    return absl::InternalError("generator returned only empty candidates");
  }
  set.chosen_index = ChooseCandidate(scores, cfg.reward_threshold,
                                     cfg.gate_direction, rng,
                                     &set.accepted_indices);
  return set;
}

absl::StatusOr<CandidateSet> OneStepRewrite(
    std::string_view sentence, const AlignedSegment& segment,
    RewriteAction action, const PrivacySpec& spec, const Generator& generator,
    const CandidateScorer& monitor, const SearchConfig& cfg, Rng& rng,
    const PromptTemplate& tmpl) {
  return OneStepRewrite(sentence, std::span<const AlignedSegment>(&segment, 1),
                        action, spec, generator, monitor, cfg, rng, tmpl);
}

}  // namespace privrewrite
