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

#include "privrewrite/alignment/alignment.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {

double RescaleCosine(double cosine) {
  return std::clamp((cosine + 1.0) / 2.0, 0.0, 1.0);
}

absl::StatusOr<std::vector<SpanScore>> CosineEmbeddingScorer::ScoreSpans(
    const PrivacySpec& spec,
    std::span<const std::vector<std::string>> spans) const {
  std::vector<std::pair<size_t, std::vector<double>>> statement_vectors;
  for (size_t i = 0; i < spec.Statements().size(); ++i) {
    const std::string normalized = JoinTokens(Tokenize(spec.Statements()[i]));
    if (normalized.empty()) continue;
    auto v = embedder_.Embed(normalized);
    if (!v.ok()) {
      return absl::Status(v.status().code(),
                          absl::StrCat("scoring error: ", v.status().message()));
    }
    statement_vectors.emplace_back(i, *std::move(v));
  }
  std::vector<SpanScore> scores;
  scores.reserve(spans.size());
  for (const std::vector<std::string>& span : spans) {
    if (span.empty()) return absl::InvalidArgumentError("empty span");
    auto v = embedder_.Embed(JoinTokens(span));
    if (!v.ok()) {
      return absl::Status(v.status().code(),
                          absl::StrCat("scoring error: ", v.status().message()));
    }
    SpanScore best;
    for (const auto& [index, s] : statement_vectors) {
      const double score = RescaleCosine(CosineSimilarity(*v, s));
      if (!best.source_item.has_value() || score > best.score) {
        best = {score, index};
      }
    }
    scores.push_back(best);
  }
  return scores;
}

absl::StatusOr<std::vector<SpanScore>> RewardModelScorer::ScoreSpans(
    const PrivacySpec& spec,
    std::span<const std::vector<std::string>> spans) const {
  std::vector<SpanScore> scores;
  scores.reserve(spans.size());
  for (const std::vector<std::string>& span : spans) {
    if (span.empty()) return absl::InvalidArgumentError("empty span");
    const std::string surface = JoinTokens(span);
    SpanScore best;
    for (size_t i = 0; i < spec.Statements().size(); ++i) {
      auto r = reward_.Score(RewardQuery{
          .candidate = spec.Statements()[i],
          .sensitive = std::span<const std::string>(&surface, 1),
          .spec = &spec});
      if (!r.ok()) {
        return absl::Status(r.status().code(),
                            absl::StrCat("scoring error: ", r.status().message()));
      }
      const double score = std::clamp(1.0 - *r, 0.0, 1.0);
      if (!best.source_item.has_value() || score > best.score) {
        best = {score, i};
      }
    }
    scores.push_back(best);
  }
  return scores;
}

absl::StatusOr<double> ScoreSegment(const PrivacySpec& spec,
                                    std::span<const std::string> segment_tokens,
                                    const Embedder& embedder) {
  if (segment_tokens.empty()) {
    return absl::InvalidArgumentError("segment has no tokens");
  }
  CosineEmbeddingScorer scorer(embedder);
  std::vector<std::vector<std::string>> spans = {
      std::vector<std::string>(segment_tokens.begin(), segment_tokens.end())};
  auto scores = scorer.ScoreSpans(spec, spans);
  if (!scores.ok()) return scores.status();
  return scores->front().score;
}

absl::StatusOr<AlignmentResult> AlignSegments(const Utterance& utterance,
                                              const PrivacySpec& spec,
                                              const SegmentScorer& scorer,
                                              double threshold,
                                              const AlignOptions& options) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    return absl::InvalidArgumentError("alignment threshold must be in [0, 1]");
  }
  if (options.max_span_length < 1) {
    return absl::InvalidArgumentError("max_span_length must be >= 1");
  }
  AlignmentResult result;
  result.threshold_used = threshold;
  result.scorer_name = scorer.Name();
  const std::vector<std::string>& tokens = utterance.tokens();
  if (tokens.empty()) return result;

  std::vector<TokenSpan> spans;
  std::vector<std::vector<std::string>> span_tokens;
  for (size_t start = 0; start < tokens.size(); ++start) {
    for (size_t len = 1;
         len <= options.max_span_length && start + len <= tokens.size();
         ++len) {
      spans.push_back({start, start + len});
      span_tokens.emplace_back(tokens.begin() + start,
                               tokens.begin() + start + len);
    }
  }
  auto scores = scorer.ScoreSpans(spec, span_tokens);
  if (!scores.ok()) return scores.status();
  if (scores->size() != spans.size()) {
    return absl::InternalError("scorer returned the wrong number of scores");
  }

  auto content_bounded = [&tokens](const TokenSpan& s) {
    return !IsStopword(tokens[s.start]) && !IsStopword(tokens[s.end - 1]);
  };
  std::vector<size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double sa = (*scores)[a].score;
    const double sb = (*scores)[b].score;
    if (sa != sb) return sa > sb;
    const bool ca = content_bounded(spans[a]);
    const bool cb = content_bounded(spans[b]);
    if (ca != cb) return ca;
    if (spans[a].start != spans[b].start) return spans[a].start < spans[b].start;
    return spans[a].end < spans[b].end;
  });
  std::vector<AlignedSegment> chosen;
  for (size_t i : order) {
    const double score = std::clamp((*scores)[i].score, 0.0, 1.0);
    if (score < threshold) break;
    const bool overlaps = std::any_of(
        chosen.begin(), chosen.end(),
        [&](const AlignedSegment& s) { return s.span.Overlaps(spans[i]); });
    if (overlaps) continue;
    auto segment =
        MakeSegment(utterance, spans[i], score, (*scores)[i].source_item);
    if (!segment.ok()) return segment.status();
    chosen.push_back(*std::move(segment));
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const AlignedSegment& a, const AlignedSegment& b) {
              return a.span.start < b.span.start;
            });
  result.segments = std::move(chosen);
  return result;
}

absl::StatusOr<Utterance> ScrubSegments(const Utterance& utterance,
                                        std::span<const AlignedSegment> segments,
                                        std::string_view mask_token) {
  std::vector<AlignedSegment> sorted(segments.begin(), segments.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const AlignedSegment& a, const AlignedSegment& b) {
              return a.span.start < b.span.start;
            });
  const std::vector<std::string>& tokens = utterance.tokens();
  for (size_t i = 0; i < sorted.size(); ++i) {
    const TokenSpan& span = sorted[i].span;
    if (span.start >= span.end || span.end > tokens.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("segment '", sorted[i].surface, "' is out of range"));
    }
    if (i > 0 && sorted[i - 1].span.Overlaps(span)) {
      return absl::InvalidArgumentError("overlapping segments");
    }
  }
  if (sorted.empty()) return utterance;
  std::vector<std::string> out;
  size_t next = 0;
  for (const AlignedSegment& segment : sorted) {
    out.insert(out.end(), tokens.begin() + next,
               tokens.begin() + segment.span.start);
    out.emplace_back(mask_token);
    next = segment.span.end;
  }
  out.insert(out.end(), tokens.begin() + next, tokens.end());
  return Utterance::Create(utterance.doc_id(), JoinTokens(out));
}

double OverlapCoefficient(const std::set<std::string>& a,
                          const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  size_t common = 0;
  for (const std::string& x : a) common += b.contains(x) ? 1 : 0;
  return static_cast<double>(common) /
         static_cast<double>(std::min(a.size(), b.size()));
}

}  // namespace privrewrite
