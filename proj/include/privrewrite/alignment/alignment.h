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

#ifndef PRIVREWRITE_ALIGNMENT_ALIGNMENT_H_
#define PRIVREWRITE_ALIGNMENT_ALIGNMENT_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/segment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

// Maps cosine similarity from [-1, 1] onto [0, 1].
double RescaleCosine(double cosine);

// Default alignment thresholds, in the [0, 1] score space. The cosine
// default is a raw cosine of 0.2 after rescaling.
inline constexpr double kDefaultCosineAlignThreshold = 0.6;
inline constexpr double kDefaultRewardAlignThreshold = 0.15;

inline constexpr size_t kDefaultMaxSpanLength = 4;

struct SpanScore {
  double score = 0.0;
  // Index into PrivacySpec::Statements() of the best-matching statement.
  std::optional<size_t> source_item;
};

// Scores how strongly token spans relate to a privacy spec, in [0, 1].
class SegmentScorer {
 public:
  virtual ~SegmentScorer() = default;

  // One score per span, same order. Each span is a non-empty token list.
  virtual absl::StatusOr<std::vector<SpanScore>> ScoreSpans(
      const PrivacySpec& spec,
      std::span<const std::vector<std::string>> spans) const = 0;

  virtual std::string Name() const = 0;
  virtual double DefaultThreshold() const = 0;
};

// Max over spec statements of the rescaled cosine between the span surface
// and the statement, both embedded in normalized token form.
class CosineEmbeddingScorer : public SegmentScorer {
 public:
  explicit CosineEmbeddingScorer(const Embedder& embedder)
      : embedder_(embedder) {}

  absl::StatusOr<std::vector<SpanScore>> ScoreSpans(
      const PrivacySpec& spec,
      std::span<const std::vector<std::string>> spans) const override;
  std::string Name() const override { return "cosine"; }
  double DefaultThreshold() const override {
    return kDefaultCosineAlignThreshold;
  }

 private:
  const Embedder& embedder_;
};

// Max over spec statements of 1 - R(statement, span): a statement that
// "still contains" the span according to the reward model is aligned to it.
class RewardModelScorer : public SegmentScorer {
 public:
  explicit RewardModelScorer(const RewardModel& reward) : reward_(reward) {}

  absl::StatusOr<std::vector<SpanScore>> ScoreSpans(
      const PrivacySpec& spec,
      std::span<const std::vector<std::string>> spans) const override;
  std::string Name() const override { return "reward_model"; }
  double DefaultThreshold() const override {
    return kDefaultRewardAlignThreshold;
  }

 private:
  const RewardModel& reward_;
};

// Score of one segment against the spec through an embedder.
absl::StatusOr<double> ScoreSegment(const PrivacySpec& spec,
                                    std::span<const std::string> segment_tokens,
                                    const Embedder& embedder);

struct AlignOptions {
  size_t max_span_length = kDefaultMaxSpanLength;
};

// Scores every span of up to max_span_length tokens, then keeps the
// highest-scoring disjoint spans whose score reaches the threshold. Among
// equal scores, spans that begin and end on a content word come first, then
// left to right, shorter first.
absl::StatusOr<AlignmentResult> AlignSegments(const Utterance& utterance,
                                              const PrivacySpec& spec,
                                              const SegmentScorer& scorer,
                                              double threshold,
                                              const AlignOptions& options = {});

// Replaces each segment by mask_token. Segments must be valid for the
// utterance and pairwise disjoint.
absl::StatusOr<Utterance> ScrubSegments(const Utterance& utterance,
                                        std::span<const AlignedSegment> segments,
                                        std::string_view mask_token = "<MASK>");

// |A n B| / min(|A|, |B|); 1 when both sets are empty, 0 when one is.
double OverlapCoefficient(const std::set<std::string>& a,
                          const std::set<std::string>& b);

}  // namespace privrewrite

#endif  // PRIVREWRITE_ALIGNMENT_ALIGNMENT_H_
