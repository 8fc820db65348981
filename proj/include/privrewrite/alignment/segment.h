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

#ifndef PRIVREWRITE_ALIGNMENT_SEGMENT_H_
#define PRIVREWRITE_ALIGNMENT_SEGMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

// Half-open token range [start, end).
struct TokenSpan {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool Overlaps(const TokenSpan& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

// A privacy segment: a token span of an utterance that lines up with the
// privacy spec.
struct AlignedSegment {
  TokenSpan span;
  // Space-join of the utterance tokens covered by span.
  std::string surface;
  double score = 0.0;
  // Index into PrivacySpec::Statements() of the best-matching statement.
  std::optional<size_t> source_item;

  std::vector<std::string> Tokens() const;
};

// Validates the span against the utterance and fills in surface.
absl::StatusOr<AlignedSegment> MakeSegment(
    const Utterance& utterance, TokenSpan span, double score,
    std::optional<size_t> source_item = std::nullopt);

struct AlignmentResult {
  // Sorted by span start, pairwise disjoint.
  std::vector<AlignedSegment> segments;
  double threshold_used = 0.0;
  std::string scorer_name;
};

}  // namespace privrewrite

#endif  // PRIVREWRITE_ALIGNMENT_SEGMENT_H_
