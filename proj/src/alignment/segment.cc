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

#include "privrewrite/alignment/segment.h"

#include <span>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {

std::vector<std::string> AlignedSegment::Tokens() const {
  return SplitWhitespace(surface);
}

absl::StatusOr<AlignedSegment> MakeSegment(const Utterance& utterance,
                                           TokenSpan span, double score,
                                           std::optional<size_t> source_item) {
  if (span.start >= span.end || span.end > utterance.tokens().size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "segment span [", span.start, ", ", span.end,
        ") is not inside an utterance of ", utterance.tokens().size(),
        " tokens"));
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("segment score ", score, " is outside [0, 1]"));
  }
  AlignedSegment segment;
  segment.span = span;
  segment.surface = JoinTokens(std::span<const std::string>(
      utterance.tokens().data() + span.start, span.length()));
  segment.score = score;
  segment.source_item = source_item;
  return segment;
}

}  // namespace privrewrite
