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

#ifndef PRIVREWRITE_REWRITER_PROMPT_H_
#define PRIVREWRITE_REWRITER_PROMPT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/segment.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

// Prompt text with the placeholders {sentence}, {segment} and
// {action_directive}. Each must appear at least once.
class PromptTemplate {
 public:
  static absl::StatusOr<PromptTemplate> Create(std::string text);
  static absl::StatusOr<PromptTemplate> Load(const std::string& path);
  static const PromptTemplate& Default();

  const std::string& text() const { return text_; }

  std::string Render(std::string_view sentence, std::string_view segment,
                     std::string_view directive) const;

 private:
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

std::string_view ActionDirective(RewriteAction action);

struct RewritePrompt {
  std::string base_sentence;
  // Segments to rewrite. One for per-segment strategies; every aligned
  // segment of the sentence for the one-step strategy.
  std::vector<AlignedSegment> segments;
  RewriteAction action = RewriteAction::kDelete;
  std::string instruction_text;

  const AlignedSegment& segment() const { return segments.front(); }
};

// Fails with "segment not found" when a segment's tokens do not occur as a
// contiguous run in the tokenized sentence.
absl::StatusOr<RewritePrompt> BuildPrompt(
    std::string_view sentence, const AlignedSegment& segment,
    RewriteAction action,
    const PromptTemplate& tmpl = PromptTemplate::Default());

absl::StatusOr<RewritePrompt> BuildPrompt(
    std::string_view sentence, std::span<const AlignedSegment> segments,
    RewriteAction action,
    const PromptTemplate& tmpl = PromptTemplate::Default());

}  // namespace privrewrite

#endif  // PRIVREWRITE_REWRITER_PROMPT_H_
