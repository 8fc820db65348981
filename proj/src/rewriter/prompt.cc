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

#include "privrewrite/rewriter/prompt.h"

#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {
namespace {

constexpr std::string_view kDefaultTemplate =
    "You are rewriting a message so that it can be shared without exposing "
    "private details about its author.\n"
    "{action_directive}\n"
    "Private segment: \"{segment}\"\n"
    "Sentence: \"{sentence}\"\n"
    "Reply with the rewritten sentence only. Keep every other detail of the "
    "sentence as it is. Do not mention privacy, redaction, or that the "
    "sentence was changed.";

}  // namespace

absl::StatusOr<PromptTemplate> PromptTemplate::Create(std::string text) {
  for (std::string_view placeholder :
       {"{sentence}", "{segment}", "{action_directive}"}) {
    if (text.find(placeholder) == std::string::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("prompt template lacks placeholder ", Sv(placeholder)));
    }
  }
  return PromptTemplate(std::move(text));
}

absl::StatusOr<PromptTemplate> PromptTemplate::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open prompt template ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Create(buffer.str());
}

const PromptTemplate& PromptTemplate::Default() {
  static const PromptTemplate* tmpl =
      new PromptTemplate(std::string(kDefaultTemplate));
  return *tmpl;
}

std::string PromptTemplate::Render(std::string_view sentence,
                                   std::string_view segment,
                                   std::string_view directive) const {
  // Single pass, so placeholder-looking text inside the arguments is kept.
  return absl::StrReplaceAll(text_, {{"{sentence}", Sv(sentence)},
                                     {"{segment}", Sv(segment)},
                                     {"{action_directive}", Sv(directive)}});
}

std::string_view ActionDirective(RewriteAction action) {
  switch (action) {
    case RewriteAction::kDelete:
      return "Delete the private segment from the sentence. Remove exactly "
             "that span and keep the remaining words fluent and grammatical.";
    case RewriteAction::kObscure:
      return "Replace the private segment with a strictly more general term "
             "so the specific detail can no longer be inferred.";
  }
  return "";
}

absl::StatusOr<RewritePrompt> BuildPrompt(std::string_view sentence,
                                          const AlignedSegment& segment,
                                          RewriteAction action,
                                          const PromptTemplate& tmpl) {
  return BuildPrompt(sentence, std::span<const AlignedSegment>(&segment, 1),
                     action, tmpl);
}

absl::StatusOr<RewritePrompt> BuildPrompt(
    std::string_view sentence, std::span<const AlignedSegment> segments,
    RewriteAction action, const PromptTemplate& tmpl) {
  if (segments.empty()) {
    return absl::InvalidArgumentError("no segment to rewrite");
  }
  const std::vector<std::string> tokens = Tokenize(sentence);
  std::vector<std::string> surfaces;
  for (const AlignedSegment& segment : segments) {
    const std::vector<std::string> needle = segment.Tokens();
    if (FindTokenRun(tokens, needle) == tokens.size()) {
      return absl::NotFoundError(absl::StrCat(
          "segment not found: '", segment.surface, "' in '", Sv(sentence), "'"));
    }
    surfaces.push_back(segment.surface);
  }
  RewritePrompt prompt;
  prompt.base_sentence = std::string(sentence);
  prompt.segments.assign(segments.begin(), segments.end());
  prompt.action = action;
  prompt.instruction_text = tmpl.Render(
      sentence, absl::StrJoin(surfaces, "\", \""), ActionDirective(action));
  return prompt;
}

}  // namespace privrewrite
