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

#include "privrewrite/core/types.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {

absl::StatusOr<PrivacySpec> PrivacySpec::Create(
    std::string spec_id, std::optional<std::string> persona_text,
    std::vector<PiiItem> pii_items) {
  if (persona_text.has_value() &&
      absl::StripAsciiWhitespace(*persona_text).empty()) {
    persona_text.reset();
  }
  if (!persona_text.has_value() && pii_items.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "privacy spec '", spec_id, "' has neither persona nor pii items"));
  }
  for (size_t i = 0; i < pii_items.size(); ++i) {
    std::string trimmed(absl::StripAsciiWhitespace(pii_items[i].surface));
    if (trimmed.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "privacy spec '", spec_id, "': pii item ", i, " has empty surface"));
    }
    pii_items[i].surface = std::move(trimmed);
  }
  PrivacySpec spec;
  spec.spec_id_ = std::move(spec_id);
  spec.persona_text_ = std::move(persona_text);
  spec.pii_items_ = std::move(pii_items);
  for (const PiiItem& item : spec.pii_items_) {
    spec.statements_.push_back(item.surface);
  }
  if (spec.persona_text_.has_value()) {
    for (std::string& s : SplitSentences(*spec.persona_text_)) {
      spec.statements_.push_back(std::move(s));
    }
  }
  return spec;
}

absl::StatusOr<Utterance> Utterance::Create(std::string doc_id,
                                            std::string text) {
  if (text.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("utterance '", doc_id, "' is empty"));
  }
  Utterance u;
  u.doc_id_ = std::move(doc_id);
  u.tokens_ = Tokenize(text);
  u.text_ = std::move(text);
  return u;
}

std::string_view ActionName(RewriteAction action) {
  switch (action) {
    case RewriteAction::kDelete:
      return "delete";
    case RewriteAction::kObscure:
      return "obscure";
  }
  return "unknown";
}

absl::StatusOr<RewriteAction> ParseAction(std::string_view name) {
  if (name == "delete") return RewriteAction::kDelete;
  if (name == "obscure") return RewriteAction::kObscure;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown rewrite action '", Sv(name), "'"));
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> out;
  auto flush = [&out](std::string_view piece) {
    std::string_view trimmed = StdSv(absl::StripAsciiWhitespace(Sv(piece)));
    if (!trimmed.empty()) out.emplace_back(trimmed);
  };
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    const bool at_end = i + 1 == text.size();
    const bool before_space =
        !at_end && absl::ascii_isspace(static_cast<unsigned char>(text[i + 1]));
    if (at_end || before_space) {
      flush(text.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < text.size()) flush(text.substr(start));
  return out;
}

size_t TokenEditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<size_t> prev(b.size() + 1);
  std::vector<size_t> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace privrewrite
