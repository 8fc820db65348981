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

#ifndef PRIVREWRITE_CORE_TYPES_H_
#define PRIVREWRITE_CORE_TYPES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace privrewrite {

struct PiiItem {
  std::string surface;
  std::string category;

  friend bool operator==(const PiiItem&, const PiiItem&) = default;
};

// What the user does not want to leak: persona sentences, a PII list, or
// both. Immutable once built.
class PrivacySpec {
 public:
  static absl::StatusOr<PrivacySpec> Create(
      std::string spec_id, std::optional<std::string> persona_text,
      std::vector<PiiItem> pii_items);

  const std::string& spec_id() const { return spec_id_; }
  const std::optional<std::string>& persona_text() const {
    return persona_text_;
  }
  const std::vector<PiiItem>& pii_items() const { return pii_items_; }

  // The units the spec is matched against: PII surfaces first, in order,
  // then the persona split into sentences.
  const std::vector<std::string>& Statements() const { return statements_; }

 private:
  PrivacySpec() = default;

  std::string spec_id_;
  std::optional<std::string> persona_text_;
  std::vector<PiiItem> pii_items_;
  std::vector<std::string> statements_;
};

// A piece of user text together with its tokenization.
class Utterance {
 public:
  static absl::StatusOr<Utterance> Create(std::string doc_id,
                                          std::string text);

  const std::string& doc_id() const { return doc_id_; }
  const std::string& text() const { return text_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  Utterance() = default;

  std::string doc_id_;
  std::string text_;
  std::vector<std::string> tokens_;
};

enum class RewriteAction { kDelete = 0, kObscure = 1 };

// Canonical order; tie-breaks everywhere follow it.
inline constexpr std::array<RewriteAction, 2> kAllActions = {
    RewriteAction::kDelete, RewriteAction::kObscure};

std::string_view ActionName(RewriteAction action);
absl::StatusOr<RewriteAction> ParseAction(std::string_view name);

// Sentence split on terminal punctuation (. ! ?) followed by whitespace or
// end of text. Pieces are trimmed; empty pieces are dropped.
std::vector<std::string> SplitSentences(std::string_view text);

// Token-level Levenshtein distance with unit costs.
size_t TokenEditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b);

}  // namespace privrewrite

#endif  // PRIVREWRITE_CORE_TYPES_H_
