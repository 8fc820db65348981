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

#include "privrewrite/core/tokenizer.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace privrewrite {
namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

}  // namespace

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !IsAsciiSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string& piece : SplitWhitespace(text)) {
    size_t begin = 0;
    size_t end = piece.size();
    while (begin < end && IsAsciiPunct(piece[begin])) ++begin;
    while (end > begin && IsAsciiPunct(piece[end - 1])) --end;
    if (begin == end) continue;
    std::string token = piece.substr(begin, end - begin);
    for (char& c : token) {
      if (static_cast<unsigned char>(c) < 0x80) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

size_t FindTokenRun(std::span<const std::string> haystack,
                    std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return haystack.size();
  for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) {
      return i;
    }
  }
  return haystack.size();
}

bool IsStopword(std::string_view token) {
  static constexpr std::array<std::string_view, 48> kStopwords = {
      "a",    "an",   "and",  "are",  "as",   "at",    "be",   "but",
      "by",   "do",   "for",  "from", "had",  "has",   "have", "he",
      "her",  "his",  "i",    "if",   "in",   "is",    "it",   "its",
      "me",   "my",   "no",   "not",  "of",   "on",    "or",   "our",
      "she",  "so",   "that", "the",  "their", "them", "they", "this",
      "to",   "too",  "was",  "we",   "were", "with",  "you",  "your"};
  return std::find(kStopwords.begin(), kStopwords.end(), token) !=
         kStopwords.end();
}

}  // namespace privrewrite
