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

#ifndef PRIVREWRITE_CORE_TOKENIZER_H_
#define PRIVREWRITE_CORE_TOKENIZER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privrewrite {

// Lowercases ASCII, splits on whitespace, strips leading and trailing ASCII
// punctuation from each piece and drops pieces that become empty. Bytes
// outside ASCII are passed through untouched.
std::vector<std::string> Tokenize(std::string_view text);

// Joins tokens with single spaces.
std::string JoinTokens(std::span<const std::string> tokens);

// Splits on ASCII whitespace without any normalization.
std::vector<std::string> SplitWhitespace(std::string_view text);

// Index of the first occurrence of needle as a contiguous run inside
// haystack, or haystack.size() when absent. An empty needle is never found.
size_t FindTokenRun(std::span<const std::string> haystack,
                    std::span<const std::string> needle);

// True for a small closed list of English function words. Used by the mock
// backends to decide which hypothesis tokens carry content.
bool IsStopword(std::string_view token);

}  // namespace privrewrite

#endif  // PRIVREWRITE_CORE_TOKENIZER_H_
