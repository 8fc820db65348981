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

#ifndef PRIVREWRITE_EVAL_ATTACK_H_
#define PRIVREWRITE_EVAL_ATTACK_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "privrewrite/core/types.h"

namespace privrewrite {

// Observation emitted when an original token was deleted.
inline constexpr std::string_view kGapToken = "<gap>";
// Context values at sentence boundaries.
inline constexpr std::string_view kLeftBoundary = "<s>";
inline constexpr std::string_view kRightBoundary = "</s>";

inline constexpr double kProbabilityTolerance = 1e-9;

using Distribution = std::map<std::string, double>;

// Window-1 context of an observation: nearest rewritten tokens on each side.
struct AttackContext {
  std::string left;
  std::string right;

  friend auto operator<=>(const AttackContext&,
                          const AttackContext&) = default;
};

// Context-specific overrides. An empty prior, or a missing emission row,
// falls back to the context-free table.
struct ContextTable {
  Distribution prior;
  std::map<std::string, Distribution> emission;
};

// Adversary knowledge: a prior over the sensitive vocabulary X and the
// emission distribution Pr(y | x), optionally refined per context.
class ChannelModel {
 public:
  static absl::StatusOr<ChannelModel> Create(
      Distribution prior, std::map<std::string, Distribution> emission,
      std::map<AttackContext, ContextTable> contextual = {});

  // {"prior": {x: p}, "emission": {x: {y: p}},
  //  "contextual": [{"left": l, "right": r, "prior": {...},
  //                  "emission": {...}}]}
  static absl::StatusOr<ChannelModel> FromJson(const nlohmann::json& doc);
  static absl::StatusOr<ChannelModel> Load(const std::string& path);
  nlohmann::json ToJson() const;

  // Sorted.
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  bool Contains(std::string_view x) const;
  bool has_contextual() const { return !contextual_.empty(); }
  // Every y with non-zero probability under some row, sorted.
  std::vector<std::string> Observations() const;

  double Prior(std::string_view x) const;
  double Emission(std::string_view y, std::string_view x) const;
  double Prior(std::string_view x, const AttackContext& context) const;
  double Emission(std::string_view y, std::string_view x,
                  const AttackContext& context) const;

 private:
  ChannelModel() = default;

  std::vector<std::string> vocabulary_;
  Distribution prior_;
  std::map<std::string, Distribution> emission_;
  std::map<AttackContext, ContextTable> contextual_;
};

// argmax_x Pr(y | x) Pr(x), ties to the lexicographically smallest x.
// Fails with "unreachable observation" when every product is zero.
absl::StatusOr<std::string> ReconstructContextFree(std::string_view y,
                                                   const ChannelModel& channel);

// As above with Pr(y | x, c) Pr(x | c). Requires contextual tables.
absl::StatusOr<std::string> ReconstructContextual(std::string_view y,
                                                  const AttackContext& context,
                                                  const ChannelModel& channel);

enum class AttackMode { kContextFree, kContextual };

struct AttackPair {
  std::vector<std::string> original_tokens;
  std::string rewritten;
};

AttackPair MakeAttackPair(const Utterance& original, std::string rewritten);

struct AttackReport {
  // Absent when there were no differing sensitive positions.
  std::optional<double> asr_context_free;
  std::optional<double> asr_contextual;
  size_t aligned_pairs = 0;
  size_t differing_pairs = 0;
  size_t correct_context_free = 0;
  size_t correct_contextual = 0;
  size_t unreachable = 0;
};

// Aligns each pair, then attacks every position whose original token is in
// X and differs from its aligned rewritten token (a gap observes kGapToken).
absl::StatusOr<AttackReport> AttackSuccessRate(std::span<const AttackPair> pairs,
                                               const ChannelModel& channel,
                                               AttackMode mode);

// Sum over y of max_x Pr(y | x) Pr(x).
double BayesAccuracy(const ChannelModel& channel);

// Empirical channel from the differing sensitive positions of aligned pairs,
// with add-one smoothing over X and the observed outputs.
absl::StatusOr<ChannelModel> EstimateChannel(
    std::span<const AttackPair> pairs,
    const std::vector<std::string>& vocabulary);

}  // namespace privrewrite

#endif  // PRIVREWRITE_EVAL_ATTACK_H_
