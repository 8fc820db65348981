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

#ifndef PRIVREWRITE_CORE_CONFIG_H_
#define PRIVREWRITE_CORE_CONFIG_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace privrewrite {

// Which side of the threshold a gate score must fall on to be accepted.
// Reward-style scorers (higher is more private) use kAcceptAtOrAbove;
// leakage-style scorers use kAcceptAtOrBelow.
enum class GateDirection { kAcceptAtOrBelow, kAcceptAtOrAbove };

struct SearchConfig {
  // Node expansions per segment.
  int tree_budget = 5;
  // Candidates requested per one-step rewrite.
  int sample_count = 5;
  double reward_threshold = 0.10;
  double uct_constant = 6.36;
  int max_tokens = 128;
  GateDirection gate_direction = GateDirection::kAcceptAtOrAbove;
  uint64_t rng_seed = 0;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

using RawConfig = std::map<std::string, std::string>;

inline constexpr std::string_view kEnvPrefix = "PRIVREWRITE_";

// Keys understood by ValidateConfig, in declaration order.
std::span<const std::string_view> SearchConfigKeys();

// Builds a SearchConfig from raw key/value pairs. Missing keys take the
// defaults above. Unknown keys and out-of-range values are rejected with a
// message that names the key.
absl::StatusOr<SearchConfig> ValidateConfig(const RawConfig& raw);

// Inverse of ValidateConfig; doubles are printed with round-trip precision.
RawConfig SerializeConfig(const SearchConfig& config);

// "key = value" lines; '#' starts a comment; blank lines ignored. Duplicate
// keys are an error.
absl::StatusOr<RawConfig> ParseConfigText(std::string_view text);
absl::StatusOr<RawConfig> LoadConfigFile(const std::string& path);
std::string RenderConfigText(const RawConfig& raw);

using EnvLookup = std::function<const char*(const char*)>;

// For each key, PRIVREWRITE_<KEY> (uppercased) replaces the file value when
// set in the environment.
void ApplyEnvironmentOverrides(RawConfig& raw,
                               std::span<const std::string_view> keys,
                               const EnvLookup& lookup);

std::string_view GateDirectionName(GateDirection direction);
absl::StatusOr<GateDirection> ParseGateDirection(std::string_view name);

inline bool GateAccepts(double score, double threshold,
                        GateDirection direction) {
  return direction == GateDirection::kAcceptAtOrAbove ? score >= threshold
                                                      : score <= threshold;
}

// Maps a score onto "higher is better" for the given direction.
inline double OrientScore(double score, GateDirection direction) {
  return direction == GateDirection::kAcceptAtOrAbove ? score : 1.0 - score;
}

}  // namespace privrewrite

#endif  // PRIVREWRITE_CORE_CONFIG_H_
