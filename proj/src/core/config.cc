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

#include "privrewrite/core/config.h"
#include "privrewrite/core/absl_compat.h"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace privrewrite {
namespace {

constexpr std::array<std::string_view, 7> kKeys = {
    "tree_budget",    "sample_count", "reward_threshold", "uct_constant",
    "max_tokens",     "gate_direction", "rng_seed"};

absl::Status ParsePositiveInt(const RawConfig& raw, std::string_view key,
                              int& out) {
  auto it = raw.find(std::string(key));
  if (it == raw.end()) return absl::OkStatus();
  int value = 0;
  if (!absl::SimpleAtoi(it->second, &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(Sv(key), " must be an integer, got '", it->second, "'"));
  }
  if (value < 1) {
    return absl::InvalidArgumentError(absl::StrCat(Sv(key), " must be >= 1"));
  }
  out = value;
  return absl::OkStatus();
}

absl::Status ParseReal(const RawConfig& raw, std::string_view key,
                       double& out) {
  auto it = raw.find(std::string(key));
  if (it == raw.end()) return absl::OkStatus();
  double value = 0;
  if (!absl::SimpleAtod(it->second, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(Sv(key), " must be a finite real, got '", it->second, "'"));
  }
  out = value;
  return absl::OkStatus();
}

}  // namespace

std::span<const std::string_view> SearchConfigKeys() { return kKeys; }

std::string_view GateDirectionName(GateDirection direction) {
  return direction == GateDirection::kAcceptAtOrAbove ? "accept_at_or_above"
                                                      : "accept_at_or_below";
}

absl::StatusOr<GateDirection> ParseGateDirection(std::string_view name) {
  if (name == "accept_at_or_above") return GateDirection::kAcceptAtOrAbove;
  if (name == "accept_at_or_below") return GateDirection::kAcceptAtOrBelow;
  return absl::InvalidArgumentError(absl::StrCat(
      "gate_direction must be accept_at_or_above or accept_at_or_below, got '",
      Sv(name), "'"));
}

absl::StatusOr<SearchConfig> ValidateConfig(const RawConfig& raw) {
  for (const auto& [key, value] : raw) {
    bool known = false;
    for (std::string_view k : kKeys) known = known || k == key;
    if (!known) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  SearchConfig cfg;
  if (auto s = ParsePositiveInt(raw, "tree_budget", cfg.tree_budget); !s.ok()) {
    return s;
  }
  if (auto s = ParsePositiveInt(raw, "sample_count", cfg.sample_count);
      !s.ok()) {
    return s;
  }
  if (auto s = ParsePositiveInt(raw, "max_tokens", cfg.max_tokens); !s.ok()) {
    return s;
  }
  if (auto s = ParseReal(raw, "reward_threshold", cfg.reward_threshold);
      !s.ok()) {
    return s;
  }
  if (cfg.reward_threshold < 0.0 || cfg.reward_threshold > 1.0) {
    return absl::InvalidArgumentError(
        "reward_threshold must be within [0, 1]");
  }
  if (auto s = ParseReal(raw, "uct_constant", cfg.uct_constant); !s.ok()) {
    return s;
  }
  if (cfg.uct_constant < 0.0) {
    return absl::InvalidArgumentError("uct_constant must be >= 0");
  }
  if (auto it = raw.find("gate_direction"); it != raw.end()) {
    auto direction = ParseGateDirection(it->second);
    if (!direction.ok()) return direction.status();
    cfg.gate_direction = *direction;
  }
  if (auto it = raw.find("rng_seed"); it != raw.end()) {
    if (!absl::SimpleAtoi(it->second, &cfg.rng_seed)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "rng_seed must be an unsigned 64-bit integer, got '", it->second,
          "'"));
    }
  }
  return cfg;
}

RawConfig SerializeConfig(const SearchConfig& config) {
  RawConfig raw;
  raw["tree_budget"] = absl::StrCat(config.tree_budget);
  raw["sample_count"] = absl::StrCat(config.sample_count);
  raw["reward_threshold"] = absl::StrFormat("%.17g", config.reward_threshold);
  raw["uct_constant"] = absl::StrFormat("%.17g", config.uct_constant);
  raw["max_tokens"] = absl::StrCat(config.max_tokens);
  raw["gate_direction"] = std::string(GateDirectionName(config.gate_direction));
  raw["rng_seed"] = absl::StrCat(config.rng_seed);
  return raw;
}

absl::StatusOr<RawConfig> ParseConfigText(std::string_view text) {
  RawConfig raw;
  int line_number = 0;
  for (absl::string_view piece : absl::StrSplit(Sv(text), '\n')) {
    std::string_view line = StdSv(piece);
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = StdSv(absl::StripAsciiWhitespace(Sv(line)));
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": expected key = value"));
    }
    std::string key(StdSv(absl::StripAsciiWhitespace(Sv(line.substr(0, eq)))));
    std::string value(
        StdSv(absl::StripAsciiWhitespace(Sv(line.substr(eq + 1)))));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": empty key"));
    }
    if (!raw.emplace(key, std::move(value)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config line ", line_number, ": duplicate key '", key, "'"));
    }
  }
  return raw;
}

absl::StatusOr<RawConfig> LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

std::string RenderConfigText(const RawConfig& raw) {
  std::string out;
  for (const auto& [key, value] : raw) absl::StrAppend(&out, key, " = ", value, "\n");
  return out;
}

void ApplyEnvironmentOverrides(RawConfig& raw,
                               std::span<const std::string_view> keys,
                               const EnvLookup& lookup) {
  for (std::string_view key : keys) {
    std::string name = absl::StrCat(Sv(kEnvPrefix), absl::AsciiStrToUpper(Sv(key)));
    if (const char* value = lookup(name.c_str()); value != nullptr) {
      raw[std::string(key)] = value;
    }
  }
}

}  // namespace privrewrite
