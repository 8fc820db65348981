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

#ifndef PRIVREWRITE_PIPELINE_MANIFEST_H_
#define PRIVREWRITE_PIPELINE_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "privrewrite/eval/cost.h"

namespace privrewrite {

inline constexpr std::string_view kManifestFile = "manifest.json";

std::string Sha256Hex(std::string_view data);
absl::StatusOr<std::string> Sha256File(const std::filesystem::path& path);

struct SkippedDocument {
  std::string doc_id;
  std::string error;
};

struct RunManifest {
  std::string config_hash;
  std::string dataset_hash;
  std::string dataset_path;
  std::string backend;
  std::string strategy;
  uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  size_t documents = 0;
  std::vector<SkippedDocument> skipped;
  // doc_id -> trace file, relative to the run directory.
  std::map<std::string, std::string> trace_files;
  // Relative path -> SHA-256 of every output except the manifest itself.
  std::map<std::string, std::string> file_hashes;
  std::optional<CostInputs> cost;

  nlohmann::json ToJson() const;
  static absl::StatusOr<RunManifest> FromJson(const nlohmann::json& doc);
};

absl::StatusOr<RunManifest> LoadManifest(const std::filesystem::path& path);

struct AuditFinding {
  std::string path;
  std::string problem;
};

// Rehashes every recorded file under run_dir. Empty means clean.
absl::StatusOr<std::vector<AuditFinding>> AuditRun(
    const std::filesystem::path& run_dir);

// Current UTC time, ISO 8601 with seconds.
std::string UtcTimestamp();

// Writes data to path, creating parent directories.
absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view data);
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

}  // namespace privrewrite

#endif  // PRIVREWRITE_PIPELINE_MANIFEST_H_
