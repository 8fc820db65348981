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

#include "privrewrite/pipeline/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace privrewrite {

using nlohmann::json;

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
             nullptr);
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    absl::StrAppendFormat(&hex, "%02x", digest[i]);
  }
  return hex;
}

absl::StatusOr<std::string> Sha256File(const std::filesystem::path& path) {
  auto data = ReadFile(path);
  if (!data.ok()) return data.status();
  return Sha256Hex(*data);
}

json RunManifest::ToJson() const {
  json skipped_docs = json::array();
  for (const SkippedDocument& s : skipped) {
    skipped_docs.push_back({{"doc_id", s.doc_id}, {"error", s.error}});
  }
  json doc = {{"config_hash", config_hash},
              {"dataset_hash", dataset_hash},
              {"dataset_path", dataset_path},
              {"backend", backend},
              {"strategy", strategy},
              {"seed", seed},
              {"started_at", started_at},
              {"finished_at", finished_at},
              {"documents", documents},
              {"skip_count", skipped.size()},
              {"skipped", std::move(skipped_docs)},
              {"trace_files", trace_files},
              {"file_hashes", file_hashes}};
  doc["cost"] = cost.has_value() ? privrewrite::ToJson(*cost) : json(nullptr);
  return doc;
}

absl::StatusOr<RunManifest> RunManifest::FromJson(const json& doc) {
  try {
    RunManifest m;
    m.config_hash = doc.at("config_hash").get<std::string>();
    m.dataset_hash = doc.at("dataset_hash").get<std::string>();
    m.dataset_path = doc.value("dataset_path", "");
    m.backend = doc.at("backend").get<std::string>();
    m.strategy = doc.at("strategy").get<std::string>();
    m.seed = doc.at("seed").get<uint64_t>();
    m.started_at = doc.value("started_at", "");
    m.finished_at = doc.value("finished_at", "");
    m.documents = doc.at("documents").get<size_t>();
    for (const json& s : doc.at("skipped")) {
      m.skipped.push_back({s.at("doc_id").get<std::string>(),
                           s.at("error").get<std::string>()});
    }
    m.trace_files =
        doc.at("trace_files").get<std::map<std::string, std::string>>();
    m.file_hashes =
        doc.at("file_hashes").get<std::map<std::string, std::string>>();
    if (doc.contains("cost") && !doc["cost"].is_null()) {
      auto cost = CostInputsFromJson(doc["cost"]);
      if (!cost.ok()) return cost.status();
      m.cost = *cost;
    }
    return m;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed manifest: ", e.what()));
  }
}

absl::StatusOr<RunManifest> LoadManifest(const std::filesystem::path& path) {
  auto data = ReadFile(path);
  if (!data.ok()) return data.status();
  json doc = json::parse(*data, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), " is not valid JSON"));
  }
  return RunManifest::FromJson(doc);
}

absl::StatusOr<std::vector<AuditFinding>> AuditRun(
    const std::filesystem::path& run_dir) {
  auto manifest = LoadManifest(run_dir / kManifestFile);
  if (!manifest.ok()) return manifest.status();
  std::vector<AuditFinding> findings;
  for (const auto& [relative, expected] : manifest->file_hashes) {
    const std::filesystem::path path = run_dir / relative;
    if (!std::filesystem::exists(path)) {
      findings.push_back({relative, "missing"});
      continue;
    }
    auto actual = Sha256File(path);
    if (!actual.ok()) {
      findings.push_back({relative, std::string(actual.status().message())});
    } else if (*actual != expected) {
      findings.push_back({relative, "hash mismatch"});
    }
  }
  for (const auto& [doc_id, relative] : manifest->trace_files) {
    if (!manifest->file_hashes.contains(relative)) {
      findings.push_back({relative, "trace file not hashed"});
    }
  }
  return findings;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view data) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      return absl::InternalError(absl::StrCat(
          "cannot create ", path.parent_path().string(), ": ", ec.message()));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::InternalError(absl::StrCat("cannot write ", path.string()));
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) {
    return absl::InternalError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace privrewrite
