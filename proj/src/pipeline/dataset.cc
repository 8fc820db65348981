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

#include "privrewrite/pipeline/dataset.h"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace privrewrite {
namespace {

using nlohmann::json;

absl::StatusOr<std::optional<std::string>> OptionalString(const json& doc,
                                                          const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::optional<std::string>();
  if (!it->is_string()) {
    return absl::InvalidArgumentError(absl::StrCat(key, " must be a string"));
  }
  return std::optional<std::string>(it->get<std::string>());
}

absl::StatusOr<std::vector<PiiItem>> ParsePii(const json& doc) {
  std::vector<PiiItem> items;
  auto it = doc.find("pii");
  if (it == doc.end() || it->is_null()) return items;
  if (!it->is_array()) return absl::InvalidArgumentError("pii must be a list");
  for (const json& entry : *it) {
    if (!entry.is_object() || !entry.contains("surface") ||
        !entry["surface"].is_string()) {
      return absl::InvalidArgumentError("pii entry needs a string surface");
    }
    PiiItem item;
    item.surface = entry["surface"].get<std::string>();
    if (entry.contains("category")) {
      if (!entry["category"].is_string()) {
        return absl::InvalidArgumentError("pii category must be a string");
      }
      item.category = entry["category"].get<std::string>();
    }
    items.push_back(std::move(item));
  }
  return items;
}

absl::StatusOr<DatasetRecord> ParseRecord(std::string_view line) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("invalid JSON");
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("record must be an object");
  }
  auto doc_id = OptionalString(doc, "doc_id");
  if (!doc_id.ok()) return doc_id.status();
  if (!doc_id->has_value() || (*doc_id)->empty()) {
    return absl::InvalidArgumentError("missing doc_id");
  }
  auto text = OptionalString(doc, "utterance");
  if (!text.ok()) return text.status();
  if (!text->has_value()) return absl::InvalidArgumentError("missing utterance");
  auto persona = OptionalString(doc, "persona");
  if (!persona.ok()) return persona.status();
  auto reference = OptionalString(doc, "reference");
  if (!reference.ok()) return reference.status();
  auto masked = OptionalString(doc, "masked");
  if (!masked.ok()) return masked.status();
  auto pii = ParsePii(doc);
  if (!pii.ok()) return pii.status();

  auto utterance = Utterance::Create(**doc_id, **text);
  if (!utterance.ok()) return utterance.status();
  auto spec = PrivacySpec::Create(**doc_id, *persona, *std::move(pii));
  if (!spec.ok()) return spec.status();
  return DatasetRecord{**doc_id, *std::move(utterance), *std::move(spec),
                       *std::move(reference), *std::move(masked)};
}

}  // namespace

absl::StatusOr<Dataset> ParseDataset(std::string_view text) {
  Dataset dataset;
  std::set<std::string> seen;
  int line_number = 0;
  int total = 0;
  size_t begin = 0;
  while (begin <= text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    ++total;
    auto record = ParseRecord(line);
    if (!record.ok()) {
      dataset.rejects.push_back(
          {line_number, std::string(record.status().message())});
      continue;
    }
    if (!seen.insert(record->doc_id).second) {
      dataset.rejects.push_back(
          {line_number, absl::StrCat("duplicate doc_id '", record->doc_id, "'")});
      continue;
    }
    dataset.records.push_back(*std::move(record));
  }
  if (total == 0) return absl::InvalidArgumentError("dataset has no records");
  if (static_cast<double>(dataset.rejects.size()) >
      kMaxRejectFraction * static_cast<double>(total)) {
    return absl::InvalidArgumentError(
        absl::StrCat("too many rejected lines (", dataset.rejects.size(), " of ",
                     total, ")\n", FormatRejects(dataset.rejects)));
  }
  return dataset;
}

absl::StatusOr<Dataset> IngestDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open dataset ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseDataset(buffer.str());
}

std::string FormatRejects(const std::vector<RejectedLine>& rejects) {
  std::string out;
  for (const RejectedLine& r : rejects) {
    absl::StrAppend(&out, "line ", r.line_number, ": ", r.message, "\n");
  }
  return out;
}

}  // namespace privrewrite
