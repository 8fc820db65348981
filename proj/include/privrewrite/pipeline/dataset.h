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

#ifndef PRIVREWRITE_PIPELINE_DATASET_H_
#define PRIVREWRITE_PIPELINE_DATASET_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

struct DatasetRecord {
  std::string doc_id;
  Utterance utterance;
  PrivacySpec spec;
  std::optional<std::string> reference;
  std::optional<std::string> masked;
};

struct RejectedLine {
  int line_number = 0;
  std::string message;
};

struct Dataset {
  std::vector<DatasetRecord> records;
  std::vector<RejectedLine> rejects;
};

// Largest tolerated fraction of rejected lines.
inline constexpr double kMaxRejectFraction = 0.10;

// One JSON object per line:
//   {"doc_id": s, "utterance": s, "persona": s?, "pii": [{"surface": s,
//    "category": s}]?, "reference": s?, "masked": s?}
// Blank lines are skipped. Bad lines are collected with their 1-based line
// number; more than kMaxRejectFraction of them aborts the whole parse.
absl::StatusOr<Dataset> ParseDataset(std::string_view text);
absl::StatusOr<Dataset> IngestDataset(const std::string& path);

std::string FormatRejects(const std::vector<RejectedLine>& rejects);

}  // namespace privrewrite

#endif  // PRIVREWRITE_PIPELINE_DATASET_H_
