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

#ifndef PRIVREWRITE_PIPELINE_PIPELINE_H_
#define PRIVREWRITE_PIPELINE_PIPELINE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "privrewrite/eval/attack.h"
#include "privrewrite/eval/report.h"
#include "privrewrite/pipeline/context.h"
#include "privrewrite/pipeline/dataset.h"
#include "privrewrite/pipeline/manifest.h"
#include "privrewrite/search/search.h"

namespace privrewrite {

// Output layout inside a run directory.
inline constexpr std::string_view kRewritesFile = "rewrites.jsonl";
inline constexpr std::string_view kAlignmentFile = "alignment.jsonl";
inline constexpr std::string_view kMetricsJson = "metrics.json";
inline constexpr std::string_view kMetricsText = "metrics.txt";
inline constexpr std::string_view kAttackJson = "attack.json";
inline constexpr std::string_view kAttackText = "attack.txt";
inline constexpr std::string_view kAblationJson = "ablation.json";
inline constexpr std::string_view kAblationText = "ablation.txt";
inline constexpr std::string_view kTraceDir = "traces";

struct RunOptions {
  std::filesystem::path out_dir;
  std::string dataset_path;
  StrategyKind strategy = StrategyKind::kTree;
  std::optional<std::string> channel_path;
  // Recorded in the manifest.
  std::string backend_name = "mock";
};

struct RunResult {
  RunManifest manifest;
  MetricReport metrics;
  std::optional<AttackReport> attack;
};

// Aligns, rewrites and evaluates every record, then writes rewrites.jsonl,
// alignment.jsonl, traces/<doc>.jsonl, metrics.{json,txt}, attack.{json,txt}
// when a channel is given, and manifest.json. Records that fail are skipped
// and listed in the manifest. Fails when every record failed.
absl::StatusOr<RunResult> RunPipeline(const PipelineContext& ctx,
                                      const RunOptions& options);

// Writes alignment.jsonl only. Returns the number of aligned records.
absl::StatusOr<size_t> RunAlign(const PipelineContext& ctx,
                                const std::string& dataset_path,
                                const std::filesystem::path& out_dir);

// doc_id -> rewrite from a rewrites.jsonl file.
absl::StatusOr<std::map<std::string, std::string>> LoadRewrites(
    const std::filesystem::path& path);

absl::StatusOr<MetricReport> EvaluateRewrites(
    const Dataset& dataset, const std::map<std::string, std::string>& rewrites,
    const PipelineContext& ctx);

absl::StatusOr<AttackReport> AttackRewrites(
    const Dataset& dataset, const std::map<std::string, std::string>& rewrites,
    const ChannelModel& channel);

struct AblationRow {
  StrategyKind strategy = StrategyKind::kTree;
  std::optional<double> privacy_nli_rate;
  double rouge1_f = 0.0;
  std::optional<double> perplexity;
  double distinct2 = 0.0;
  size_t documents = 0;
  size_t skipped = 0;
  // doc_id -> rewrite, for inspection.
  std::map<std::string, std::string> rewrites;
  // Total rewrite calls across the strategy's traces.
  size_t expansions = 0;
};

struct AblationReport {
  std::vector<AblationRow> rows;

  nlohmann::json ToJson() const;
  std::string RenderTable() const;
};

// All five strategies on the same records, seed and alignments. Writes
// ablation.{json,txt} when out_dir is given.
absl::StatusOr<AblationReport> RunAblation(
    const PipelineContext& ctx, const std::string& dataset_path,
    const std::optional<std::filesystem::path>& out_dir);

struct RenderedReport {
  std::string text;
  nlohmann::json doc;
};

// Renders the metrics, attack and cost sections of a finished run. The cost
// override replaces inputs recorded in the manifest.
absl::StatusOr<RenderedReport> EmitReport(
    const std::filesystem::path& run_dir,
    const std::optional<CostInputs>& cost_override = std::nullopt);

// Trace lines of one record, as written to traces/<doc>.jsonl.
std::string SerializeTraces(const RecordOutcome& outcome);

// File-system safe name for a doc_id.
std::string TraceFileName(std::string_view doc_id);

}  // namespace privrewrite

#endif  // PRIVREWRITE_PIPELINE_PIPELINE_H_
