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

#include "privrewrite/pipeline/pipeline.h"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/pipeline/run_config.h"
#include "spdlog/spdlog.h"

namespace privrewrite {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Runs fn(i) for i in [0, n) on at most workers threads. Each index runs
// exactly once; results must be stored by index.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const size_t threads =
      std::min(n, static_cast<size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

json SegmentJson(const AlignedSegment& s) {
  json doc = {{"start", s.span.start},
              {"end", s.span.end},
              {"surface", s.surface},
              {"score", s.score}};
  doc["source_item"] =
      s.source_item.has_value() ? json(*s.source_item) : json(nullptr);
  return doc;
}

json TargetsJson(const std::vector<AlignedSegment>& targets) {
  json out = json::array();
  for (const AlignedSegment& s : targets) out.push_back(s.surface);
  return out;
}

std::string AlignmentLine(const RecordAlignment& alignment) {
  json sentences = json::array();
  for (size_t i = 0; i < alignment.sentences.size(); ++i) {
    const SentenceAlignment& sa = alignment.sentences[i];
    json segments = json::array();
    for (const AlignedSegment& s : sa.alignment.segments) {
      segments.push_back(SegmentJson(s));
    }
    sentences.push_back({{"index", i},
                         {"text", sa.sentence.text()},
                         {"rewrite", sa.rewrite},
                         {"threshold", sa.alignment.threshold_used},
                         {"scorer", sa.alignment.scorer_name},
                         {"segments", std::move(segments)}});
  }
  return json({{"doc_id", alignment.doc_id}, {"sentences", sentences}}).dump() +
         "\n";
}

struct Processed {
  std::optional<RecordOutcome> outcome;
  std::optional<DocumentMetrics> metrics;
  absl::Status error;
};

std::vector<absl::StatusOr<RecordAlignment>> AlignAll(
    const Dataset& dataset, const PipelineContext& ctx) {
  std::vector<absl::StatusOr<RecordAlignment>> out(
      dataset.records.size(), absl::UnknownError("not aligned"));
  ParallelFor(dataset.records.size(), ctx.config().workers, [&](size_t i) {
    out[i] = AlignRecord(dataset.records[i], ctx);
  });
  return out;
}

std::vector<Processed> ProcessAll(
    const Dataset& dataset,
    const std::vector<absl::StatusOr<RecordAlignment>>& alignments,
    StrategyKind strategy, const PipelineContext& ctx) {
  std::vector<Processed> out(dataset.records.size());
  const EvalContext eval = ctx.eval_context();
  ParallelFor(dataset.records.size(), ctx.config().workers, [&](size_t i) {
    const DatasetRecord& record = dataset.records[i];
    Processed& p = out[i];
    if (!alignments[i].ok()) {
      p.error = alignments[i].status();
      return;
    }
    auto outcome = RewriteRecord(record, *alignments[i], strategy, ctx);
    if (!outcome.ok()) {
      p.error = outcome.status();
      return;
    }
    DocumentEvalInput input{record.doc_id, record.utterance.text(),
                            outcome->rewrite, record.reference, &record.spec};
    auto metrics = ComputeDocumentMetrics(input, eval);
    if (!metrics.ok()) {
      p.error = metrics.status();
      return;
    }
    p.outcome = *std::move(outcome);
    p.metrics = *std::move(metrics);
  });
  return out;
}

absl::Status AllFailed(const std::vector<Processed>& processed) {
  for (const Processed& p : processed) {
    if (!p.error.ok()) {
      return absl::Status(
          p.error.code(),
          absl::StrCat("all ", processed.size(),
                       " documents failed; first error: ", p.error.message()));
    }
  }
  return absl::InternalError("no documents processed");
}

std::string ConfigHash(const RunConfig& cfg) {
  return Sha256Hex(RenderConfigText(SerializeRunConfig(cfg)));
}

class OutputWriter {
 public:
  explicit OutputWriter(fs::path root) : root_(std::move(root)) {}

  absl::Status Write(const std::string& relative, std::string_view data) {
    if (auto s = WriteFile(root_ / relative, data); !s.ok()) return s;
    hashes_[relative] = Sha256Hex(data);
    return absl::OkStatus();
  }

  const std::map<std::string, std::string>& hashes() const { return hashes_; }

 private:
  fs::path root_;
  std::map<std::string, std::string> hashes_;
};

}  // namespace

std::string TraceFileName(std::string_view doc_id) {
  std::string safe;
  for (char c : doc_id) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      c == '.';
    safe += keep ? c : '_';
  }
  if (safe != doc_id || safe.empty() || safe[0] == '.') {
    safe = absl::StrCat(safe, "-", Sha256Hex(doc_id).substr(0, 8));
  }
  return absl::StrCat(Sv(kTraceDir), "/", safe, ".jsonl");
}

std::string SerializeTraces(const RecordOutcome& outcome) {
  std::string out;
  for (const SentenceTrace& st : outcome.traces) {
    const SearchTrace& t = st.trace;
    const json targets = TargetsJson(t.targets);
    for (const Expansion& e : t.expansions) {
      std::vector<NodeId> path = e.path;
      path.push_back(e.node);
      json line = {{"event", "expansion"},
                   {"sentence", st.sentence_index},
                   {"targets", targets},
                   {"path", path},
                   {"action", ActionName(e.action)},
                   {"text", e.text},
                   {"reward", e.reward},
                   {"accepted", e.accepted}};
      absl::StrAppend(&out, line.dump(), "\n");
    }
    for (const ExpansionFailure& f : t.failures) {
      json line = {{"event", "failure"},
                   {"sentence", st.sentence_index},
                   {"targets", targets},
                   {"path", f.path},
                   {"action", ActionName(f.action)},
                   {"error", f.message}};
      absl::StrAppend(&out, line.dump(), "\n");
    }
    json result = {{"event", "result"},
                   {"sentence", st.sentence_index},
                   {"targets", targets},
                   {"root", t.root_sentence},
                   {"text", t.best_leaf_text},
                   {"reward", t.best_leaf_reward},
                   {"terminated_early", t.terminated_early},
                   {"degraded", t.degraded},
                   {"exhausted", t.exhausted},
                   {"skipped", t.skipped}};
    absl::StrAppend(&out, result.dump(), "\n");
  }
  return out;
}

absl::StatusOr<RunResult> RunPipeline(const PipelineContext& ctx,
                                      const RunOptions& options) {
  RunManifest manifest;
  manifest.started_at = UtcTimestamp();
  auto dataset_bytes = ReadFile(options.dataset_path);
  if (!dataset_bytes.ok()) return dataset_bytes.status();
  auto dataset = ParseDataset(*dataset_bytes);
  if (!dataset.ok()) return dataset.status();
  for (const RejectedLine& r : dataset->rejects) {
    spdlog::warn("dataset line {} rejected: {}", r.line_number, r.message);
  }
  std::optional<ChannelModel> channel;
  if (options.channel_path.has_value()) {
    auto loaded = ChannelModel::Load(*options.channel_path);
    if (!loaded.ok()) return loaded.status();
    channel = *std::move(loaded);
  }

  const auto alignments = AlignAll(*dataset, ctx);
  const std::vector<Processed> processed =
      ProcessAll(*dataset, alignments, options.strategy, ctx);

  std::string rewrites;
  std::string alignment_lines;
  std::vector<DocumentMetrics> rows;
  std::map<std::string, std::string> rewrite_map;
  OutputWriter writer(options.out_dir);
  for (size_t i = 0; i < processed.size(); ++i) {
    const DatasetRecord& record = dataset->records[i];
    const Processed& p = processed[i];
    if (!p.error.ok()) {
      spdlog::error("document {} skipped: {}", record.doc_id,
                    StdSv(p.error.message()));
      manifest.skipped.push_back(
          {record.doc_id, std::string(p.error.message())});
      continue;
    }
    alignment_lines += AlignmentLine(*alignments[i]);
    json line = {{"doc_id", record.doc_id},
                 {"strategy", StrategyName(options.strategy)},
                 {"original", record.utterance.text()},
                 {"rewrite", p.outcome->rewrite}};
    rewrites += line.dump() + "\n";
    rewrite_map[record.doc_id] = p.outcome->rewrite;
    rows.push_back(*p.metrics);
    const std::string trace_path = TraceFileName(record.doc_id);
    if (auto s = writer.Write(trace_path, SerializeTraces(*p.outcome));
        !s.ok()) {
      return s;
    }
    manifest.trace_files[record.doc_id] = trace_path;
  }
  if (rows.empty()) return AllFailed(processed);

  RunResult result;
  result.metrics = AggregateMetrics(std::move(rows), ctx.config().nli_cutoff);
  if (auto s = writer.Write(std::string(kRewritesFile), rewrites); !s.ok()) {
    return s;
  }
  if (auto s = writer.Write(std::string(kAlignmentFile), alignment_lines);
      !s.ok()) {
    return s;
  }
  if (auto s = writer.Write(std::string(kMetricsJson),
                            ToJson(result.metrics).dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  if (auto s =
          writer.Write(std::string(kMetricsText), RenderTable(result.metrics));
      !s.ok()) {
    return s;
  }
  if (channel.has_value()) {
    auto attack = AttackRewrites(*dataset, rewrite_map, *channel);
    if (!attack.ok()) return attack.status();
    result.attack = *attack;
    if (auto s = writer.Write(std::string(kAttackJson),
                              ToJson(*attack).dump(2) + "\n");
        !s.ok()) {
      return s;
    }
    if (auto s = writer.Write(std::string(kAttackText), RenderTable(*attack));
        !s.ok()) {
      return s;
    }
  }

  manifest.config_hash = ConfigHash(ctx.config());
  manifest.dataset_hash = Sha256Hex(*dataset_bytes);
  manifest.dataset_path = options.dataset_path;
  manifest.backend = absl::StrCat(options.backend_name, " ",
                                  ctx.suite().Identity());
  manifest.strategy = std::string(StrategyName(options.strategy));
  manifest.seed = ctx.config().search.rng_seed;
  manifest.documents = result.metrics.documents;
  manifest.cost = ctx.config().cost;
  manifest.file_hashes = writer.hashes();
  manifest.finished_at = UtcTimestamp();
  if (auto s = WriteFile(options.out_dir / kManifestFile,
                         manifest.ToJson().dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  result.manifest = std::move(manifest);
  return result;
}

absl::StatusOr<size_t> RunAlign(const PipelineContext& ctx,
                                const std::string& dataset_path,
                                const fs::path& out_dir) {
  auto dataset = IngestDataset(dataset_path);
  if (!dataset.ok()) return dataset.status();
  const auto alignments = AlignAll(*dataset, ctx);
  std::string lines;
  size_t aligned = 0;
  for (size_t i = 0; i < alignments.size(); ++i) {
    if (!alignments[i].ok()) {
      spdlog::error("document {} not aligned: {}", dataset->records[i].doc_id,
                    StdSv(alignments[i].status().message()));
      continue;
    }
    lines += AlignmentLine(*alignments[i]);
    ++aligned;
  }
  if (aligned == 0) {
    return absl::Status(alignments.front().status().code(),
                        "no record could be aligned");
  }
  if (auto s = WriteFile(out_dir / kAlignmentFile, lines); !s.ok()) return s;
  return aligned;
}

absl::StatusOr<std::map<std::string, std::string>> LoadRewrites(
    const fs::path& path) {
  auto data = ReadFile(path);
  if (!data.ok()) return data.status();
  std::map<std::string, std::string> out;
  size_t begin = 0;
  int line_number = 0;
  while (begin < data->size()) {
    size_t end = data->find('\n', begin);
    if (end == std::string::npos) end = data->size();
    const std::string_view line(data->data() + begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (line.empty()) continue;
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("doc_id") ||
        !doc.contains("rewrite") || !doc["doc_id"].is_string() ||
        !doc["rewrite"].is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), " line ", line_number, ": expected doc_id and rewrite"));
    }
    out[doc["doc_id"].get<std::string>()] = doc["rewrite"].get<std::string>();
  }
  return out;
}

absl::StatusOr<MetricReport> EvaluateRewrites(
    const Dataset& dataset, const std::map<std::string, std::string>& rewrites,
    const PipelineContext& ctx) {
  std::vector<const DatasetRecord*> records;
  for (const DatasetRecord& r : dataset.records) {
    if (rewrites.contains(r.doc_id)) records.push_back(&r);
  }
  if (records.empty()) return absl::InvalidArgumentError("no documents");
  std::vector<absl::StatusOr<DocumentMetrics>> rows(
      records.size(), absl::UnknownError("not evaluated"));
  const EvalContext eval = ctx.eval_context();
  ParallelFor(records.size(), ctx.config().workers, [&](size_t i) {
    const DatasetRecord& r = *records[i];
    rows[i] = ComputeDocumentMetrics(
        DocumentEvalInput{r.doc_id, r.utterance.text(), rewrites.at(r.doc_id),
                          r.reference, &r.spec},
        eval);
  });
  std::vector<DocumentMetrics> ok_rows;
  for (auto& row : rows) {
    if (!row.ok()) return row.status();
    ok_rows.push_back(*std::move(row));
  }
  return AggregateMetrics(std::move(ok_rows), ctx.config().nli_cutoff);
}

absl::StatusOr<AttackReport> AttackRewrites(
    const Dataset& dataset, const std::map<std::string, std::string>& rewrites,
    const ChannelModel& channel) {
  std::vector<AttackPair> pairs;
  for (const DatasetRecord& r : dataset.records) {
    auto it = rewrites.find(r.doc_id);
    if (it != rewrites.end()) pairs.push_back(MakeAttackPair(r.utterance, it->second));
  }
  if (pairs.empty()) return absl::InvalidArgumentError("no documents");
  return AttackSuccessRate(pairs, channel,
                           channel.has_contextual() ? AttackMode::kContextual
                                                    : AttackMode::kContextFree);
}

json AblationReport::ToJson() const {
  json out = json::array();
  for (const AblationRow& row : rows) {
    json r = {{"strategy", StrategyName(row.strategy)},
              {"rouge1_f", row.rouge1_f},
              {"distinct2", row.distinct2},
              {"documents", row.documents},
              {"skipped", row.skipped},
              {"expansions", row.expansions},
              {"rewrites", row.rewrites}};
    r["privacy_nli_rate"] = row.privacy_nli_rate.has_value()
                                ? json(*row.privacy_nli_rate)
                                : json(nullptr);
    r["perplexity"] =
        row.perplexity.has_value() ? json(*row.perplexity) : json(nullptr);
    out.push_back(std::move(r));
  }
  return {{"strategies", std::move(out)}};
}

std::string AblationReport::RenderTable() const {
  std::vector<std::vector<std::string>> table = {
      {"strategy", "privacy_nli_%", "rouge1_f", "ppl", "distinct2", "docs",
       "skipped"}};
  for (const AblationRow& row : rows) {
    table.push_back({std::string(StrategyName(row.strategy)),
                     FormatOptional(row.privacy_nli_rate, 2),
                     FormatOptional(row.rouge1_f), FormatOptional(row.perplexity, 3),
                     FormatOptional(row.distinct2), absl::StrCat(row.documents),
                     absl::StrCat(row.skipped)});
  }
  return RenderRows(table);
}

absl::StatusOr<AblationReport> RunAblation(
    const PipelineContext& ctx, const std::string& dataset_path,
    const std::optional<fs::path>& out_dir) {
  auto dataset = IngestDataset(dataset_path);
  if (!dataset.ok()) return dataset.status();
  // Shared by every strategy, so rows differ only in the search.
  const auto alignments = AlignAll(*dataset, ctx);
  AblationReport report;
  for (StrategyKind strategy : kAllStrategies) {
    const std::vector<Processed> processed =
        ProcessAll(*dataset, alignments, strategy, ctx);
    AblationRow row;
    row.strategy = strategy;
    std::vector<DocumentMetrics> rows;
    for (size_t i = 0; i < processed.size(); ++i) {
      const Processed& p = processed[i];
      if (!p.error.ok()) {
        spdlog::error("{}: document {} skipped: {}", StrategyName(strategy),
                      dataset->records[i].doc_id, StdSv(p.error.message()));
        ++row.skipped;
        continue;
      }
      rows.push_back(*p.metrics);
      row.rewrites[p.outcome->doc_id] = p.outcome->rewrite;
      for (const SentenceTrace& st : p.outcome->traces) {
        row.expansions += st.trace.expansions.size() + st.trace.failures.size();
      }
    }
    if (rows.empty()) return AllFailed(processed);
    const MetricReport metrics =
        AggregateMetrics(std::move(rows), ctx.config().nli_cutoff);
    row.privacy_nli_rate = metrics.privacy_nli_rate;
    row.rouge1_f = metrics.rouge1_f;
    row.perplexity = metrics.perplexity;
    row.distinct2 = metrics.distinct2;
    row.documents = metrics.documents;
    report.rows.push_back(std::move(row));
  }
  if (out_dir.has_value()) {
    if (auto s = WriteFile(*out_dir / kAblationJson,
                           report.ToJson().dump(2) + "\n");
        !s.ok()) {
      return s;
    }
    if (auto s = WriteFile(*out_dir / kAblationText, report.RenderTable());
        !s.ok()) {
      return s;
    }
  }
  return report;
}

absl::StatusOr<RenderedReport> EmitReport(
    const fs::path& run_dir, const std::optional<CostInputs>& cost_override) {
  auto manifest = LoadManifest(run_dir / kManifestFile);
  if (!manifest.ok()) return manifest.status();
  if (manifest->documents == 0 || manifest->trace_files.empty()) {
    return absl::InvalidArgumentError("no documents");
  }
  for (const auto& [doc_id, relative] : manifest->trace_files) {
    if (!fs::exists(run_dir / relative)) {
      return absl::NotFoundError(absl::StrCat(
          "missing trace file ", (run_dir / relative).string()));
    }
  }
  RenderedReport out;
  out.text = absl::StrCat("strategy: ", manifest->strategy,
                          "\nbackend:  ", manifest->backend,
                          "\nseed:     ", manifest->seed,
                          "\ndocuments: ", manifest->documents,
                          " (skipped ", manifest->skipped.size(), ")\n\n");
  out.doc["strategy"] = manifest->strategy;
  out.doc["documents"] = manifest->documents;
  out.doc["skipped"] = manifest->skipped.size();

  auto metrics_text = ReadFile(run_dir / kMetricsJson);
  if (!metrics_text.ok()) return metrics_text.status();
  json metrics_doc = json::parse(*metrics_text, nullptr, false);
  auto metrics = MetricReportFromJson(metrics_doc);
  if (!metrics.ok()) return metrics.status();
  out.text += RenderTable(*metrics);
  out.doc["metrics"] = ToJson(*metrics);

  if (manifest->file_hashes.contains(std::string(kAttackJson))) {
    auto attack_text = ReadFile(run_dir / kAttackJson);
    if (!attack_text.ok()) return attack_text.status();
    json attack = json::parse(*attack_text, nullptr, false);
    if (attack.is_discarded()) {
      return absl::InvalidArgumentError("attack.json is not valid JSON");
    }
    AttackReport report;
    auto opt = [&](const char* key) -> std::optional<double> {
      if (!attack.contains(key) || attack[key].is_null()) return std::nullopt;
      return attack[key].get<double>();
    };
    report.asr_context_free = opt("asr_context_free");
    report.asr_contextual = opt("asr_contextual");
    report.aligned_pairs = attack.value("aligned_pairs", size_t{0});
    report.differing_pairs = attack.value("differing_pairs", size_t{0});
    report.unreachable = attack.value("unreachable", size_t{0});
    out.text += "\n" + RenderTable(report);
    out.doc["attack"] = attack;
  }

  const std::optional<CostInputs> cost =
      cost_override.has_value() ? cost_override : manifest->cost;
  if (cost.has_value()) {
    auto efficiency = CostEfficiency(*cost);
    std::vector<std::vector<std::string>> table = {{"cost", "value"}};
    table.push_back({"p_ours", absl::StrFormat("%.2f", cost->p_ours)});
    table.push_back({"p_base", absl::StrFormat("%.2f", cost->p_base)});
    table.push_back({"c_ours", absl::StrFormat("%.3f", cost->c_ours)});
    table.push_back({"c_base", absl::StrFormat("%.3f", cost->c_base)});
    table.push_back({"efficiency",
                     efficiency.ok() ? absl::StrFormat("%.1f", *efficiency)
                                     : std::string(efficiency.status().message())});
    out.text += "\n" + RenderRows(table);
    out.doc["cost"] = ToJson(*cost);
    out.doc["cost"]["efficiency"] =
        efficiency.ok() ? json(*efficiency) : json(nullptr);
  }
  return out;
}

}  // namespace privrewrite
