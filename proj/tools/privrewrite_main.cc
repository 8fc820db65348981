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

// Command-line front end: align, rewrite, evaluate, attack, ablate, report
// and audit.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/pipeline/context.h"
#include "privrewrite/pipeline/pipeline.h"
#include "privrewrite/pipeline/run_config.h"
#include "spdlog/spdlog.h"

namespace pr = privrewrite;
namespace fs = std::filesystem;

namespace {

enum ExitCode {
  kOk = 0,
  kValidation = 1,
  kBackend = 2,
  kPartial = 3,
};

int ExitFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kOk;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kUnimplemented:
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kResourceExhausted:
      return kBackend;
    default:
      return kValidation;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return ExitFor(status);
}

struct CommonFlags {
  std::optional<std::string> config;
  std::string dataset;
  std::string backend = "mock";
  std::optional<uint64_t> seed;
  std::optional<int> max_sentences;
  std::string out_dir = "out";
};

absl::StatusOr<std::unique_ptr<pr::PipelineContext>> BuildContext(
    const CommonFlags& flags) {
  auto cfg = pr::LoadRunConfig(flags.config, [](const char* name) {
    return std::getenv(name);
  });
  if (!cfg.ok()) return cfg.status();
  if (flags.seed.has_value()) cfg->search.rng_seed = *flags.seed;
  if (flags.max_sentences.has_value()) {
    if (*flags.max_sentences < 1) {
      return absl::InvalidArgumentError("--max-sentences must be >= 1");
    }
    cfg->max_sentences = *flags.max_sentences;
  }
  auto kind = pr::ParseBackendKind(flags.backend);
  if (!kind.ok()) return kind.status();
  auto suite = pr::MakeBackendSuite(*kind, *cfg);
  if (!suite.ok()) return suite.status();
  return pr::PipelineContext::Create(*std::move(suite), *std::move(cfg));
}

void AddConfigFlags(CLI::App* cmd, CommonFlags& flags, bool needs_dataset) {
  cmd->add_option("--config", flags.config, "key = value config file");
  auto* dataset =
      cmd->add_option("--dataset", flags.dataset, "JSONL dataset")
          ->check(CLI::ExistingFile);
  if (needs_dataset) dataset->required();
  cmd->add_option("--backend", flags.backend, "http or mock")
      ->check(CLI::IsMember({"http", "mock"}));
  cmd->add_option("--seed", flags.seed, "RNG seed");
  cmd->add_option("--max-sentences", flags.max_sentences,
                  "rewrite only the first N sentences of each record");
  cmd->add_option("--out-dir", flags.out_dir, "run directory");
}

int RunAlign(const CommonFlags& flags) {
  auto ctx = BuildContext(flags);
  if (!ctx.ok()) return Fail(ctx.status());
  auto n = pr::RunAlign(**ctx, flags.dataset, flags.out_dir);
  if (!n.ok()) return Fail(n.status());
  std::cout << "aligned " << *n << " records into "
            << (fs::path(flags.out_dir) / pr::kAlignmentFile).string() << "\n";
  return kOk;
}

int RunRewrite(const CommonFlags& flags, const std::string& strategy_name,
               const std::optional<std::string>& channel) {
  auto strategy = pr::ParseStrategy(strategy_name);
  if (!strategy.ok()) return Fail(strategy.status());
  auto ctx = BuildContext(flags);
  if (!ctx.ok()) return Fail(ctx.status());
  pr::RunOptions options;
  options.out_dir = flags.out_dir;
  options.dataset_path = flags.dataset;
  options.strategy = *strategy;
  options.channel_path = channel;
  options.backend_name = flags.backend;
  auto result = pr::RunPipeline(**ctx, options);
  if (!result.ok()) return Fail(result.status());
  std::cout << pr::RenderTable(result->metrics);
  if (result->attack.has_value()) {
    std::cout << "\n" << pr::RenderTable(*result->attack);
  }
  if (!result->manifest.skipped.empty()) {
    std::cerr << result->manifest.skipped.size()
              << " document(s) skipped; see manifest.json\n";
    return kPartial;
  }
  return kOk;
}

int RunEvaluate(const CommonFlags& flags, const std::string& rewrites_path) {
  auto ctx = BuildContext(flags);
  if (!ctx.ok()) return Fail(ctx.status());
  auto dataset = pr::IngestDataset(flags.dataset);
  if (!dataset.ok()) return Fail(dataset.status());
  const fs::path path = rewrites_path.empty()
                            ? fs::path(flags.out_dir) / pr::kRewritesFile
                            : fs::path(rewrites_path);
  auto rewrites = pr::LoadRewrites(path);
  if (!rewrites.ok()) return Fail(rewrites.status());
  auto report = pr::EvaluateRewrites(*dataset, *rewrites, **ctx);
  if (!report.ok()) return Fail(report.status());
  if (auto s = pr::WriteFile(fs::path(flags.out_dir) / pr::kMetricsJson,
                             pr::ToJson(*report).dump(2) + "\n");
      !s.ok()) {
    return Fail(s);
  }
  std::cout << pr::RenderTable(*report);
  return report->nli_failures > 0 ? kPartial : kOk;
}

int RunAttack(const CommonFlags& flags, const std::string& channel_path,
              const std::string& rewrites_path) {
  auto channel = pr::ChannelModel::Load(channel_path);
  if (!channel.ok()) return Fail(channel.status());
  auto dataset = pr::IngestDataset(flags.dataset);
  if (!dataset.ok()) return Fail(dataset.status());
  const fs::path path = rewrites_path.empty()
                            ? fs::path(flags.out_dir) / pr::kRewritesFile
                            : fs::path(rewrites_path);
  auto rewrites = pr::LoadRewrites(path);
  if (!rewrites.ok()) return Fail(rewrites.status());
  auto report = pr::AttackRewrites(*dataset, *rewrites, *channel);
  if (!report.ok()) return Fail(report.status());
  if (auto s = pr::WriteFile(fs::path(flags.out_dir) / pr::kAttackJson,
                             pr::ToJson(*report).dump(2) + "\n");
      !s.ok()) {
    return Fail(s);
  }
  std::cout << pr::RenderTable(*report);
  std::cout << "bayes accuracy of channel: " << pr::BayesAccuracy(*channel)
            << "\n";
  return kOk;
}

int RunAblate(const CommonFlags& flags) {
  auto ctx = BuildContext(flags);
  if (!ctx.ok()) return Fail(ctx.status());
  auto report = pr::RunAblation(**ctx, flags.dataset, fs::path(flags.out_dir));
  if (!report.ok()) return Fail(report.status());
  std::cout << report->RenderTable();
  for (const pr::AblationRow& row : report->rows) {
    if (row.skipped > 0) return kPartial;
  }
  return kOk;
}

int RunReport(const std::string& run_dir, const std::vector<double>& cost) {
  std::optional<pr::CostInputs> override;
  if (!cost.empty()) {
    override = pr::CostInputs{cost[0], cost[1], cost[2], cost[3]};
  }
  auto report = pr::EmitReport(run_dir, override);
  if (!report.ok()) return Fail(report.status());
  if (auto s = pr::WriteFile(fs::path(run_dir) / "report.json",
                             report->doc.dump(2) + "\n");
      !s.ok()) {
    return Fail(s);
  }
  std::cout << report->text;
  return kOk;
}

int RunAudit(const std::string& run_dir) {
  auto findings = pr::AuditRun(run_dir);
  if (!findings.ok()) return Fail(findings.status());
  for (const pr::AuditFinding& f : *findings) {
    std::cout << f.path << ": " << f.problem << "\n";
  }
  if (!findings->empty()) return kValidation;
  std::cout << "all recorded hashes verify\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_pattern("[%l] %v");
  CLI::App app{"privacy-aware text rewriting with tree search"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string strategy = "tree";
  std::optional<std::string> channel;
  std::string attack_channel;
  std::string rewrites_path;
  std::vector<double> cost;

  auto* align = app.add_subcommand("align", "extract privacy segments");
  AddConfigFlags(align, flags, true);

  auto* rewrite = app.add_subcommand("rewrite", "run the rewrite pipeline");
  AddConfigFlags(rewrite, flags, true);
  rewrite->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"tree", "one-step", "random", "greedy", "chain"}));
  rewrite->add_option("--channel", channel, "channel model for the attack")
      ->check(CLI::ExistingFile);

  auto* evaluate = app.add_subcommand("evaluate", "score existing rewrites");
  AddConfigFlags(evaluate, flags, true);
  evaluate->add_option("--rewrites", rewrites_path,
                       "rewrites JSONL (default: <out-dir>/rewrites.jsonl)");

  auto* attack = app.add_subcommand("attack", "reconstruction attack");
  attack->add_option("--dataset", flags.dataset)->required()->check(
      CLI::ExistingFile);
  attack->add_option("--channel", attack_channel)->required()->check(
      CLI::ExistingFile);
  attack->add_option("--out-dir", flags.out_dir);
  attack->add_option("--rewrites", rewrites_path);

  auto* ablate = app.add_subcommand("ablate", "compare all five strategies");
  AddConfigFlags(ablate, flags, true);

  auto* report = app.add_subcommand("report", "render a finished run");
  report->add_option("--out-dir", flags.out_dir, "run directory");
  report->add_option("--cost", cost, "p_ours p_base c_ours c_base")
      ->expected(4);

  auto* audit = app.add_subcommand("audit", "verify manifest hashes");
  audit->add_option("--out-dir", flags.out_dir, "run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  if (*align) return RunAlign(flags);
  if (*rewrite) return RunRewrite(flags, strategy, channel);
  if (*evaluate) return RunEvaluate(flags, rewrites_path);
  if (*attack) return RunAttack(flags, attack_channel, rewrites_path);
  if (*ablate) return RunAblate(flags);
  if (*report) return RunReport(flags.out_dir, cost);
  if (*audit) return RunAudit(flags.out_dir);
  return kValidation;
}
