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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "privrewrite/backends/mock.h"
#include "privrewrite/core/tokenizer.h"
#include "privrewrite/pipeline/context.h"
#include "privrewrite/pipeline/dataset.h"
#include "privrewrite/pipeline/manifest.h"
#include "privrewrite/pipeline/pipeline.h"
#include "privrewrite/pipeline/run_config.h"
#include "testing/fixtures.h"

namespace privrewrite {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::IsEmpty;
using ::testing::SizeIs;
using nlohmann::json;

TEST(DatasetTest, ThreeValidLines) {
  auto ds = ParseDataset(
      R"({"doc_id": "a", "utterance": "i am an ohio mom", "pii": [{"surface": "ohio", "category": "location"}]}
{"doc_id": "b", "utterance": "i drink scotch", "persona": "I like scotch."}

{"doc_id": "c", "utterance": "hello", "persona": "x", "reference": "hi", "masked": "<MASK>"}
)");
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_THAT(ds->records, SizeIs(3));
  EXPECT_THAT(ds->rejects, IsEmpty());
  EXPECT_EQ(ds->records[2].reference, "hi");
  EXPECT_EQ(ds->records[2].masked, "<MASK>");
}

TEST(DatasetTest, MissingUtteranceIsRejectedWithLineNumber) {
  std::string text;
  for (int i = 0; i < 10; ++i) {
    text += R"({"doc_id": "d)" + std::to_string(i) +
            R"(", "utterance": "text", "persona": "p"})" + "\n";
  }
  text += R"({"doc_id": "bad", "persona": "p"})" "\n";
  auto ds = ParseDataset(text);
  ASSERT_TRUE(ds.ok()) << ds.status();
  ASSERT_THAT(ds->rejects, SizeIs(1));
  EXPECT_EQ(ds->rejects[0].line_number, 11);
  EXPECT_THAT(ds->rejects[0].message, HasSubstr("missing utterance"));
  EXPECT_THAT(FormatRejects(ds->rejects), HasSubstr("line 11"));
}

TEST(DatasetTest, PersonaAndPiiTogether) {
  auto ds = ParseDataset(
      R"({"doc_id": "a", "utterance": "u", "persona": "I am a mom.", "pii": [{"surface": "ohio", "category": "location"}, {"surface": "mom"}]})");
  ASSERT_TRUE(ds.ok()) << ds.status();
  const PrivacySpec& spec = ds->records[0].spec;
  EXPECT_EQ(spec.persona_text(), "I am a mom.");
  ASSERT_THAT(spec.pii_items(), SizeIs(2));
  EXPECT_EQ(spec.pii_items()[0], (PiiItem{"ohio", "location"}));
  EXPECT_EQ(spec.pii_items()[1].surface, "mom");
}

TEST(DatasetTest, TooManyRejectsAbort) {
  auto ds = ParseDataset(
      R"({"doc_id": "a", "utterance": "u", "persona": "p"}
not json
{"doc_id": "a", "utterance": "dup", "persona": "p"}
)");
  ASSERT_FALSE(ds.ok());
  EXPECT_THAT(std::string(ds.status().message()), HasSubstr("line 2"));
  EXPECT_THAT(std::string(ds.status().message()), HasSubstr("duplicate"));
  EXPECT_FALSE(ParseDataset("\n\n").ok());
  EXPECT_EQ(IngestDataset("/nonexistent/file.jsonl").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(RunConfigTest, DefaultsAndUnknownKeys) {
  auto cfg = ParseRunConfig({});
  ASSERT_TRUE(cfg.ok());
  EXPECT_EQ(cfg->search, SearchConfig{});
  EXPECT_EQ(cfg->align_scorer, AlignScorerKind::kRewardModel);
  EXPECT_EQ(cfg->workers, 4);
  EXPECT_DOUBLE_EQ(cfg->nli_cutoff, 0.5);
  auto bad = ParseRunConfig({{"colour", "blue"}});
  ASSERT_FALSE(bad.ok());
  EXPECT_THAT(std::string(bad.status().message()),
              HasSubstr("unknown config key 'colour'"));
  EXPECT_FALSE(ParseRunConfig({{"cost_p_ours", "1"}}).ok());
  EXPECT_FALSE(ParseRunConfig({{"workers", "0"}}).ok());
}

TEST(RunConfigTest, SerializeRoundTrip) {
  auto cfg = ParseRunConfig({{"tree_budget", "3"},
                             {"align_scorer", "cosine"},
                             {"align_threshold", "0.7"},
                             {"reward", "linear_combination"},
                             {"scorer_reward_weight", "0.25"},
                             {"scorer_nli_weight", "0.75"},
                             {"max_sentences", "5"},
                             {"http_generator_model", "m"},
                             {"cost_p_ours", "93.02"},
                             {"cost_p_base", "82.24"},
                             {"cost_c_ours", "0.332"},
                             {"cost_c_base", "0.42"}});
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->max_sentences, 5);
  ASSERT_TRUE(cfg->cost.has_value());
  auto again = ParseRunConfig(SerializeRunConfig(*cfg));
  ASSERT_TRUE(again.ok()) << again.status();
  EXPECT_EQ(SerializeRunConfig(*again), SerializeRunConfig(*cfg));
}

TEST(RunConfigTest, FileAndEnvironment) {
  const fs::path dir = testing::MakeTempDir("runcfg");
  const std::string path =
      testing::WriteText(dir, "run.conf", "tree_budget = 2\nworkers = 1\n");
  auto cfg = LoadRunConfig(path, [](const char* name) -> const char* {
    return std::string(name) == "PRIVREWRITE_TREE_BUDGET" ? "4" : nullptr;
  });
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->search.tree_budget, 4);
  EXPECT_EQ(cfg->workers, 1);
}

TEST(ManifestTest, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::MakeTempDir("pipeline");
    dataset_ = testing::WriteText(dir_, "data.jsonl",
                                  testing::MakeSmallDatasetJsonl());
  }

  RunOptions Options(const std::string& name) {
    RunOptions o;
    o.out_dir = dir_ / name;
    o.dataset_path = dataset_;
    return o;
  }

  fs::path dir_;
  std::string dataset_;
};

TEST_F(PipelineTest, HappyPathWritesEverything) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok()) << ctx.status();
  auto result = RunPipeline(**ctx, Options("run"));
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->manifest.documents, 5u);
  EXPECT_THAT(result->manifest.trace_files, SizeIs(5));
  EXPECT_THAT(result->manifest.skipped, IsEmpty());
  auto rewrites = LoadRewrites(dir_ / "run" / std::string(kRewritesFile));
  ASSERT_TRUE(rewrites.ok());
  EXPECT_THAT(*rewrites, SizeIs(5));
  EXPECT_THAT(Tokenize(rewrites->at("s1")),
              ::testing::Not(::testing::Contains("ohio")));
  for (const auto& [doc, file] : result->manifest.trace_files) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / file)) << file;
  }
  auto findings = AuditRun(dir_ / "run");
  ASSERT_TRUE(findings.ok());
  EXPECT_THAT(*findings, IsEmpty());
}

TEST_F(PipelineTest, AuditDetectsTampering) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  ASSERT_TRUE(RunPipeline(**ctx, Options("run")).ok());
  const fs::path rewrites = dir_ / "run" / std::string(kRewritesFile);
  testing::WriteText(rewrites.parent_path(), rewrites.filename().string(),
                     "tampered\n");
  auto findings = AuditRun(dir_ / "run");
  ASSERT_TRUE(findings.ok());
  ASSERT_THAT(*findings, SizeIs(1));
  EXPECT_EQ((*findings)[0].path, std::string(kRewritesFile));
}

TEST_F(PipelineTest, SameSeedSameBytes) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  ASSERT_TRUE(RunPipeline(**ctx, Options("a")).ok());
  ASSERT_TRUE(RunPipeline(**ctx, Options("b")).ok());
  for (const char* file : {"rewrites.jsonl", "alignment.jsonl"}) {
    EXPECT_EQ(*ReadFile(dir_ / "a" / file), *ReadFile(dir_ / "b" / file));
  }
}

TEST_F(PipelineTest, FailingRecordIsSkippedAndListed) {
  // Alignment of s2 fails because its reward call errors out.
  class PickyReward : public RewardModel {
   public:
    std::string Identity() const override { return "picky"; }

   protected:
    absl::StatusOr<double> DoScore(const RewardQuery& q) const override {
      for (const std::string& s : q.sensitive) {
        if (s == "scotch") return absl::UnavailableError("judge down");
      }
      return inner_.Score(q);
    }

   private:
    MockRewardModel inner_;
  };
  auto suite = MakeMockSuite();
  ASSERT_TRUE(suite.ok());
  suite->reward = std::make_shared<PickyReward>();
  auto ctx = PipelineContext::Create(*suite, RunConfig{});
  ASSERT_TRUE(ctx.ok());
  auto result = RunPipeline(**ctx, Options("partial"));
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_THAT(result->manifest.skipped, SizeIs(1));
  EXPECT_EQ(result->manifest.skipped[0].doc_id, "s2");
  EXPECT_EQ(result->manifest.documents, 4u);
  EXPECT_EQ(result->manifest.ToJson()["skip_count"], 1);
}

TEST_F(PipelineTest, MaxSentencesLeavesTailUntouched) {
  RunConfig cfg;
  cfg.max_sentences = 1;
  auto ctx = testing::MakeMockContext({}, cfg);
  ASSERT_TRUE(ctx.ok());
  auto ds = IngestDataset(dataset_);
  ASSERT_TRUE(ds.ok());
  const DatasetRecord& s3 = ds->records[2];
  auto alignment = AlignRecord(s3, **ctx);
  ASSERT_TRUE(alignment.ok());
  ASSERT_THAT(alignment->sentences, SizeIs(2));
  EXPECT_TRUE(alignment->sentences[0].rewrite);
  EXPECT_FALSE(alignment->sentences[1].rewrite);
  auto outcome = RewriteRecord(s3, *alignment, StrategyKind::kTree, **ctx);
  ASSERT_TRUE(outcome.ok());
  EXPECT_THAT(outcome->rewrite, HasSubstr("we walk in the park."));
  EXPECT_THAT(outcome->rewrite, ::testing::Not(HasSubstr("rex")));
}

TEST_F(PipelineTest, ReportRendersCostAndRejectsEmptyRuns) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  ASSERT_TRUE(RunPipeline(**ctx, Options("run")).ok());
  auto report = EmitReport(dir_ / "run", CostInputs{93.02, 82.24, 0.332, 0.42});
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_THAT(report->text, HasSubstr("122.5"));
  EXPECT_THAT(report->text, HasSubstr("rouge1_f"));
  EXPECT_NEAR(report->doc["cost"]["efficiency"].get<double>(), 122.5, 0.05);

  const fs::path empty = dir_ / "empty";
  RunManifest m;
  ASSERT_TRUE(WriteFile(empty / std::string(kManifestFile), m.ToJson().dump()).ok());
  auto none = EmitReport(empty);
  ASSERT_FALSE(none.ok());
  EXPECT_THAT(std::string(none.status().message()), HasSubstr("no documents"));

  auto manifest = LoadManifest(dir_ / "run" / std::string(kManifestFile));
  ASSERT_TRUE(manifest.ok());
  const std::string first_trace = manifest->trace_files.begin()->second;
  fs::remove(dir_ / "run" / first_trace);
  auto missing = EmitReport(dir_ / "run");
  ASSERT_FALSE(missing.ok());
  EXPECT_THAT(std::string(missing.status().message()),
              HasSubstr("missing trace file"));
  EXPECT_THAT(std::string(missing.status().message()), HasSubstr(first_trace));
}

TEST_F(PipelineTest, AblationHasFiveRowsOnSharedAlignments) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  auto report = RunAblation(**ctx, dataset_, dir_ / "ablate");
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_THAT(report->rows, SizeIs(5));
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(report->rows[i].strategy, kAllStrategies[i]);
    EXPECT_EQ(report->rows[i].documents, 5u);
  }
  EXPECT_TRUE(fs::exists(dir_ / "ablate" / std::string(kAblationJson)));
  EXPECT_THAT(report->RenderTable(), HasSubstr("one-step"));
}

TEST_F(PipelineTest, EvaluateAndAttackExistingRewrites) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  auto ds = IngestDataset(dataset_);
  ASSERT_TRUE(ds.ok());
  std::map<std::string, std::string> rewrites;
  for (const DatasetRecord& r : ds->records) {
    rewrites[r.doc_id] = r.utterance.text();
  }
  auto metrics = EvaluateRewrites(*ds, rewrites, **ctx);
  ASSERT_TRUE(metrics.ok()) << metrics.status();
  // Unchanged text still entails the pii surfaces of s1, s3 and s5. The
  // persona of s2 needs "like" and the persona of s4 needs "am nurse".
  EXPECT_DOUBLE_EQ(*metrics->privacy_nli_rate, 40.0);
  EXPECT_DOUBLE_EQ(metrics->rouge1_f, 1.0);
  auto channel = ChannelModel::Create(
      {{"ohio", 0.5}, {"boston", 0.5}},
      {{"ohio", {{"somewhere", 1.0}}}, {"boston", {{"somewhere", 1.0}}}});
  ASSERT_TRUE(channel.ok());
  auto attack = AttackRewrites(*ds, rewrites, *channel);
  ASSERT_TRUE(attack.ok());
  EXPECT_FALSE(attack->asr_context_free.has_value());
}

TEST_F(PipelineTest, TraceFilesAreOneJsonObjectPerLine) {
  auto ctx = testing::MakeMockContext({});
  ASSERT_TRUE(ctx.ok());
  auto result = RunPipeline(**ctx, Options("run"));
  ASSERT_TRUE(result.ok());
  const std::string trace =
      *ReadFile(dir_ / "run" / result->manifest.trace_files.at("s1"));
  size_t lines = 0;
  size_t results = 0;
  size_t start = 0;
  while (start < trace.size()) {
    const size_t end = trace.find('\n', start);
    const json line = json::parse(trace.substr(start, end - start));
    ++lines;
    if (line["event"] == "result") ++results;
    start = end + 1;
  }
  EXPECT_GT(lines, 1u);
  EXPECT_EQ(results, 1u);
  EXPECT_EQ(TraceFileName("a/b"), TraceFileName("a/b"));
  EXPECT_NE(TraceFileName("a/b"), TraceFileName("a_b"));
}

TEST(BackendSuiteTest, UnreachableHttpFailsFast) {
  RunConfig cfg;
  cfg.http.base_url = "http://127.0.0.1:9/v1";
  cfg.http.generator_model = "m";
  cfg.http.timeout_ms = 500;
  auto suite = MakeBackendSuite(BackendKind::kHttp, cfg);
  ASSERT_FALSE(suite.ok());
  EXPECT_EQ(suite.status().code(), absl::StatusCode::kUnavailable);
}

// Runs the CLI and returns its exit status.
int Cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd =
      std::string(PRIVREWRITE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return -1;
  std::string out;
  char buf[4096];
  while (size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = ::pclose(pipe);
  if (output != nullptr) *output = out;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public PipelineTest {};

TEST_F(CliTest, RewriteAuditReport) {
  const std::string out = (dir_ / "cli").string();
  std::string log;
  ASSERT_EQ(Cli("rewrite --dataset " + dataset_ + " --out-dir " + out +
                    " --strategy tree --seed 3",
                &log),
            0)
      << log;
  EXPECT_TRUE(fs::exists(fs::path(out) / "rewrites.jsonl"));
  EXPECT_EQ(Cli("audit --out-dir " + out, &log), 0) << log;
  EXPECT_EQ(Cli("report --out-dir " + out +
                    " --cost 93.02 82.24 0.332 0.42",
                &log),
            0)
      << log;
  EXPECT_THAT(log, HasSubstr("122.5"));
  EXPECT_EQ(Cli("evaluate --dataset " + dataset_ + " --rewrites " + out +
                    "/rewrites.jsonl --out-dir " + out,
                &log),
            0)
      << log;
}

TEST_F(CliTest, AlignAndAblate) {
  const std::string out = (dir_ / "cli").string();
  std::string log;
  EXPECT_EQ(Cli("align --dataset " + dataset_ + " --out-dir " + out, &log), 0)
      << log;
  EXPECT_TRUE(fs::exists(fs::path(out) / "alignment.jsonl"));
  EXPECT_EQ(Cli("ablate --dataset " + dataset_ + " --out-dir " + out, &log), 0)
      << log;
  EXPECT_THAT(log, HasSubstr("chain"));
}

TEST_F(CliTest, ValidationFailuresExitOne) {
  const std::string out = (dir_ / "cli").string();
  EXPECT_EQ(Cli("rewrite --dataset " + dataset_ + " --out-dir " + out +
                " --strategy beam"),
            1);
  const std::string bad =
      testing::WriteText(dir_, "bad.conf", "tree_budget = 0\n");
  EXPECT_EQ(Cli("rewrite --dataset " + dataset_ + " --config " + bad), 1);
  EXPECT_EQ(Cli("rewrite"), 1);
  EXPECT_EQ(Cli("report --out-dir " + (dir_ / "nothing").string()), 1);
}

TEST_F(CliTest, UnreachableBackendExitsTwoBeforeWriting) {
  const std::string conf = testing::WriteText(
      dir_, "http.conf",
      "http_base_url = http://127.0.0.1:9/v1\nhttp_generator_model = m\n"
      "http_timeout_ms = 500\n");
  const fs::path out = dir_ / "http";
  std::string log;
  EXPECT_EQ(Cli("rewrite --backend http --config " + conf + " --dataset " +
                    dataset_ + " --out-dir " + out.string(),
                &log),
            2);
  EXPECT_THAT(log, HasSubstr("cannot reach"));
  EXPECT_FALSE(fs::exists(out / "rewrites.jsonl"));
}

}  // namespace
}  // namespace privrewrite
