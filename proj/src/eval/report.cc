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

#include "privrewrite/eval/report.h"

#include <algorithm>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {
namespace {

using nlohmann::json;

json OptionalJson(const std::optional<double>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

std::optional<double> OptionalFrom(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

class Mean {
 public:
  void Add(double v) {
    sum_ += v;
    ++count_;
  }
  std::optional<double> Get() const {
    if (count_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  size_t count_ = 0;
};

absl::StatusOr<std::set<std::string>> DetectPii(const std::string& text,
                                                const PrivacySpec& spec,
                                                const EvalContext& ctx) {
  std::set<std::string> found;
  if (Tokenize(text).empty()) return found;
  auto utterance = Utterance::Create("pii-probe", text);
  if (!utterance.ok()) return utterance.status();
  auto aligned =
      AlignSegments(*utterance, spec, *ctx.pii_detector, ctx.pii_threshold);
  if (!aligned.ok()) return aligned.status();
  for (const AlignedSegment& segment : aligned->segments) {
    found.insert(segment.surface);
  }
  return found;
}

}  // namespace

std::string FormatOptional(const std::optional<double>& value, int precision) {
  if (!value.has_value()) return "n/a";
  return absl::StrFormat("%.*f", precision, *value);
}

absl::StatusOr<DocumentMetrics> ComputeDocumentMetrics(
    const DocumentEvalInput& input, const EvalContext& ctx) {
  if (input.spec == nullptr || ctx.nli == nullptr) {
    return absl::InvalidArgumentError("evaluation needs a spec and NLI model");
  }
  DocumentMetrics row;
  row.doc_id = input.doc_id;
  RewriteForNli nli_input{input.rewrite, input.spec};
  auto nli = PrivacyNliRate(std::span<const RewriteForNli>(&nli_input, 1),
                            *ctx.nli, ctx.nli_cutoff);
  if (nli.ok()) {
    row.max_entailment = nli->max_entailment.front();
    row.is_private = *row.max_entailment < ctx.nli_cutoff;
  }
  row.rouge1_f =
      Rouge1F(input.rewrite, input.reference.value_or(input.original));
  row.distinct2 = Distinct2(input.rewrite);
  if (ctx.pii_detector != nullptr && !input.spec->pii_items().empty()) {
    auto predicted = DetectPii(input.rewrite, *input.spec, ctx);
    if (!predicted.ok()) return predicted.status();
    std::set<std::string> truth;
    for (const PiiItem& item : input.spec->pii_items()) truth.insert(item.surface);
    row.pii = PiiMatchScores(*predicted, truth);
  }
  if (ctx.logprob != nullptr && !Tokenize(input.rewrite).empty()) {
    auto ppl = Perplexity(input.rewrite, *ctx.logprob);
    if (ppl.ok()) {
      row.perplexity = *ppl;
    } else if (ppl.status().code() != absl::StatusCode::kUnimplemented) {
      return ppl.status();
    }
  }
  return row;
}

MetricReport AggregateMetrics(std::vector<DocumentMetrics> rows,
                              double nli_cutoff) {
  MetricReport report;
  report.documents = rows.size();
  Mean rouge, distinct, precision, recall, f1, ppl;
  std::vector<double> entailments;
  for (const DocumentMetrics& row : rows) {
    rouge.Add(row.rouge1_f);
    distinct.Add(row.distinct2);
    if (row.max_entailment.has_value()) {
      entailments.push_back(*row.max_entailment);
    } else {
      ++report.nli_failures;
    }
    if (row.pii.has_value()) {
      precision.Add(row.pii->precision);
      recall.Add(row.pii->recall);
      f1.Add(row.pii->f1);
    }
    if (row.perplexity.has_value()) {
      ppl.Add(*row.perplexity);
    } else {
      ++report.perplexity_unavailable;
    }
  }
  if (!entailments.empty()) {
    report.privacy_nli_rate =
        PrivacyRateFromEntailments(entailments, nli_cutoff);
  }
  report.rouge1_f = rouge.Get().value_or(0.0);
  report.distinct2 = distinct.Get().value_or(0.0);
  report.pii_precision = precision.Get();
  report.pii_recall = recall.Get();
  report.pii_f1 = f1.Get();
  report.perplexity = ppl.Get();
  report.per_document = std::move(rows);
  return report;
}

json ToJson(const MetricReport& report) {
  json rows = json::array();
  for (const DocumentMetrics& row : report.per_document) {
    json r = {{"doc_id", row.doc_id},
              {"max_entailment", OptionalJson(row.max_entailment)},
              {"rouge1_f", row.rouge1_f},
              {"distinct2", row.distinct2},
              {"perplexity", OptionalJson(row.perplexity)}};
    r["is_private"] =
        row.is_private.has_value() ? json(*row.is_private) : json(nullptr);
    if (row.pii.has_value()) {
      r["pii"] = {{"precision", row.pii->precision},
                  {"recall", row.pii->recall},
                  {"f1", row.pii->f1}};
    } else {
      r["pii"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  return {{"privacy_nli_rate", OptionalJson(report.privacy_nli_rate)},
          {"rouge1_f", report.rouge1_f},
          {"pii_precision", OptionalJson(report.pii_precision)},
          {"pii_recall", OptionalJson(report.pii_recall)},
          {"pii_f1", OptionalJson(report.pii_f1)},
          {"distinct2", report.distinct2},
          {"perplexity", OptionalJson(report.perplexity)},
          {"documents", report.documents},
          {"nli_failures", report.nli_failures},
          {"perplexity_unavailable", report.perplexity_unavailable},
          {"per_document", std::move(rows)}};
}

absl::StatusOr<MetricReport> MetricReportFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("per_document") ||
      !doc["per_document"].is_array()) {
    return absl::InvalidArgumentError("metric report lacks per_document rows");
  }
  try {
    MetricReport report;
    report.privacy_nli_rate = OptionalFrom(doc, "privacy_nli_rate");
    report.rouge1_f = doc.at("rouge1_f").get<double>();
    report.pii_precision = OptionalFrom(doc, "pii_precision");
    report.pii_recall = OptionalFrom(doc, "pii_recall");
    report.pii_f1 = OptionalFrom(doc, "pii_f1");
    report.distinct2 = doc.at("distinct2").get<double>();
    report.perplexity = OptionalFrom(doc, "perplexity");
    report.documents = doc.at("documents").get<size_t>();
    report.nli_failures = doc.value("nli_failures", size_t{0});
    report.perplexity_unavailable = doc.value("perplexity_unavailable", size_t{0});
    for (const json& r : doc["per_document"]) {
      DocumentMetrics row;
      row.doc_id = r.at("doc_id").get<std::string>();
      row.max_entailment = OptionalFrom(r, "max_entailment");
      if (r.contains("is_private") && !r["is_private"].is_null()) {
        row.is_private = r["is_private"].get<bool>();
      }
      row.rouge1_f = r.at("rouge1_f").get<double>();
      row.distinct2 = r.at("distinct2").get<double>();
      row.perplexity = OptionalFrom(r, "perplexity");
      if (r.contains("pii") && !r["pii"].is_null()) {
        const json& p = r["pii"];
        row.pii = PrfScores{p.at("precision").get<double>(),
                            p.at("recall").get<double>(),
                            p.at("f1").get<double>()};
      }
      report.per_document.push_back(std::move(row));
    }
    return report;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed metric report: ", e.what()));
  }
}

std::string RenderRows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) line += "  ";
      line += rows[r][i];
      if (i + 1 < rows[r].size()) line.append(widths[i] - rows[r][i].size(), ' ');
    }
    out += line + "\n";
    if (r == 0) {
      size_t total = 0;
      for (size_t w : widths) total += w;
      if (!widths.empty()) total += 2 * (widths.size() - 1);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

std::string RenderTable(const MetricReport& report) {
  std::vector<std::vector<std::string>> rows = {{"metric", "value"}};
  rows.push_back({"documents", absl::StrCat(report.documents)});
  rows.push_back(
      {"privacy_nli_rate_%", FormatOptional(report.privacy_nli_rate, 2)});
  rows.push_back({"rouge1_f", FormatOptional(report.rouge1_f)});
  rows.push_back({"pii_precision", FormatOptional(report.pii_precision)});
  rows.push_back({"pii_recall", FormatOptional(report.pii_recall)});
  rows.push_back({"pii_f1", FormatOptional(report.pii_f1)});
  rows.push_back({"distinct2", FormatOptional(report.distinct2)});
  rows.push_back({"perplexity", FormatOptional(report.perplexity, 3)});
  rows.push_back({"nli_failures", absl::StrCat(report.nli_failures)});
  return RenderRows(rows);
}

json ToJson(const AttackReport& report) {
  return {{"asr_context_free", OptionalJson(report.asr_context_free)},
          {"asr_contextual", OptionalJson(report.asr_contextual)},
          {"aligned_pairs", report.aligned_pairs},
          {"differing_pairs", report.differing_pairs},
          {"correct_context_free", report.correct_context_free},
          {"correct_contextual", report.correct_contextual},
          {"unreachable", report.unreachable}};
}

std::string RenderTable(const AttackReport& report) {
  std::vector<std::vector<std::string>> rows = {{"attack", "value"}};
  rows.push_back({"aligned_pairs", absl::StrCat(report.aligned_pairs)});
  rows.push_back({"differing_pairs", absl::StrCat(report.differing_pairs)});
  rows.push_back({"asr_context_free",
                  report.asr_context_free.has_value()
                      ? FormatOptional(report.asr_context_free)
                      : "undefined"});
  rows.push_back({"asr_contextual", FormatOptional(report.asr_contextual)});
  rows.push_back({"unreachable", absl::StrCat(report.unreachable)});
  return RenderRows(rows);
}

}  // namespace privrewrite
