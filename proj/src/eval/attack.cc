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

#include "privrewrite/eval/attack.h"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/core/tokenizer.h"
#include "privrewrite/eval/metrics.h"

namespace privrewrite {
namespace {

using nlohmann::json;

absl::Status CheckDistribution(const Distribution& dist, std::string_view what) {
  double sum = 0.0;
  for (const auto& [key, p] : dist) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kProbabilityTolerance) {
      return absl::InvalidArgumentError(absl::StrCat(
          Sv(what), ": probability of '", key, "' outside [0, 1]"));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat(Sv(what), " sums to ", sum, ", expected 1"));
  }
  return absl::OkStatus();
}

absl::Status CheckEmission(const std::map<std::string, Distribution>& emission,
                           const Distribution& prior, std::string_view where) {
  for (const auto& [x, row] : emission) {
    if (!prior.contains(x)) {
      return absl::InvalidArgumentError(absl::StrCat(
          Sv(where), "emission row for '", x, "' outside the vocabulary"));
    }
    if (auto s = CheckDistribution(
            row, absl::StrCat(Sv(where), "emission row '", x, "'"));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

double Lookup(const Distribution& dist, std::string_view key) {
  auto it = dist.find(std::string(key));
  return it == dist.end() ? 0.0 : it->second;
}

absl::StatusOr<Distribution> DistributionFromJson(const json& doc,
                                                  std::string_view what) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(Sv(what), " must be an object"));
  }
  Distribution out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat(Sv(what), " value for '", key, "' is not a number"));
    }
    out[key] = value.get<double>();
  }
  return out;
}

absl::StatusOr<std::map<std::string, Distribution>> EmissionFromJson(
    const json& doc) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("emission must be an object");
  }
  std::map<std::string, Distribution> out;
  for (const auto& [x, row] : doc.items()) {
    auto dist = DistributionFromJson(row, absl::StrCat("emission row '", x, "'"));
    if (!dist.ok()) return dist.status();
    out[x] = *std::move(dist);
  }
  return out;
}

template <typename Score>
absl::StatusOr<std::string> Argmax(const ChannelModel& channel, Score score) {
  const std::string* best = nullptr;
  double best_score = 0.0;
  // Vocabulary is sorted, so strict improvement keeps the smallest x.
  for (const std::string& x : channel.vocabulary()) {
    const double s = score(x);
    if (s > best_score) {
      best_score = s;
      best = &x;
    }
  }
  if (best == nullptr) {
    return absl::InvalidArgumentError("unreachable observation");
  }
  return *best;
}

}  // namespace

absl::StatusOr<ChannelModel> ChannelModel::Create(
    Distribution prior, std::map<std::string, Distribution> emission,
    std::map<AttackContext, ContextTable> contextual) {
  if (prior.empty()) {
    return absl::InvalidArgumentError("channel vocabulary is empty");
  }
  if (auto s = CheckDistribution(prior, "prior"); !s.ok()) return s;
  for (const auto& [x, p] : prior) {
    if (!emission.contains(x)) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing emission row for '", x, "'"));
    }
  }
  if (auto s = CheckEmission(emission, prior, ""); !s.ok()) return s;
  for (const auto& [context, table] : contextual) {
    const std::string where =
        absl::StrCat("context (", context.left, ", ", context.right, ") ");
    if (!table.prior.empty()) {
      for (const auto& [x, p] : table.prior) {
        if (!prior.contains(x)) {
          return absl::InvalidArgumentError(absl::StrCat(
              where, "prior names '", x, "' outside the vocabulary"));
        }
      }
      if (auto s = CheckDistribution(table.prior, where + "prior"); !s.ok()) {
        return s;
      }
    }
    if (auto s = CheckEmission(table.emission, prior, where); !s.ok()) return s;
  }
  ChannelModel model;
  for (const auto& [x, p] : prior) model.vocabulary_.push_back(x);
  model.prior_ = std::move(prior);
  model.emission_ = std::move(emission);
  model.contextual_ = std::move(contextual);
  return model;
}

absl::StatusOr<ChannelModel> ChannelModel::FromJson(const json& doc) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("channel document must be an object");
  }
  if (!doc.contains("prior") || !doc.contains("emission")) {
    return absl::InvalidArgumentError("channel needs prior and emission");
  }
  auto prior = DistributionFromJson(doc["prior"], "prior");
  if (!prior.ok()) return prior.status();
  auto emission = EmissionFromJson(doc["emission"]);
  if (!emission.ok()) return emission.status();
  std::map<AttackContext, ContextTable> contextual;
  if (doc.contains("contextual")) {
    const json& entries = doc["contextual"];
    if (!entries.is_array()) {
      return absl::InvalidArgumentError("contextual must be a list");
    }
    for (const json& entry : entries) {
      if (!entry.is_object() || !entry.contains("left") ||
          !entry.contains("right") || !entry["left"].is_string() ||
          !entry["right"].is_string()) {
        return absl::InvalidArgumentError(
            "contextual entry needs string left and right");
      }
      AttackContext context{entry["left"].get<std::string>(),
                            entry["right"].get<std::string>()};
      ContextTable table;
      if (entry.contains("prior")) {
        auto p = DistributionFromJson(entry["prior"], "contextual prior");
        if (!p.ok()) return p.status();
        table.prior = *std::move(p);
      }
      if (entry.contains("emission")) {
        auto e = EmissionFromJson(entry["emission"]);
        if (!e.ok()) return e.status();
        table.emission = *std::move(e);
      }
      if (!contextual.emplace(std::move(context), std::move(table)).second) {
        return absl::InvalidArgumentError("duplicate contextual entry");
      }
    }
  }
  return Create(*std::move(prior), *std::move(emission),
                std::move(contextual));
}

absl::StatusOr<ChannelModel> ChannelModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open channel ", path));
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat("channel file ", path, " is not valid JSON"));
  }
  return FromJson(doc);
}

json ChannelModel::ToJson() const {
  json doc;
  doc["prior"] = prior_;
  doc["emission"] = emission_;
  if (!contextual_.empty()) {
    json entries = json::array();
    for (const auto& [context, table] : contextual_) {
      json entry = {{"left", context.left}, {"right", context.right}};
      if (!table.prior.empty()) entry["prior"] = table.prior;
      if (!table.emission.empty()) entry["emission"] = table.emission;
      entries.push_back(std::move(entry));
    }
    doc["contextual"] = std::move(entries);
  }
  return doc;
}

bool ChannelModel::Contains(std::string_view x) const {
  return prior_.contains(std::string(x));
}

std::vector<std::string> ChannelModel::Observations() const {
  std::set<std::string> ys;
  auto collect = [&ys](const std::map<std::string, Distribution>& emission) {
    for (const auto& [x, row] : emission) {
      for (const auto& [y, p] : row) {
        if (p > 0.0) ys.insert(y);
      }
    }
  };
  collect(emission_);
  for (const auto& [context, table] : contextual_) collect(table.emission);
  return {ys.begin(), ys.end()};
}

double ChannelModel::Prior(std::string_view x) const { return Lookup(prior_, x); }

double ChannelModel::Emission(std::string_view y, std::string_view x) const {
  auto it = emission_.find(std::string(x));
  return it == emission_.end() ? 0.0 : Lookup(it->second, y);
}

double ChannelModel::Prior(std::string_view x,
                           const AttackContext& context) const {
  auto it = contextual_.find(context);
  if (it == contextual_.end() || it->second.prior.empty()) return Prior(x);
  return Lookup(it->second.prior, x);
}

double ChannelModel::Emission(std::string_view y, std::string_view x,
                              const AttackContext& context) const {
  auto it = contextual_.find(context);
  if (it != contextual_.end()) {
    auto row = it->second.emission.find(std::string(x));
    if (row != it->second.emission.end()) return Lookup(row->second, y);
  }
  return Emission(y, x);
}

absl::StatusOr<std::string> ReconstructContextFree(
    std::string_view y, const ChannelModel& channel) {
  return Argmax(channel, [&](const std::string& x) {
    return channel.Emission(y, x) * channel.Prior(x);
  });
}

absl::StatusOr<std::string> ReconstructContextual(
    std::string_view y, const AttackContext& context,
    const ChannelModel& channel) {
  if (!channel.has_contextual()) {
    return absl::FailedPreconditionError("channel has no contextual tables");
  }
  return Argmax(channel, [&](const std::string& x) {
    return channel.Emission(y, x, context) * channel.Prior(x, context);
  });
}

AttackPair MakeAttackPair(const Utterance& original, std::string rewritten) {
  return AttackPair{original.tokens(), std::move(rewritten)};
}

namespace {

struct Observation {
  std::string x;
  std::string y;
  AttackContext context;
};

// Differing sensitive positions of one aligned pair.
std::vector<Observation> Observe(const std::vector<AlignedPair>& alignment,
                                 const std::set<std::string>& vocabulary) {
  std::vector<Observation> out;
  for (size_t k = 0; k < alignment.size(); ++k) {
    const AlignedPair& pair = alignment[k];
    if (!pair.original || !vocabulary.contains(*pair.original)) continue;
    if (pair.rewritten && *pair.rewritten == *pair.original) continue;
    Observation obs;
    obs.x = *pair.original;
    obs.y = pair.rewritten ? *pair.rewritten : std::string(kGapToken);
    obs.context.left = std::string(kLeftBoundary);
    for (size_t j = k; j-- > 0;) {
      if (alignment[j].rewritten) {
        obs.context.left = *alignment[j].rewritten;
        break;
      }
    }
    obs.context.right = std::string(kRightBoundary);
    for (size_t j = k + 1; j < alignment.size(); ++j) {
      if (alignment[j].rewritten) {
        obs.context.right = *alignment[j].rewritten;
        break;
      }
    }
    out.push_back(std::move(obs));
  }
  return out;
}

}  // namespace

absl::StatusOr<AttackReport> AttackSuccessRate(std::span<const AttackPair> pairs,
                                               const ChannelModel& channel,
                                               AttackMode mode) {
  if (mode == AttackMode::kContextual && !channel.has_contextual()) {
    return absl::FailedPreconditionError(
        "contextual attack needs contextual channel tables");
  }
  const std::set<std::string> vocabulary(channel.vocabulary().begin(),
                                         channel.vocabulary().end());
  AttackReport report;
  for (const AttackPair& pair : pairs) {
    const std::vector<AlignedPair> alignment =
        AlignTokens(pair.original_tokens, Tokenize(pair.rewritten));
    report.aligned_pairs += alignment.size();
    for (const Observation& obs : Observe(alignment, vocabulary)) {
      ++report.differing_pairs;
      auto guess = ReconstructContextFree(obs.y, channel);
      if (!guess.ok()) {
        ++report.unreachable;
      } else if (*guess == obs.x) {
        ++report.correct_context_free;
      }
      if (mode == AttackMode::kContextual) {
        auto contextual = ReconstructContextual(obs.y, obs.context, channel);
        if (contextual.ok() && *contextual == obs.x) {
          ++report.correct_contextual;
        }
      }
    }
  }
  if (report.differing_pairs > 0) {
    const double n = static_cast<double>(report.differing_pairs);
    report.asr_context_free = report.correct_context_free / n;
    if (mode == AttackMode::kContextual) {
      report.asr_contextual = report.correct_contextual / n;
    }
  }
  return report;
}

double BayesAccuracy(const ChannelModel& channel) {
  double total = 0.0;
  for (const std::string& y : channel.Observations()) {
    double best = 0.0;
    for (const std::string& x : channel.vocabulary()) {
      best = std::max(best, channel.Emission(y, x) * channel.Prior(x));
    }
    total += best;
  }
  return total;
}

absl::StatusOr<ChannelModel> EstimateChannel(
    std::span<const AttackPair> pairs,
    const std::vector<std::string>& vocabulary) {
  const std::set<std::string> xs(vocabulary.begin(), vocabulary.end());
  if (xs.empty()) return absl::InvalidArgumentError("empty vocabulary");
  std::map<std::string, std::map<std::string, double>> counts;
  std::map<std::string, double> x_counts;
  std::set<std::string> ys;
  double total = 0.0;
  for (const AttackPair& pair : pairs) {
    const auto alignment =
        AlignTokens(pair.original_tokens, Tokenize(pair.rewritten));
    for (const Observation& obs : Observe(alignment, xs)) {
      counts[obs.x][obs.y] += 1.0;
      x_counts[obs.x] += 1.0;
      ys.insert(obs.y);
      total += 1.0;
    }
  }
  if (ys.empty()) ys.insert(std::string(kGapToken));
  Distribution prior;
  std::map<std::string, Distribution> emission;
  for (const std::string& x : xs) {
    prior[x] = (x_counts[x] + 1.0) / (total + static_cast<double>(xs.size()));
    Distribution& row = emission[x];
    const double row_total = x_counts[x] + static_cast<double>(ys.size());
    for (const std::string& y : ys) row[y] = (counts[x][y] + 1.0) / row_total;
  }
  return ChannelModel::Create(std::move(prior), std::move(emission));
}

}  // namespace privrewrite
