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

#include "privrewrite/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "spdlog/spdlog.h"
#include "privrewrite/core/tokenizer.h"

namespace privrewrite {
namespace {

// Harmonic mean of hits/a and hits/b as one division, so the result is
// correctly rounded and symmetric in a and b.
double F1FromCounts(size_t hits, size_t a, size_t b) {
  return a + b > 0 ? static_cast<double>(2 * hits) / static_cast<double>(a + b)
                   : 0.0;
}

std::set<std::string> NormalizeSet(const std::set<std::string>& in) {
  std::set<std::string> out;
  for (const std::string& s : in) out.insert(JoinTokens(Tokenize(s)));
  return out;
}

}  // namespace

double Rouge1F(std::string_view candidate, std::string_view reference) {
  const std::vector<std::string> cand = Tokenize(candidate);
  const std::vector<std::string> ref = Tokenize(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  std::map<std::string, size_t> ref_counts;
  for (const std::string& t : ref) ++ref_counts[t];
  std::map<std::string, size_t> cand_counts;
  for (const std::string& t : cand) ++cand_counts[t];
  size_t overlap = 0;
  for (const auto& [token, count] : cand_counts) {
    auto it = ref_counts.find(token);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }
  return F1FromCounts(overlap, cand.size(), ref.size());
}

PrfScores PiiMatchScores(const std::set<std::string>& predicted,
                         const std::set<std::string>& truth) {
  const std::set<std::string> p = NormalizeSet(predicted);
  const std::set<std::string> t = NormalizeSet(truth);
  size_t hits = 0;
  for (const std::string& s : p) hits += t.contains(s) ? 1 : 0;
  PrfScores scores;
  scores.precision = p.empty() ? 1.0 : static_cast<double>(hits) / p.size();
  scores.recall = t.empty() ? 1.0 : static_cast<double>(hits) / t.size();
  if (p.empty() && t.empty()) {
    scores.f1 = 1.0;
  } else if (p.empty() || t.empty()) {
    // One vacuous side: nothing was matched.
    scores.f1 = 0.0;
    if (p.empty()) scores.recall = 0.0;
    if (t.empty()) scores.precision = 0.0;
  } else {
    scores.f1 = F1FromCounts(hits, p.size(), t.size());
  }
  return scores;
}

double PrivacyRateFromEntailments(std::span<const double> max_entailment,
                                  double cutoff) {
  if (max_entailment.empty()) return 0.0;
  size_t private_count = 0;
  for (double e : max_entailment) private_count += e < cutoff ? 1 : 0;
  return 100.0 * static_cast<double>(private_count) /
         static_cast<double>(max_entailment.size());
}

absl::StatusOr<PrivacyNliOutcome> PrivacyNliRate(
    std::span<const RewriteForNli> rewrites, const NliModel& nli,
    double cutoff) {
  if (rewrites.empty()) {
    return absl::InvalidArgumentError("no rewrites to evaluate");
  }
  PrivacyNliOutcome outcome;
  std::vector<double> scored;
  for (const RewriteForNli& r : rewrites) {
    if (r.spec == nullptr) {
      return absl::InvalidArgumentError("rewrite without privacy spec");
    }
    std::optional<double> max_e = 0.0;
    for (const std::string& statement : r.spec->Statements()) {
      auto e = r.text.empty() ? absl::StatusOr<double>(0.0)
                              : nli.Entailment(r.text, statement);
      if (!e.ok()) {
        max_e.reset();
        break;
      }
      max_e = std::max(*max_e, *e);
    }
    outcome.max_entailment.push_back(max_e);
    if (!max_e.has_value()) {
      ++outcome.failures;
      continue;
    }
    scored.push_back(*max_e);
  }
  if (scored.empty()) {
    return absl::UnavailableError(absl::StrCat(
        "NLI backend failed on all ", rewrites.size(), " documents"));
  }
  outcome.scored = scored.size();
  for (double e : scored) outcome.private_count += e < cutoff ? 1 : 0;
  outcome.rate_percent = PrivacyRateFromEntailments(scored, cutoff);
  return outcome;
}

double Distinct2(std::string_view text) {
  const std::vector<std::string> tokens = Tokenize(text);
  if (tokens.size() < 2) return 1.0;
  std::set<std::pair<std::string, std::string>> unique;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    unique.emplace(tokens[i], tokens[i + 1]);
  }
  return static_cast<double>(unique.size()) /
         static_cast<double>(tokens.size() - 1);
}

double Distinct2(std::span<const std::string> texts) {
  if (texts.empty()) {
    spdlog::warn("distinct-2 over an empty text list; reporting 0");
    return 0.0;
  }
  double sum = 0.0;
  for (const std::string& t : texts) sum += Distinct2(t);
  return sum / static_cast<double>(texts.size());
}

absl::StatusOr<double> Perplexity(std::string_view text,
                                  const LogProbModel& model) {
  auto scored = model.ScoreLogProb(text);
  if (!scored.ok()) return scored.status();
  if (scored->token_count == 0) {
    return absl::InvalidArgumentError("no tokens scored");
  }
  return std::exp(-scored->total_logprob /
                  static_cast<double>(scored->token_count));
}

std::vector<AlignedPair> AlignTokens(const std::vector<std::string>& original,
                                     const std::vector<std::string>& rewritten) {
  const size_t n = original.size();
  const size_t m = rewritten.size();
  std::vector<std::vector<size_t>> dp(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub =
          dp[i - 1][j - 1] + (original[i - 1] == rewritten[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }
  std::vector<AlignedPair> out;
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        dp[i][j] ==
            dp[i - 1][j - 1] + (original[i - 1] == rewritten[j - 1] ? 0 : 1)) {
      out.push_back({original[i - 1], rewritten[j - 1]});
      --i;
      --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      out.push_back({original[i - 1], std::nullopt});
      --i;
    } else {
      out.push_back({std::nullopt, rewritten[j - 1]});
      --j;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

size_t AlignmentCost(std::span<const AlignedPair> alignment) {
  size_t cost = 0;
  for (const AlignedPair& p : alignment) {
    if (!p.original || !p.rewritten || *p.original != *p.rewritten) ++cost;
  }
  return cost;
}

}  // namespace privrewrite
