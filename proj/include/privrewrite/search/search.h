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

#ifndef PRIVREWRITE_SEARCH_SEARCH_H_
#define PRIVREWRITE_SEARCH_SEARCH_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/alignment/segment.h"
#include "privrewrite/backends/backend.h"
#include "privrewrite/backends/scorer.h"
#include "privrewrite/core/config.h"
#include "privrewrite/core/rng.h"
#include "privrewrite/core/types.h"
#include "privrewrite/rewriter/prompt.h"
#include "privrewrite/search/tree.h"

namespace privrewrite {

enum class StrategyKind { kTree, kOneStep, kRandom, kGreedy, kChain };

inline constexpr std::array<StrategyKind, 5> kAllStrategies = {
    StrategyKind::kTree, StrategyKind::kOneStep, StrategyKind::kRandom,
    StrategyKind::kGreedy, StrategyKind::kChain};

std::string_view StrategyName(StrategyKind kind);
absl::StatusOr<StrategyKind> ParseStrategy(std::string_view name);

// How the next node to expand is chosen inside one segment's search.
enum class LeafPolicy {
  // UCT descent; the tree strategy.
  kUct,
  // Uniform over nodes that still have an unexpanded action.
  kUniform,
  // Extend a single route from its newest node.
  kSingleRoute,
};

// Borrowed backends for a search. All pointers must outlive the call.
struct SearchContext {
  const Generator* generator = nullptr;
  // Gate inside each one-step rewrite.
  const CandidateScorer* monitor = nullptr;
  // Reward assigned to a newly created node.
  const CandidateScorer* reward = nullptr;
  const PromptTemplate* prompts = &PromptTemplate::Default();
};

struct Expansion {
  // Root-to-parent path that was selected; the new node hangs below it.
  std::vector<NodeId> path;
  NodeId node = 0;
  RewriteAction action = RewriteAction::kDelete;
  std::string text;
  double reward = 0.0;
  bool accepted = false;
};

struct ExpansionFailure {
  std::vector<NodeId> path;
  RewriteAction action = RewriteAction::kDelete;
  std::string message;
};

struct SearchTrace {
  // One segment for per-segment strategies, all of them for one-step.
  std::vector<AlignedSegment> targets;
  std::string root_sentence;
  std::vector<Expansion> expansions;
  std::vector<ExpansionFailure> failures;
  bool terminated_early = false;
  // No expansion succeeded; best_leaf_text is the root sentence.
  bool degraded = false;
  // The segment no longer occurs in the working sentence.
  bool skipped = false;
  // Stopped before the budget because every node had lost the segment.
  bool exhausted = false;
  std::string best_leaf_text;
  double best_leaf_reward = 0.0;

  const AlignedSegment& segment() const { return targets.front(); }
};

// Creates one child below path.back() and scores it. With no action given,
// the first unexpanded action is used; a fully expanded node is first
// descended by UCT until one is found (the path grows accordingly).
// Backpropagates the oriented reward along the new root-to-child path.
absl::StatusOr<Expansion> ExpandAndEvaluate(
    RewriteTree& tree, std::vector<NodeId> path,
    std::optional<RewriteAction> action,
    std::span<const AlignedSegment> targets, const PrivacySpec& spec,
    const SearchContext& ctx, const SearchConfig& cfg, Rng& rng);

// Up to cfg.tree_budget select/expand/score/backpropagate rounds over one
// segment, stopping at the first reward the gate accepts. Failed
// expansions are logged and do not use budget; the search gives up after
// tree_budget failures.
absl::StatusOr<SearchTrace> SearchSegment(
    std::string_view sentence, std::span<const AlignedSegment> targets,
    const PrivacySpec& spec, const SearchContext& ctx, const SearchConfig& cfg,
    Rng& rng, LeafPolicy policy = LeafPolicy::kUct);

absl::StatusOr<SearchTrace> SearchSegment(
    std::string_view sentence, const AlignedSegment& segment,
    const PrivacySpec& spec, const SearchContext& ctx, const SearchConfig& cfg,
    Rng& rng, LeafPolicy policy = LeafPolicy::kUct);

struct DocumentRewrite {
  std::string final_text;
  std::vector<SearchTrace> traces;
};

// Rewrites the utterance segment by segment, left to right; each segment's
// result is the input sentence for the next.
//   kTree     UCT search per segment
//   kRandom   same budget, uniform leaf choice
//   kGreedy   same budget, a single route
//   kChain    one one-step rewrite per segment
//   kOneStep  one one-step rewrite of the whole sentence for all segments
absl::StatusOr<DocumentRewrite> RewriteDocument(
    const Utterance& utterance, const PrivacySpec& spec,
    const AlignmentResult& alignment, StrategyKind strategy,
    const SearchContext& ctx, const SearchConfig& cfg);

}  // namespace privrewrite

#endif  // PRIVREWRITE_SEARCH_SEARCH_H_
