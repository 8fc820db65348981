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

#include "privrewrite/search/search.h"

#include <algorithm>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privrewrite/core/absl_compat.h"
#include "privrewrite/core/tokenizer.h"
#include "privrewrite/rewriter/rewriter.h"

namespace privrewrite {
namespace {

absl::Status CheckContext(const SearchContext& ctx) {
  if (ctx.generator == nullptr || ctx.monitor == nullptr ||
      ctx.reward == nullptr || ctx.prompts == nullptr) {
    return absl::InvalidArgumentError("search context is incomplete");
  }
  return absl::OkStatus();
}

struct Selection {
  std::vector<NodeId> path;
  std::optional<RewriteAction> action;
};

Selection SelectUniform(const RewriteTree& tree, Rng& rng) {
  std::vector<NodeId> open;
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (tree.node(id).HasUnexpandedAction()) open.push_back(id);
  }
  // Callers only select while the root is open, so open is never empty.
  const NodeId pick = open[rng.UniformIndex(open.size())];
  std::vector<RewriteAction> actions;
  for (RewriteAction a : kAllActions) {
    if (!tree.node(pick).child(a)) actions.push_back(a);
  }
  return {tree.PathTo(pick), actions[rng.UniformIndex(actions.size())]};
}

// Untried actions first, in canonical order; afterwards the action with the
// best mean oriented reward seen so far on the route.
RewriteAction NextRouteAction(const std::vector<Expansion>& expansions,
                              GateDirection direction) {
  std::map<RewriteAction, std::pair<double, int>> stats;
  for (const Expansion& e : expansions) {
    auto& [sum, count] = stats[e.action];
    sum += OrientScore(e.reward, direction);
    ++count;
  }
  for (RewriteAction a : kAllActions) {
    if (!stats.contains(a)) return a;
  }
  RewriteAction best = kAllActions[0];
  double best_mean = -1.0;
  for (RewriteAction a : kAllActions) {
    const double mean = stats[a].first / stats[a].second;
    if (mean > best_mean) {
      best = a;
      best_mean = mean;
    }
  }
  return best;
}

}  // namespace

std::string_view StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kTree:
      return "tree";
    case StrategyKind::kOneStep:
      return "one-step";
    case StrategyKind::kRandom:
      return "random";
    case StrategyKind::kGreedy:
      return "greedy";
    case StrategyKind::kChain:
      return "chain";
  }
  return "unknown";
}

absl::StatusOr<StrategyKind> ParseStrategy(std::string_view name) {
  for (StrategyKind kind : kAllStrategies) {
    if (StrategyName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown strategy '", Sv(name), "' (tree|one-step|random|greedy|chain)"));
}

absl::StatusOr<Expansion> ExpandAndEvaluate(
    RewriteTree& tree, std::vector<NodeId> path,
    std::optional<RewriteAction> action,
    std::span<const AlignedSegment> targets, const PrivacySpec& spec,
    const SearchContext& ctx, const SearchConfig& cfg, Rng& rng) {
  if (auto s = CheckContext(ctx); !s.ok()) return s;
  if (path.empty() || path.front() != tree.root()) {
    return absl::InvalidArgumentError("path must start at the root");
  }
  if (!action.has_value()) {
    while (!tree.node(path.back()).HasUnexpandedAction()) {
      const std::optional<NodeId> next =
          BestUctChild(tree, path.back(), cfg.uct_constant);
      if (!next) {
        return absl::FailedPreconditionError("no expandable node below path");
      }
      path.push_back(*next);
    }
    action = tree.node(path.back()).FirstUnexpandedAction();
  } else if (tree.node(path.back()).terminal) {
    return absl::FailedPreconditionError("node no longer holds the segment");
  } else if (tree.node(path.back()).child(*action).has_value()) {
    return absl::AlreadyExistsError(
        absl::StrCat("action ", Sv(ActionName(*action)), " already expanded"));
  }
  const RewriteNode& leaf = tree.node(path.back());
  auto candidates =
      OneStepRewrite(leaf.sentence_state, targets, *action, spec,
                     *ctx.generator, *ctx.monitor, cfg, rng, *ctx.prompts);
  if (!candidates.ok()) return candidates.status();
  const std::string text = candidates->chosen().text;
  auto reward = ctx.reward->Score(text, targets, spec);
  if (!reward.ok()) return reward.status();

  auto child = tree.AddChild(path.back(), *action, text);
  if (!child.ok()) return child.status();
  tree.SetLastReward(*child, *reward);
  const std::vector<std::string> child_tokens = Tokenize(text);
  for (const AlignedSegment& t : targets) {
    if (FindTokenRun(child_tokens, t.Tokens()) == child_tokens.size()) {
      tree.MarkTerminal(*child);
      break;
    }
  }
  std::vector<NodeId> full = path;
  full.push_back(*child);
  tree.Backpropagate(full, OrientScore(*reward, cfg.gate_direction));

  Expansion e;
  e.path = std::move(path);
  e.node = *child;
  e.action = *action;
  e.text = text;
  e.reward = *reward;
  e.accepted = GateAccepts(*reward, cfg.reward_threshold, cfg.gate_direction);
  return e;
}

absl::StatusOr<SearchTrace> SearchSegment(
    std::string_view sentence, std::span<const AlignedSegment> targets,
    const PrivacySpec& spec, const SearchContext& ctx, const SearchConfig& cfg,
    Rng& rng, LeafPolicy policy) {
  if (auto s = CheckContext(ctx); !s.ok()) return s;
  if (targets.empty()) return absl::InvalidArgumentError("no segment to search");
  const std::vector<std::string> root_tokens = Tokenize(sentence);
  for (const AlignedSegment& t : targets) {
    if (FindTokenRun(root_tokens, t.Tokens()) == root_tokens.size()) {
      return absl::NotFoundError(
          absl::StrCat("segment not found: '", t.surface, "'"));
    }
  }

  SearchTrace trace;
  trace.targets.assign(targets.begin(), targets.end());
  trace.root_sentence = std::string(sentence);
  RewriteTree tree{std::string(sentence)};
  NodeId route_tip = tree.root();

  while (static_cast<int>(trace.expansions.size()) < cfg.tree_budget &&
         static_cast<int>(trace.failures.size()) < cfg.tree_budget) {
    // The route tip is always a fresh leaf, so only terminality matters.
    const bool open = policy == LeafPolicy::kSingleRoute
                          ? !tree.node(route_tip).terminal
                          : tree.IsOpen(tree.root());
    if (!open) {
      trace.exhausted = true;
      break;
    }
    Selection selection;
    switch (policy) {
      case LeafPolicy::kUct:
        selection.path = SelectLeaf(tree, cfg.uct_constant);
        break;
      case LeafPolicy::kUniform:
        selection = SelectUniform(tree, rng);
        break;
      case LeafPolicy::kSingleRoute:
        selection.path = tree.PathTo(route_tip);
        selection.action =
            NextRouteAction(trace.expansions, cfg.gate_direction);
        break;
    }
    const RewriteAction attempted =
        selection.action.value_or(
            tree.node(selection.path.back()).FirstUnexpandedAction().value_or(
                kAllActions[0]));
    auto expansion = ExpandAndEvaluate(tree, selection.path, selection.action,
                                       targets, spec, ctx, cfg, rng);
    if (!expansion.ok()) {
      trace.failures.push_back({std::move(selection.path), attempted,
                                std::string(expansion.status().message())});
      continue;
    }
    route_tip = expansion->node;
    const bool accepted = expansion->accepted;
    trace.expansions.push_back(*std::move(expansion));
    if (accepted) {
      trace.terminated_early = true;
      break;
    }
  }

  // Best node: highest oriented reward, then the fewest token edits from the
  // root sentence, then the lowest id.
  std::optional<NodeId> best;
  double best_value = 0.0;
  size_t best_edits = 0;
  for (NodeId id = 1; id < tree.size(); ++id) {
    const RewriteNode& n = tree.node(id);
    if (!n.last_reward.has_value()) continue;
    const double value = OrientScore(*n.last_reward, cfg.gate_direction);
    const size_t edits =
        TokenEditDistance(root_tokens, Tokenize(n.sentence_state));
    if (!best || value > best_value ||
        (value == best_value && edits < best_edits)) {
      best = id;
      best_value = value;
      best_edits = edits;
    }
  }
  if (best.has_value()) {
    trace.best_leaf_text = tree.node(*best).sentence_state;
    trace.best_leaf_reward = *tree.node(*best).last_reward;
  } else {
    trace.degraded = true;
    trace.best_leaf_text = std::string(sentence);
  }
  return trace;
}

absl::StatusOr<SearchTrace> SearchSegment(
    std::string_view sentence, const AlignedSegment& segment,
    const PrivacySpec& spec, const SearchContext& ctx, const SearchConfig& cfg,
    Rng& rng, LeafPolicy policy) {
  return SearchSegment(sentence, std::span<const AlignedSegment>(&segment, 1),
                       spec, ctx, cfg, rng, policy);
}

absl::StatusOr<DocumentRewrite> RewriteDocument(
    const Utterance& utterance, const PrivacySpec& spec,
    const AlignmentResult& alignment, StrategyKind strategy,
    const SearchContext& ctx, const SearchConfig& cfg) {
  if (auto s = CheckContext(ctx); !s.ok()) return s;
  DocumentRewrite out;
  out.final_text = utterance.text();
  const std::vector<AlignedSegment>& segments = alignment.segments;
  if (segments.empty()) return out;

  const Rng doc_rng = Rng(cfg.rng_seed).Fork(utterance.doc_id());

  // A single rewrite call with no refinement.
  SearchConfig single = cfg;
  single.tree_budget = 1;

  if (strategy == StrategyKind::kOneStep) {
    Rng rng = doc_rng.Fork(uint64_t{0});
    auto trace = SearchSegment(out.final_text, segments, spec, ctx, single,
                               rng, LeafPolicy::kSingleRoute);
    if (!trace.ok()) return trace.status();
    out.final_text = trace->best_leaf_text;
    out.traces.push_back(*std::move(trace));
    return out;
  }

  for (size_t i = 0; i < segments.size(); ++i) {
    const AlignedSegment& segment = segments[i];
    const std::vector<std::string> working = Tokenize(out.final_text);
    if (FindTokenRun(working, segment.Tokens()) == working.size()) {
      SearchTrace skipped;
      skipped.targets = {segment};
      skipped.root_sentence = out.final_text;
      skipped.skipped = true;
      skipped.best_leaf_text = out.final_text;
      out.traces.push_back(std::move(skipped));
      continue;
    }
    Rng rng = doc_rng.Fork(uint64_t{i});
    absl::StatusOr<SearchTrace> trace;
    switch (strategy) {
      case StrategyKind::kTree:
        trace = SearchSegment(out.final_text, segment, spec, ctx, cfg, rng,
                              LeafPolicy::kUct);
        break;
      case StrategyKind::kRandom:
        trace = SearchSegment(out.final_text, segment, spec, ctx, cfg, rng,
                              LeafPolicy::kUniform);
        break;
      case StrategyKind::kGreedy:
        trace = SearchSegment(out.final_text, segment, spec, ctx, cfg, rng,
                              LeafPolicy::kSingleRoute);
        break;
      case StrategyKind::kChain:
        trace = SearchSegment(out.final_text, segment, spec, ctx, single, rng,
                              LeafPolicy::kSingleRoute);
        break;
      case StrategyKind::kOneStep:
        break;
    }
    if (!trace.ok()) return trace.status();
    out.final_text = trace->best_leaf_text;
    out.traces.push_back(*std::move(trace));
  }
  return out;
}

}  // namespace privrewrite
