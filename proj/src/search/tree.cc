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

#include "privrewrite/search/tree.h"
#include "privrewrite/core/absl_compat.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privrewrite {

std::optional<RewriteAction> RewriteNode::FirstUnexpandedAction() const {
  if (terminal) return std::nullopt;
  for (RewriteAction action : kAllActions) {
    if (!child(action)) return action;
  }
  return std::nullopt;
}

RewriteTree::RewriteTree(std::string root_sentence) {
  RewriteNode root;
  root.id = 0;
  root.sentence_state = std::move(root_sentence);
  nodes_.push_back(std::move(root));
}

absl::StatusOr<NodeId> RewriteTree::AddChild(NodeId parent,
                                             RewriteAction action,
                                             std::string sentence_state) {
  if (parent >= nodes_.size()) {
    return absl::OutOfRangeError(absl::StrCat("no node ", parent));
  }
  const size_t slot = static_cast<size_t>(action);
  if (nodes_[parent].children[slot].has_value()) {
    return absl::AlreadyExistsError(absl::StrCat(
        "node ", parent, " already has a ", Sv(ActionName(action)), " child"));
  }
  RewriteNode node;
  node.id = nodes_.size();
  node.sentence_state = std::move(sentence_state);
  node.action_taken = action;
  node.parent = parent;
  nodes_[parent].children[slot] = node.id;
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

bool RewriteTree::IsOpen(NodeId id) const {
  const RewriteNode& n = nodes_.at(id);
  if (n.HasUnexpandedAction()) return true;
  if (n.terminal) return false;
  for (const std::optional<NodeId>& child : n.children) {
    if (child && IsOpen(*child)) return true;
  }
  return false;
}

std::vector<NodeId> RewriteTree::PathTo(NodeId id) const {
  std::vector<NodeId> path;
  std::optional<NodeId> cur = id;
  while (cur.has_value()) {
    path.push_back(*cur);
    cur = nodes_.at(*cur).parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void RewriteTree::Backpropagate(std::span<const NodeId> path, double reward) {
  for (NodeId id : path) {
    RewriteNode& n = nodes_.at(id);
    n.visit_count += 1;
    n.mean_reward += (reward - n.mean_reward) / static_cast<double>(n.visit_count);
  }
}

double UctScore(double child_mean_reward, int64_t child_visits,
                int64_t parent_visits, double c) {
  if (child_visits <= 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(std::max<int64_t>(parent_visits, 1));
  return child_mean_reward +
         c * std::sqrt(std::log(n) / static_cast<double>(child_visits));
}

std::optional<NodeId> BestUctChild(const RewriteTree& tree, NodeId id,
                                   double c) {
  const RewriteNode& parent = tree.node(id);
  std::optional<NodeId> best;
  double best_score = 0.0;
  // kAllActions order plus strict comparison gives the action tie-break.
  for (RewriteAction action : kAllActions) {
    const std::optional<NodeId> child = parent.child(action);
    if (!child || !tree.IsOpen(*child)) continue;
    const RewriteNode& n = tree.node(*child);
    const double score =
        UctScore(n.mean_reward, n.visit_count, parent.visit_count, c);
    if (!best || score > best_score) {
      best = child;
      best_score = score;
    }
  }
  return best;
}

std::vector<NodeId> SelectLeaf(const RewriteTree& tree, double c) {
  std::vector<NodeId> path = {tree.root()};
  while (true) {
    const RewriteNode& cur = tree.node(path.back());
    if (!cur.HasChildren() || cur.HasUnexpandedAction()) return path;
    const std::optional<NodeId> next = BestUctChild(tree, cur.id, c);
    if (!next) return path;
    path.push_back(*next);
  }
}

}  // namespace privrewrite
