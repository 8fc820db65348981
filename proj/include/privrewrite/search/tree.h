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

#ifndef PRIVREWRITE_SEARCH_TREE_H_
#define PRIVREWRITE_SEARCH_TREE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privrewrite/core/types.h"

namespace privrewrite {

using NodeId = size_t;

struct RewriteNode {
  NodeId id = 0;
  std::string sentence_state;
  // Absent only at the root.
  std::optional<RewriteAction> action_taken;
  // Running mean of backpropagated rewards (Q) and visit count (N).
  double mean_reward = 0.0;
  int64_t visit_count = 0;
  // Indexed by RewriteAction.
  std::array<std::optional<NodeId>, 2> children;
  std::optional<NodeId> parent;
  // Raw reward of the expansion that created this node.
  std::optional<double> last_reward;
  // The state lost a target segment, so there is nothing left to rewrite.
  bool terminal = false;

  std::optional<NodeId> child(RewriteAction action) const {
    return children[static_cast<size_t>(action)];
  }
  bool HasChildren() const { return children[0] || children[1]; }
  bool HasUnexpandedAction() const {
    return !terminal && (!children[0] || !children[1]);
  }
  // First action without a child, in kAllActions order.
  std::optional<RewriteAction> FirstUnexpandedAction() const;
};

// Arena-backed search tree. Node ids are dense and assigned in creation
// order, root = 0.
class RewriteTree {
 public:
  explicit RewriteTree(std::string root_sentence);

  NodeId root() const { return 0; }
  size_t size() const { return nodes_.size(); }
  const RewriteNode& node(NodeId id) const { return nodes_.at(id); }

  // Fails when the parent already has a child for this action.
  absl::StatusOr<NodeId> AddChild(NodeId parent, RewriteAction action,
                                  std::string sentence_state);
  void SetLastReward(NodeId id, double reward) {
    nodes_.at(id).last_reward = reward;
  }
  void MarkTerminal(NodeId id) { nodes_.at(id).terminal = true; }

  // True when the node or one of its descendants can still be expanded.
  bool IsOpen(NodeId id) const;

  // Root-to-node path.
  std::vector<NodeId> PathTo(NodeId id) const;

  // N += 1 and Q += (r - Q) / N on every node of the path.
  void Backpropagate(std::span<const NodeId> path, double reward);

 private:
  std::vector<RewriteNode> nodes_;
};

// Mean + c * sqrt(ln(parent_visits) / child_visits); +inf for an unvisited
// child. parent_visits below 1 is treated as 1.
double UctScore(double child_mean_reward, int64_t child_visits,
                int64_t parent_visits, double c);

// Descends from the root along the maximal-UCT child until reaching a node
// with an unexpanded action (or no children). UCT ties go to the earlier
// action, then the lower node id.
std::vector<NodeId> SelectLeaf(const RewriteTree& tree, double c);

// Maximal-UCT child of a fully or partially expanded node, if any child.
// Argmax-UCT child among the open children; nullopt when none is open.
std::optional<NodeId> BestUctChild(const RewriteTree& tree, NodeId id,
                                   double c);

}  // namespace privrewrite

#endif  // PRIVREWRITE_SEARCH_TREE_H_
