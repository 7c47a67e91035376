#include "kgr/engine/tree.hpp"

#include <algorithm>
#include <deque>

#include "kgr/error.hpp"

namespace kgr::engine {

void BeamConfig::validate() const {
  if (mode == SearchMode::Beam && beam_width < 1) {
    throw DomainError("beam width must be >= 1 in beam mode");
  }
  if (max_depth < 1) throw DomainError("max depth must be >= 1");
  if (top_k < 1) throw DomainError("top_k must be >= 1");
  if (hypo_count < 0) throw DomainError("hypo count must be >= 0");
  score.validate();
}

std::string TreeNode::sort_key() const {
  std::string key = path.key();
  switch (kind) {
    case NodeKind::Root:
    case NodeKind::Entity:
      return key;
    case NodeKind::Relation:
      return key + " -> " + (relation ? relation->str() : std::string("?"));
    case NodeKind::Answer: {
      key += " -> answer:";
      if (answer) {
        for (const auto& a : answer->answers) key += " " + a.key();
      }
      return key;
    }
  }
  return key;
}

ReasoningTree::ReasoningTree(kg::EntityRef topic) : topic_(topic) {
  TreeNode root;
  root.id = 0;
  root.parent = -1;
  root.depth = 0;
  root.kind = NodeKind::Root;
  root.path = kg::ReasoningPath{std::move(topic), {}};
  nodes_.push_back(std::move(root));
}

int ReasoningTree::add_child(int parent, TreeNode n) {
  TreeNode& p = node(parent);
  if (p.status == NodeStatus::Pruned) {
    throw DomainError("pruned nodes cannot take children");
  }
  n.id = static_cast<int>(nodes_.size());
  n.parent = parent;
  p.children.push_back(n.id);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

std::vector<int> ReasoningTree::answered_leaves() const {
  std::vector<int> out;
  for (const auto& n : nodes_) {
    if (n.status == NodeStatus::Answered) out.push_back(n.id);
  }
  return out;
}

double ReasoningTree::backtracked_score(int id,
                                        const reflect::ScoreConfig& cfg) const {
  std::vector<double> totals;
  for (int at = id; at != -1; at = node(at).parent) {
    totals.push_back(node(at).scores.total);
  }
  std::reverse(totals.begin(), totals.end());
  return reflect::path_final_score(totals, cfg.path_aggregate);
}

}  // namespace kgr::engine
