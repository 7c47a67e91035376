#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgr/kg/types.hpp"
#include "kgr/reflect/scoring.hpp"

namespace kgr::engine {

enum class SearchMode { Beam, Exhausted };

struct BeamConfig {
  int beam_width = 3;
  int max_depth = 2;
  int top_k = 5;
  int hypo_count = 1;  // 0 disables the hypo-generator
  reflect::ScoreConfig score;
  SearchMode mode = SearchMode::Beam;

  void validate() const;
};

enum class NodeKind { Root, Relation, Entity, Answer };
enum class NodeStatus { Open, Pruned, Answered };

struct AnswerSet {
  std::vector<kg::NodeValue> answers;  // canonically sorted
  reflect::TokenDistribution utility;
  double final_score = 0.0;
  bool depth_forced = false;
};

// One reasoning-tree node. Depth counts completed hops: a relation node
// carries the hop it opens, the entity node that completes the hop shares
// the same depth, and answer leaves inherit their parent's depth.
struct TreeNode {
  int id = 0;
  int parent = -1;  // -1: root
  int depth = 0;
  NodeKind kind = NodeKind::Root;
  std::optional<kg::RelationRef> relation;  // set on relation nodes
  std::optional<kg::NodeValue> node;        // set on entity nodes
  reflect::NodeScores scores;
  NodeStatus status = NodeStatus::Open;
  std::optional<reflect::ReflectionToken> prune_reason;
  std::optional<AnswerSet> answer;  // set on answered leaves
  std::vector<int> children;
  kg::ReasoningPath path;  // completed hops from the topic to here

  // Deterministic ordering key; disambiguates half-hop relation nodes and
  // answer leaves sharing one completed path.
  std::string sort_key() const;
};

class ReasoningTree {
 public:
  explicit ReasoningTree(kg::EntityRef topic);

  int root() const { return 0; }
  const kg::EntityRef& topic() const { return topic_; }
  std::size_t size() const { return nodes_.size(); }
  TreeNode& node(int id) { return nodes_.at(static_cast<std::size_t>(id)); }
  const TreeNode& node(int id) const {
    return nodes_.at(static_cast<std::size_t>(id));
  }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Moves n into the tree, wiring id/parent/children. Pruned parents reject
  // children.
  int add_child(int parent, TreeNode n);

  std::vector<int> answered_leaves() const;

  // Sum (or configured aggregate) of node totals from the root to `id`.
  double backtracked_score(int id, const reflect::ScoreConfig& cfg) const;

  bool failed() const { return !failure_.empty(); }
  const std::string& failure() const { return failure_; }
  void mark_failed(std::string reason) { failure_ = std::move(reason); }

 private:
  kg::EntityRef topic_;
  std::vector<TreeNode> nodes_;
  std::string failure_;
};

}  // namespace kgr::engine
