#pragma once

#include <string>
#include <vector>

#include "kgr/engine/tree.hpp"
#include "kgr/gateway/gateway.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/retriever.hpp"

namespace kgr::engine {

struct RankedAnswer {
  std::vector<kg::NodeValue> answers;
  double final_score = 0.0;
  bool depth_forced = false;
  int tree_index = 0;  // which topic tree the leaf came from
  int leaf_id = 0;
  std::string leaf_key;  // deterministic tie-break
};

struct InferenceResult {
  std::string query;
  std::vector<ReasoningTree> trees;   // one per topic entity
  std::vector<RankedAnswer> ranked;   // merged, best first
};

// Hop-by-hop tree construction. Each hop expands the surviving entity
// frontier: a retrieval-token dispatch picks between extending by a relation
// and answering; relation candidates are retrieved top-K with hypo-generator
// support and filtered per-candidate by relevance; tail entities are fetched,
// gated by one rationality check per relation branch, and filtered by
// relevance; candidates whose governing token argmax is Unrelevant or
// Unreasonable become pruned children and are never expanded. The surviving
// entities of one relation branch form a sibling group: the group's
// lexicographically first member speaks for it when deciding whether to stop
// and answer, and an answering group emits a single leaf carrying all of its
// terminals. Completed-hop frontiers are ranked by node score and truncated
// to the beam width (beam mode) or kept whole (exhausted mode). Hitting the
// depth bound forces an answer attempt flagged depth_forced.
class InferenceEngine {
 public:
  InferenceEngine(const kg::KnowledgeGraph& graph,
                  const gateway::ModelGateway& gateway,
                  const retrieval::SimilarityProvider& similarity,
                  BeamConfig config);

  // One tree for one topic. Throws UnknownTopicError for topics absent from
  // the graph; transport failures mark the returned tree instead of throwing.
  ReasoningTree run(const std::string& query, const kg::EntityRef& topic) const;

  // One tree per topic, answers merged into one ranking.
  InferenceResult run_query(const std::string& query,
                            const std::vector<std::string>& topic_ids) const;

  // Expands one frontier node (root or entity) for the hop at depth d.
  // Returns ids of entity children that stayed open and should compete for
  // the next frontier; answer leaves are attached as a side effect.
  std::vector<int> expand_node(ReasoningTree& tree, int node_id, int d,
                               const std::string& query) const;

  // Top-B of the frontier by (total desc, path key asc); identity in
  // exhausted mode apart from the deterministic reordering.
  static std::vector<int> beam_select(const ReasoningTree& tree,
                                      std::vector<int> frontier,
                                      const BeamConfig& cfg);

  const BeamConfig& config() const { return config_; }

 private:
  int make_answer_leaf(ReasoningTree& tree, int rep_id,
                       const std::vector<int>& group,
                       const gateway::GenerationContext& ctx,
                       bool depth_forced) const;
  bool group_wants_answer(const gateway::GenerationContext& rep_ctx) const;

  const kg::KnowledgeGraph& graph_;
  const gateway::ModelGateway& gateway_;
  const retrieval::SimilarityProvider& similarity_;
  BeamConfig config_;
};

// Answered leaves of one tree ranked by backtracked score (desc, ties by
// leaf key). Empty result = explicit no-answer.
std::vector<RankedAnswer> finalize_answers(const ReasoningTree& tree,
                                           const BeamConfig& cfg);

// Merge per-tree rankings into one, preserving the same order rules.
std::vector<RankedAnswer> merge_rankings(std::vector<ReasoningTree>& trees,
                                         const BeamConfig& cfg);

}  // namespace kgr::engine
