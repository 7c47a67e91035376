#include "kgr/engine/engine.hpp"

#include <algorithm>
#include <limits>

#include "kgr/error.hpp"

namespace kgr::engine {

using gateway::GenerationContext;
using gateway::InjectedKnowledge;
using reflect::TokenDistribution;
using reflect::TokenFamily;
namespace cat = reflect::cat;

namespace {

double mean_or_zero(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

InferenceEngine::InferenceEngine(const kg::KnowledgeGraph& graph,
                                 const gateway::ModelGateway& gateway,
                                 const retrieval::SimilarityProvider& similarity,
                                 BeamConfig config)
    : graph_(graph),
      gateway_(gateway),
      similarity_(similarity),
      config_(std::move(config)) {
  config_.validate();
}

bool InferenceEngine::group_wants_answer(const GenerationContext& rep_ctx) const {
  const TokenDistribution dist = gateway_.predict_retrieval(rep_ctx);
  // Only extending by a relation or answering makes sense at an
  // entity-terminal context; argmax over those two, canonical order breaking
  // ties, defaulting to "continue" when neither category was emitted.
  bool seen = false;
  int best = cat::kRelationRetrieval;
  double best_lp = -std::numeric_limits<double>::infinity();
  for (const auto& [c, lp] : dist.entries()) {
    if (c != cat::kRelationRetrieval && c != cat::kNoRetrieval) continue;
    if (!seen || lp > best_lp) {
      seen = true;
      best = c;
      best_lp = lp;
    }
  }
  return seen && best == cat::kNoRetrieval;
}

int InferenceEngine::make_answer_leaf(ReasoningTree& tree, int rep_id,
                                      const std::vector<int>& group,
                                      const GenerationContext& ctx,
                                      bool depth_forced) const {
  const TokenDistribution udist = gateway_.predict_utility(ctx);
  const double uti = reflect::utility_score(udist, config_.score.utility_mode);
  const double seq = mean_or_zero(gateway_.segment_logprobs(ctx, ""));

  TreeNode leaf;
  leaf.kind = NodeKind::Answer;
  leaf.depth = tree.node(rep_id).depth;
  leaf.path = tree.node(rep_id).path;
  leaf.status = NodeStatus::Answered;
  leaf.scores = reflect::make_node_scores(seq, 0.0, 0.0, uti, config_.score);

  AnswerSet set;
  for (int id : group) set.answers.push_back(tree.node(id).path.terminal());
  std::sort(set.answers.begin(), set.answers.end());
  set.utility = udist;
  set.depth_forced = depth_forced;
  leaf.answer = std::move(set);

  const int leaf_id = tree.add_child(rep_id, std::move(leaf));
  tree.node(leaf_id).answer->final_score =
      tree.backtracked_score(leaf_id, config_.score);
  return leaf_id;
}

std::vector<int> InferenceEngine::expand_node(ReasoningTree& tree, int node_id,
                                              int d,
                                              const std::string& query) const {
  // Copy the frontier node's state up front: add_child reallocates the node
  // arena, so references into it do not survive expansion.
  const kg::ReasoningPath base_path = tree.node(node_id).path;
  {
    const TreeNode& n = tree.node(node_id);
    if (n.status != NodeStatus::Open) {
      throw DomainError("only open nodes expand");
    }
    if (n.kind != NodeKind::Root && n.kind != NodeKind::Entity) {
      throw DomainError("only root/entity nodes sit on the hop frontier");
    }
  }
  if (d > config_.max_depth) throw DomainError("expansion past max depth");

  if (!base_path.terminal().is_entity()) return {};  // literals dead-end
  const kg::EntityRef at = graph_.entity(base_path.terminal_key());

  GenerationContext ctx{query, base_path, std::nullopt, d};
  std::vector<std::string> hypos;
  if (config_.hypo_count > 0) {
    for (const auto& h : gateway_.hypo_relations(ctx, config_.hypo_count)) {
      hypos.push_back(h.surface);
    }
  }

  const auto retrieved = retrieval::retrieve_relations(
      query, at, hypos, graph_, config_.top_k, similarity_);

  std::vector<int> surviving_entities;
  for (const auto& candidate : retrieved) {
    const std::string rel_name = candidate.candidate.str();
    const TokenDistribution rel_dist = gateway_.predict_relevance(ctx, rel_name);
    const double rel_seq =
        mean_or_zero(gateway_.segment_logprobs(ctx, rel_name));

    TreeNode rc;
    rc.kind = NodeKind::Relation;
    rc.depth = d;
    rc.relation = candidate.candidate;
    rc.path = base_path;
    rc.scores = reflect::make_node_scores(
        rel_seq, reflect::relevance_score(rel_dist, config_.score.partial_weight),
        1.0, 0.0, config_.score);

    if (rel_dist.argmax() == cat::kUnrelevant) {
      rc.status = NodeStatus::Pruned;
      rc.prune_reason =
          reflect::ReflectionToken{TokenFamily::Relevance, cat::kUnrelevant};
      tree.add_child(node_id, std::move(rc));
      continue;
    }
    const int rc_id = tree.add_child(node_id, std::move(rc));

    // Entity half of the hop: one rationality gate for the branch, then
    // per-tail relevance.
    GenerationContext branch_ctx{
        query, base_path,
        InjectedKnowledge{InjectedKnowledge::Kind::Relations, {rel_name}}, d};
    const TokenDistribution rat_dist = gateway_.predict_rationality(branch_ctx);
    if (rat_dist.argmax() == cat::kUnreasonable) {
      tree.node(rc_id).status = NodeStatus::Pruned;
      tree.node(rc_id).prune_reason = reflect::ReflectionToken{
          TokenFamily::Rationality, cat::kUnreasonable};
      continue;
    }
    const double rat =
        reflect::rationality_score(rat_dist, config_.score.partial_weight);

    const auto tails = retrieval::retrieve_entities(graph_, at, candidate.candidate);
    std::vector<int> group;
    for (const auto& tail : tails) {
      const std::string display = tail.display();
      const TokenDistribution tail_dist =
          gateway_.predict_relevance(branch_ctx, display);
      const double tail_seq =
          mean_or_zero(gateway_.segment_logprobs(branch_ctx, display));

      TreeNode ec;
      ec.kind = NodeKind::Entity;
      ec.depth = d;
      ec.node = tail;
      ec.path = base_path.extended(candidate.candidate, tail);
      ec.scores = reflect::make_node_scores(
          tail_seq,
          reflect::relevance_score(tail_dist, config_.score.partial_weight), rat,
          0.0, config_.score);

      if (tail_dist.argmax() == cat::kUnrelevant) {
        ec.status = NodeStatus::Pruned;
        ec.prune_reason =
            reflect::ReflectionToken{TokenFamily::Relevance, cat::kUnrelevant};
        tree.add_child(rc_id, std::move(ec));
        continue;
      }
      group.push_back(tree.add_child(rc_id, std::move(ec)));
    }
    if (group.empty()) continue;  // branch closed, nothing survived

    const int rep = *std::min_element(
        group.begin(), group.end(), [&](int a, int b) {
          return tree.node(a).sort_key() < tree.node(b).sort_key();
        });
    GenerationContext rep_ctx{query, tree.node(rep).path, std::nullopt, d + 1};
    const bool stop = group_wants_answer(rep_ctx);
    if (stop || d == config_.max_depth) {
      make_answer_leaf(tree, rep, group, rep_ctx, /*depth_forced=*/!stop);
    } else {
      surviving_entities.insert(surviving_entities.end(), group.begin(),
                                group.end());
    }
  }
  return surviving_entities;
}

std::vector<int> InferenceEngine::beam_select(const ReasoningTree& tree,
                                              std::vector<int> frontier,
                                              const BeamConfig& cfg) {
  std::sort(frontier.begin(), frontier.end(), [&](int a, int b) {
    const auto& na = tree.node(a);
    const auto& nb = tree.node(b);
    if (na.scores.total != nb.scores.total) {
      return na.scores.total > nb.scores.total;
    }
    return na.sort_key() < nb.sort_key();
  });
  if (cfg.mode == SearchMode::Beam &&
      static_cast<int>(frontier.size()) > cfg.beam_width) {
    frontier.resize(static_cast<std::size_t>(cfg.beam_width));
  }
  return frontier;
}

ReasoningTree InferenceEngine::run(const std::string& query,
                                   const kg::EntityRef& topic) const {
  if (!graph_.contains(topic.id)) {
    throw UnknownTopicError("unknown topic entity: " + topic.id);
  }
  ReasoningTree tree(graph_.entity(topic.id));
  try {
    GenerationContext root_ctx{query, tree.node(tree.root()).path, std::nullopt,
                               1};
    if (group_wants_answer(root_ctx)) {
      make_answer_leaf(tree, tree.root(), {tree.root()}, root_ctx, false);
      return tree;
    }
    std::vector<int> frontier{tree.root()};
    for (int d = 1; d <= config_.max_depth && !frontier.empty(); ++d) {
      std::vector<int> pending;
      for (int id : frontier) {
        const auto group = expand_node(tree, id, d, query);
        pending.insert(pending.end(), group.begin(), group.end());
      }
      frontier = beam_select(tree, std::move(pending), config_);
    }
  } catch (const TransportError& e) {
    tree.mark_failed(e.what());
  }
  return tree;
}

InferenceResult InferenceEngine::run_query(
    const std::string& query, const std::vector<std::string>& topic_ids) const {
  if (topic_ids.empty()) throw DomainError("no topic entities given");
  InferenceResult result;
  result.query = query;
  for (const auto& id : topic_ids) {
    result.trees.push_back(run(query, kg::EntityRef{id, ""}));
  }
  result.ranked = merge_rankings(result.trees, config_);
  return result;
}

std::vector<RankedAnswer> finalize_answers(const ReasoningTree& tree,
                                           const BeamConfig& cfg) {
  std::vector<RankedAnswer> out;
  for (int leaf_id : tree.answered_leaves()) {
    const TreeNode& leaf = tree.node(leaf_id);
    RankedAnswer ra;
    ra.answers = leaf.answer->answers;
    ra.final_score = tree.backtracked_score(leaf_id, cfg.score);
    ra.depth_forced = leaf.answer->depth_forced;
    ra.leaf_id = leaf_id;
    ra.leaf_key = leaf.sort_key();
    out.push_back(std::move(ra));
  }
  std::sort(out.begin(), out.end(), [](const RankedAnswer& a,
                                       const RankedAnswer& b) {
    if (a.final_score != b.final_score) return a.final_score > b.final_score;
    return a.leaf_key < b.leaf_key;
  });
  return out;
}

std::vector<RankedAnswer> merge_rankings(std::vector<ReasoningTree>& trees,
                                         const BeamConfig& cfg) {
  std::vector<RankedAnswer> all;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (auto& ra : finalize_answers(trees[i], cfg)) {
      ra.tree_index = static_cast<int>(i);
      all.push_back(std::move(ra));
    }
  }
  std::sort(all.begin(), all.end(), [](const RankedAnswer& a,
                                       const RankedAnswer& b) {
    if (a.final_score != b.final_score) return a.final_score > b.final_score;
    if (a.leaf_key != b.leaf_key) return a.leaf_key < b.leaf_key;
    return a.tree_index < b.tree_index;
  });
  return all;
}

}  // namespace kgr::engine
