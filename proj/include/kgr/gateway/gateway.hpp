#pragma once

#include <string>
#include <vector>

#include "kgr/gateway/context.hpp"
#include "kgr/kg/types.hpp"
#include "kgr/reflect/scoring.hpp"

namespace kgr::gateway {

// Generator + critic behind one interface. Implementations must be
// content-keyed and side-effect free from the caller's point of view:
// identical inputs give identical outputs, instances are shareable across
// worker threads, and backend failures surface as TransportError rather
// than degraded distributions.
class ModelGateway {
 public:
  virtual ~ModelGateway() = default;

  virtual reflect::TokenDistribution predict_retrieval(
      const GenerationContext& ctx) const = 0;

  // Up to n one-step-ahead relation guesses; n >= 1.
  virtual std::vector<RelationHypothesis> hypo_relations(
      const GenerationContext& ctx, int n) const = 0;

  virtual reflect::TokenDistribution predict_relevance(
      const GenerationContext& ctx, const std::string& candidate) const = 0;

  // Requires at least one hop of context (completed or injected).
  virtual reflect::TokenDistribution predict_rationality(
      const GenerationContext& ctx) const = 0;

  virtual reflect::TokenDistribution predict_utility(
      const GenerationContext& ctx) const = 0;

  // Token log-probabilities of the generated segment for a candidate
  // extension; empty when the backend does not report them.
  virtual std::vector<double> segment_logprobs(
      const GenerationContext& ctx, const std::string& candidate) const = 0;

  // One verdict per candidate, order preserving; candidates must be
  // non-empty.
  virtual std::vector<CriticVerdict> critic_relevance(
      const std::string& query, const std::string& history,
      const std::vector<std::string>& candidates, CriticKind kind) const = 0;

  virtual CriticVerdict critic_rationality(
      const std::string& query, const kg::ReasoningPath& path) const = 0;

  virtual CriticVerdict critic_utility(
      const std::string& query,
      const std::vector<std::string>& answers) const = 0;
};

// Shared precondition checks.
void require_hypo_count(int n);
void require_rationality_context(const GenerationContext& ctx);
void require_candidates(const std::vector<std::string>& candidates);
void require_path_with_hops(const kg::ReasoningPath& path);

}  // namespace kgr::gateway
