#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgr/gateway/gateway.hpp"

namespace kgr::gateway {

// Declarative scripted gateway. Rules load from a JSON fixture:
//
//   {
//     "schema": "kgr.mock.v1",
//     "rules": [
//       {"when": {"query": "...", "path": "...", "injected": "...",
//                 "candidate": "...", "depth": 2},
//        "give": {"retrieval": {"[Relation Retrieval]": -0.1, ...},
//                 "relevance": {...}, "rationality": {...}, "utility": {...},
//                 "hypotheses": ["..."], "segment_logprobs": [-0.2],
//                 "text": "...", "fail": "scripted outage"}}
//     ],
//     "critic_rules": [
//       {"when": {"kind": "relation", "query": "...", "candidate": "...",
//                 "path": "...", "answers": "..."},
//        "give": {"category": "[Fully Relevant]", "explanation": "..."}}
//     ]
//   }
//
// Matching is content-keyed: every field present in "when" must equal the
// call's value (path and injected compare against their canonical serialized
// forms), absent fields are wildcards, and the first matching rule that
// stocks the requested slot wins. Unmatched calls fall back to fixed
// defaults: uniform distributions, no hypotheses, no segment log-probs; the
// default critic answers FullyRelevant when the candidate equals the query,
// PartiallyRelevant/PartiallyReasonable otherwise, and Utility:1 for an
// empty answer list else Utility:3. A rule with "fail" throws
// TransportError, for exercising error paths.
class MockGateway final : public ModelGateway {
 public:
  MockGateway() = default;

  static MockGateway load_file(const std::string& path);
  static MockGateway load_string(const std::string& json_text);

  reflect::TokenDistribution predict_retrieval(
      const GenerationContext& ctx) const override;
  std::vector<RelationHypothesis> hypo_relations(const GenerationContext& ctx,
                                                 int n) const override;
  reflect::TokenDistribution predict_relevance(
      const GenerationContext& ctx, const std::string& candidate) const override;
  reflect::TokenDistribution predict_rationality(
      const GenerationContext& ctx) const override;
  reflect::TokenDistribution predict_utility(
      const GenerationContext& ctx) const override;
  std::vector<double> segment_logprobs(const GenerationContext& ctx,
                                       const std::string& candidate) const override;

  std::vector<CriticVerdict> critic_relevance(
      const std::string& query, const std::string& history,
      const std::vector<std::string>& candidates,
      CriticKind kind) const override;
  CriticVerdict critic_rationality(const std::string& query,
                                   const kg::ReasoningPath& path) const override;
  CriticVerdict critic_utility(
      const std::string& query,
      const std::vector<std::string>& answers) const override;

 private:
  struct Match {
    std::optional<std::string> query;
    std::optional<std::string> path;
    std::optional<std::string> injected;
    std::optional<std::string> candidate;
    std::optional<int> depth;
  };
  struct Rule {
    Match when;
    GenerationStep give;
    std::optional<std::string> fail;
  };
  struct CriticMatch {
    std::optional<std::string> kind;
    std::optional<std::string> query;
    std::optional<std::string> candidate;
    std::optional<std::string> path;
    std::optional<std::string> answers;
  };
  struct CriticRule {
    CriticMatch when;
    reflect::ReflectionToken token;
    std::string explanation;
    std::optional<std::string> fail;
  };

  struct CallKey {
    std::string query;
    std::string path;
    std::string injected;
    std::string candidate;
    int depth = 0;
  };

  static CallKey key_of(const GenerationContext& ctx,
                        const std::string& candidate);
  const Rule* find(const CallKey& key,
                   bool (*has_slot)(const GenerationStep&)) const;
  const CriticRule* find_critic(const std::string& kind,
                                const std::string& query,
                                const std::string& candidate,
                                const std::string& path,
                                const std::string& answers) const;

  std::vector<Rule> rules_;
  std::vector<CriticRule> critic_rules_;
};

}  // namespace kgr::gateway
