#pragma once

#include <string>
#include <vector>

#include "kgr/gateway/gateway.hpp"

namespace kgr::gateway {

// Completion-endpoint client. One POST per prediction:
//
//   POST <path>  {"prompt": "...", "max_tokens": N, "logprobs": K}
//   -> {"text": "...", "token_logprobs": [...],
//       "top_logprobs": [{"<token>": lp, ...}, ...]}
//
// Reflection tokens occupy single vocabulary slots, so family distributions
// come straight out of the per-position alternatives. Failures retry with
// full-jitter backoff and then surface as TransportError.
struct HttpGatewayConfig {
  std::string host;          // e.g. "127.0.0.1"
  int port = 80;
  std::string path = "/v1/completions";
  std::string api_key;       // sent as "Authorization: Bearer <key>" when set
  int max_tokens = 256;
  int top_logprobs = 16;
  int retries = 2;           // attempts = retries + 1
  int backoff_base_ms = 50;  // full jitter: uniform(0, base * 2^attempt)
  int timeout_sec = 30;
};

class HttpGateway final : public ModelGateway {
 public:
  explicit HttpGateway(HttpGatewayConfig config);

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
  struct Completion {
    std::string text;
    std::vector<double> token_logprobs;
    // Per position: alternative token -> log-probability.
    std::vector<std::vector<std::pair<std::string, double>>> top_logprobs;
  };

  Completion complete(const std::string& prompt) const;
  Completion complete_once(const std::string& prompt) const;
  reflect::TokenDistribution extract_family(
      const Completion& c, reflect::TokenFamily family) const;
  CriticVerdict first_token_verdict(const std::string& text,
                                    reflect::TokenFamily family) const;

  HttpGatewayConfig config_;
};

}  // namespace kgr::gateway
