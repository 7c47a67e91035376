#include "kgr/gateway/http_gateway.hpp"

#include <cctype>
#include <chrono>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "kgr/error.hpp"
#include "kgr/gateway/prompts.hpp"

namespace kgr::gateway {

using reflect::ReflectionToken;
using reflect::TokenDistribution;
using reflect::TokenFamily;

namespace {

// Jitter only spreads retry timing; results never depend on it.
int jitter_ms(int base_ms, int attempt) {
  thread_local std::mt19937 rng{std::random_device{}()};
  const int cap = base_ms * (1 << attempt);
  if (cap <= 0) return 0;
  return std::uniform_int_distribution<int>(0, cap)(rng);
}

std::vector<ReflectionToken> tokens_in_text(const std::string& text,
                                            TokenFamily family) {
  std::vector<ReflectionToken> out;
  std::size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string::npos) {
    const std::size_t end = text.find(']', pos);
    if (end == std::string::npos) break;
    auto tok = ReflectionToken::from_surface(text.substr(pos, end - pos + 1));
    if (tok && tok->family == family) out.push_back(*tok);
    pos = end + 1;
  }
  return out;
}

}  // namespace

HttpGateway::HttpGateway(HttpGatewayConfig config)
    : config_(std::move(config)) {
  if (config_.host.empty()) throw ConfigError("model endpoint host is empty");
  if (config_.retries < 0) throw ConfigError("retries must be >= 0");
}

HttpGateway::Completion HttpGateway::complete_once(
    const std::string& prompt) const {
  httplib::Client client(config_.host, config_.port);
  client.set_connection_timeout(config_.timeout_sec);
  client.set_read_timeout(config_.timeout_sec);

  nlohmann::json body{{"prompt", prompt},
                      {"max_tokens", config_.max_tokens},
                      {"logprobs", config_.top_logprobs}};
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("completion endpoint unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("completion endpoint returned status " +
                         std::to_string(res->status));
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") +
                         e.what());
  }
  Completion c;
  try {
    c.text = doc.value("text", "");
    if (doc.contains("token_logprobs")) {
      c.token_logprobs = doc["token_logprobs"].get<std::vector<double>>();
    }
    for (const auto& position : doc.value("top_logprobs", nlohmann::json::array())) {
      std::vector<std::pair<std::string, double>> alts;
      for (const auto& [token, lp] : position.items()) {
        alts.emplace_back(token, lp.get<double>());
      }
      c.top_logprobs.push_back(std::move(alts));
    }
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") +
                         e.what());
  }
  return c;
}

HttpGateway::Completion HttpGateway::complete(const std::string& prompt) const {
  for (int attempt = 0;; ++attempt) {
    try {
      return complete_once(prompt);
    } catch (const TransportError&) {
      if (attempt >= config_.retries) throw;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(jitter_ms(config_.backoff_base_ms, attempt)));
    }
  }
}

TokenDistribution HttpGateway::extract_family(const Completion& c,
                                              TokenFamily family) const {
  for (const auto& position : c.top_logprobs) {
    std::vector<std::pair<int, double>> entries;
    for (const auto& [token, lp] : position) {
      auto tok = ReflectionToken::from_surface(token);
      if (tok && tok->family == family) entries.emplace_back(tok->category, lp);
    }
    if (!entries.empty()) return TokenDistribution(family, std::move(entries));
  }
  throw TransportError("completion carried no " +
                       reflect::family_name(family) + " token alternatives");
}

TokenDistribution HttpGateway::predict_retrieval(
    const GenerationContext& ctx) const {
  ctx.validate();
  return extract_family(complete(prompts::generation_prompt(ctx)),
                        TokenFamily::Retrieval);
}

std::vector<RelationHypothesis> HttpGateway::hypo_relations(
    const GenerationContext& ctx, int n) const {
  require_hypo_count(n);
  ctx.validate();
  const auto c =
      complete(prompts::generation_prompt(ctx) + "@[Retrieve Relation]@");
  std::vector<RelationHypothesis> out;
  // Continuation text up to the next marker holds ';'-joined guesses.
  std::string text = c.text.substr(0, c.text.find('@'));
  text = text.substr(0, text.find("{<paragraph>"));
  std::size_t start = 0;
  while (start <= text.size() && static_cast<int>(out.size()) < n) {
    std::size_t sep = text.find(';', start);
    if (sep == std::string::npos) sep = text.size();
    std::string item = text.substr(start, sep - start);
    start = sep + 1;
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.erase(item.begin());
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.pop_back();
    if (item.empty()) continue;
    RelationHypothesis hypo{item, ctx.depth};
    try {
      hypo.validate();
    } catch (const DomainError&) {
      continue;  // skip malformed guesses rather than failing the step
    }
    out.push_back(std::move(hypo));
  }
  return out;
}

TokenDistribution HttpGateway::predict_relevance(
    const GenerationContext& ctx, const std::string& candidate) const {
  ctx.validate();
  return extract_family(
      complete(prompts::generation_prompt(ctx) + candidate),
      TokenFamily::Relevance);
}

TokenDistribution HttpGateway::predict_rationality(
    const GenerationContext& ctx) const {
  require_rationality_context(ctx);
  ctx.validate();
  return extract_family(complete(prompts::generation_prompt(ctx) + "=["),
                        TokenFamily::Rationality);
}

TokenDistribution HttpGateway::predict_utility(
    const GenerationContext& ctx) const {
  ctx.validate();
  return extract_family(
      complete(prompts::generation_prompt(ctx) + "@[No Retrieval]@"),
      TokenFamily::Utility);
}

std::vector<double> HttpGateway::segment_logprobs(
    const GenerationContext& ctx, const std::string& candidate) const {
  ctx.validate();
  return complete(prompts::generation_prompt(ctx) + candidate).token_logprobs;
}

CriticVerdict HttpGateway::first_token_verdict(const std::string& text,
                                               TokenFamily family) const {
  const auto tokens = tokens_in_text(text, family);
  if (tokens.empty()) {
    throw TransportError("critic response carried no " +
                         reflect::family_name(family) + " token");
  }
  return CriticVerdict{tokens.front(), text};
}

std::vector<CriticVerdict> HttpGateway::critic_relevance(
    const std::string& query, const std::string& history,
    const std::vector<std::string>& candidates, CriticKind kind) const {
  require_candidates(candidates);
  const auto c = complete(
      prompts::critic_relevance_prompt(query, history, candidates, kind));
  const auto tokens = tokens_in_text(c.text, TokenFamily::Relevance);
  if (tokens.size() != candidates.size()) {
    throw TransportError("critic returned " + std::to_string(tokens.size()) +
                         " relevance marks for " +
                         std::to_string(candidates.size()) + " candidates");
  }
  std::vector<CriticVerdict> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(CriticVerdict{tok, c.text});
  return out;
}

CriticVerdict HttpGateway::critic_rationality(
    const std::string& query, const kg::ReasoningPath& path) const {
  require_path_with_hops(path);
  const auto c = complete(prompts::critic_rationality_prompt(query, path));
  return first_token_verdict(c.text, TokenFamily::Rationality);
}

CriticVerdict HttpGateway::critic_utility(
    const std::string& query, const std::vector<std::string>& answers) const {
  const auto c = complete(prompts::critic_utility_prompt(query, answers));
  return first_token_verdict(c.text, TokenFamily::Utility);
}

}  // namespace kgr::gateway
