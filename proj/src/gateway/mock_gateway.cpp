#include "kgr/gateway/mock_gateway.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgr/error.hpp"

namespace kgr::gateway {

using reflect::ReflectionToken;
using reflect::TokenDistribution;
using reflect::TokenFamily;

namespace {

TokenDistribution parse_distribution(const nlohmann::json& obj,
                                     TokenFamily want, const char* slot) {
  std::vector<std::pair<int, double>> entries;
  for (const auto& [surface, lp] : obj.items()) {
    auto tok = ReflectionToken::from_surface(surface);
    if (!tok) {
      throw DataError(std::string("mock script: unknown token surface '") +
                      surface + "' in slot " + slot);
    }
    if (tok->family != want) {
      throw DataError(std::string("mock script: token '") + surface +
                      "' does not belong in slot " + slot);
    }
    entries.emplace_back(tok->category, lp.get<double>());
  }
  try {
    return TokenDistribution(want, std::move(entries));
  } catch (const DomainError& e) {
    throw DataError(std::string("mock script: bad distribution in slot ") +
                    slot + ": " + e.what());
  }
}

std::optional<std::string> opt_string(const nlohmann::json& when,
                                      const char* field) {
  if (!when.contains(field)) return std::nullopt;
  return when[field].get<std::string>();
}

std::string render_path(const kg::ReasoningPath& path) { return path.key(); }

std::string join_answers(const std::vector<std::string>& answers) {
  std::string out;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i) out += ';';
    out += answers[i];
  }
  return out;
}

}  // namespace

MockGateway MockGateway::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mock script: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_string(ss.str());
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

MockGateway MockGateway::load_string(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("mock script: ") + e.what());
  }

  MockGateway mock;
  for (const auto& entry : doc.value("rules", nlohmann::json::array())) {
    Rule rule;
    const auto when = entry.value("when", nlohmann::json::object());
    rule.when.query = opt_string(when, "query");
    rule.when.path = opt_string(when, "path");
    rule.when.injected = opt_string(when, "injected");
    rule.when.candidate = opt_string(when, "candidate");
    if (when.contains("depth")) rule.when.depth = when["depth"].get<int>();

    const auto give = entry.value("give", nlohmann::json::object());
    if (give.contains("retrieval")) {
      rule.give.retrieval =
          parse_distribution(give["retrieval"], TokenFamily::Retrieval, "retrieval");
    }
    if (give.contains("relevance")) {
      // A rule's relevance distribution applies to the candidate it matched.
      rule.give.relevance[""] =
          parse_distribution(give["relevance"], TokenFamily::Relevance, "relevance");
    }
    if (give.contains("rationality")) {
      rule.give.rationality = parse_distribution(
          give["rationality"], TokenFamily::Rationality, "rationality");
    }
    if (give.contains("utility")) {
      rule.give.utility =
          parse_distribution(give["utility"], TokenFamily::Utility, "utility");
    }
    if (give.contains("hypotheses")) {
      rule.give.hypotheses = give["hypotheses"].get<std::vector<std::string>>();
    }
    if (give.contains("segment_logprobs")) {
      rule.give.segment_logprobs =
          give["segment_logprobs"].get<std::vector<double>>();
    }
    if (give.contains("text")) rule.give.text = give["text"].get<std::string>();
    if (give.contains("fail")) rule.fail = give["fail"].get<std::string>();
    rule.give.validate();
    mock.rules_.push_back(std::move(rule));
  }

  for (const auto& entry : doc.value("critic_rules", nlohmann::json::array())) {
    CriticRule rule{.when = {}, .token = {}, .explanation = {}, .fail = {}};
    const auto when = entry.value("when", nlohmann::json::object());
    rule.when.kind = opt_string(when, "kind");
    rule.when.query = opt_string(when, "query");
    rule.when.candidate = opt_string(when, "candidate");
    rule.when.path = opt_string(when, "path");
    rule.when.answers = opt_string(when, "answers");

    const auto give = entry.value("give", nlohmann::json::object());
    if (give.contains("fail")) {
      rule.fail = give["fail"].get<std::string>();
      rule.token = ReflectionToken{TokenFamily::Relevance, 0};
    } else {
      const std::string surface = give.at("category").get<std::string>();
      auto tok = ReflectionToken::from_surface(surface);
      if (!tok) {
        throw DataError("mock script: unknown critic category '" + surface + "'");
      }
      rule.token = *tok;
    }
    rule.explanation = give.value("explanation", "");
    mock.critic_rules_.push_back(std::move(rule));
  }
  return mock;
}

MockGateway::CallKey MockGateway::key_of(const GenerationContext& ctx,
                                         const std::string& candidate) {
  ctx.validate();
  CallKey key;
  key.query = ctx.query;
  key.path = render_path(ctx.path);
  key.injected = ctx.injected ? ctx.injected->joined() : "";
  key.candidate = candidate;
  key.depth = ctx.depth;
  return key;
}

const MockGateway::Rule* MockGateway::find(
    const CallKey& key, bool (*has_slot)(const GenerationStep&)) const {
  for (const auto& rule : rules_) {
    const auto& w = rule.when;
    if (w.query && *w.query != key.query) continue;
    if (w.path && *w.path != key.path) continue;
    if (w.injected && *w.injected != key.injected) continue;
    if (w.candidate && *w.candidate != key.candidate) continue;
    if (w.depth && *w.depth != key.depth) continue;
    if (rule.fail) return &rule;  // scripted outage hits any matching call
    if (has_slot(rule.give)) return &rule;
  }
  return nullptr;
}

const MockGateway::CriticRule* MockGateway::find_critic(
    const std::string& kind, const std::string& query,
    const std::string& candidate, const std::string& path,
    const std::string& answers) const {
  for (const auto& rule : critic_rules_) {
    const auto& w = rule.when;
    if (w.kind && *w.kind != kind) continue;
    if (w.query && *w.query != query) continue;
    if (w.candidate && *w.candidate != candidate) continue;
    if (w.path && *w.path != path) continue;
    if (w.answers && *w.answers != answers) continue;
    return &rule;
  }
  return nullptr;
}

reflect::TokenDistribution MockGateway::predict_retrieval(
    const GenerationContext& ctx) const {
  const auto* rule = find(key_of(ctx, ""), [](const GenerationStep& s) {
    return s.retrieval.has_value();
  });
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    return *rule->give.retrieval;
  }
  return TokenDistribution::uniform(TokenFamily::Retrieval);
}

std::vector<RelationHypothesis> MockGateway::hypo_relations(
    const GenerationContext& ctx, int n) const {
  require_hypo_count(n);
  const auto* rule = find(key_of(ctx, ""), [](const GenerationStep& s) {
    return !s.hypotheses.empty();
  });
  std::vector<RelationHypothesis> out;
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    for (const auto& h : rule->give.hypotheses) {
      if (static_cast<int>(out.size()) == n) break;
      RelationHypothesis hypo{h, ctx.depth};
      hypo.validate();
      out.push_back(std::move(hypo));
    }
  }
  return out;
}

reflect::TokenDistribution MockGateway::predict_relevance(
    const GenerationContext& ctx, const std::string& candidate) const {
  const auto* rule = find(key_of(ctx, candidate), [](const GenerationStep& s) {
    return !s.relevance.empty();
  });
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    return rule->give.relevance.begin()->second;
  }
  return TokenDistribution::uniform(TokenFamily::Relevance);
}

reflect::TokenDistribution MockGateway::predict_rationality(
    const GenerationContext& ctx) const {
  require_rationality_context(ctx);
  const auto* rule = find(key_of(ctx, ""), [](const GenerationStep& s) {
    return s.rationality.has_value();
  });
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    return *rule->give.rationality;
  }
  return TokenDistribution::uniform(TokenFamily::Rationality);
}

reflect::TokenDistribution MockGateway::predict_utility(
    const GenerationContext& ctx) const {
  const auto* rule = find(key_of(ctx, ""), [](const GenerationStep& s) {
    return s.utility.has_value();
  });
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    return *rule->give.utility;
  }
  return TokenDistribution::uniform(TokenFamily::Utility);
}

std::vector<double> MockGateway::segment_logprobs(
    const GenerationContext& ctx, const std::string& candidate) const {
  const auto* rule = find(key_of(ctx, candidate), [](const GenerationStep& s) {
    return !s.segment_logprobs.empty();
  });
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    return rule->give.segment_logprobs;
  }
  return {};
}

std::vector<CriticVerdict> MockGateway::critic_relevance(
    const std::string& query, const std::string& history,
    const std::vector<std::string>& candidates, CriticKind kind) const {
  require_candidates(candidates);
  const std::string kind_name =
      kind == CriticKind::Relation ? "relation" : "entity";
  std::vector<CriticVerdict> out;
  out.reserve(candidates.size());
  for (const auto& candidate : candidates) {
    const auto* rule =
        find_critic(kind_name, query, candidate, history, "");
    if (rule) {
      if (rule->fail) throw TransportError(*rule->fail);
      if (rule->token.family != TokenFamily::Relevance) {
        throw DataError("mock script: critic rule for kind '" + kind_name +
                        "' must give a Relevance category");
      }
      out.push_back(CriticVerdict{rule->token, rule->explanation});
      continue;
    }
    const int category = candidate == query ? reflect::cat::kFullyRelevant
                                            : reflect::cat::kPartiallyRelevant;
    out.push_back(CriticVerdict{
        ReflectionToken{TokenFamily::Relevance, category}, ""});
  }
  return out;
}

CriticVerdict MockGateway::critic_rationality(
    const std::string& query, const kg::ReasoningPath& path) const {
  require_path_with_hops(path);
  const auto* rule =
      find_critic("rationality", query, "", render_path(path), "");
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    if (rule->token.family != TokenFamily::Rationality) {
      throw DataError("mock script: rationality critic rule must give a "
                      "Rationality category");
    }
    return CriticVerdict{rule->token, rule->explanation};
  }
  return CriticVerdict{
      ReflectionToken{TokenFamily::Rationality,
                      reflect::cat::kPartiallyReasonable},
      ""};
}

CriticVerdict MockGateway::critic_utility(
    const std::string& query, const std::vector<std::string>& answers) const {
  const auto* rule =
      find_critic("utility", query, "", "", join_answers(answers));
  if (rule) {
    if (rule->fail) throw TransportError(*rule->fail);
    if (rule->token.family != TokenFamily::Utility) {
      throw DataError("mock script: utility critic rule must give a Utility "
                      "category");
    }
    return CriticVerdict{rule->token, rule->explanation};
  }
  const int level = answers.empty() ? 1 : 3;
  return CriticVerdict{ReflectionToken{TokenFamily::Utility, level}, ""};
}

}  // namespace kgr::gateway
