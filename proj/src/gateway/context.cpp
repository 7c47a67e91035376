#include "kgr/gateway/context.hpp"

#include <cctype>
#include <cmath>

#include "kgr/error.hpp"

namespace kgr::gateway {

std::string InjectedKnowledge::joined() const {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += items[i];
  }
  return out;
}

std::string InjectedKnowledge::render() const {
  return "{<paragraph>" + joined() + "</paragraph>}";
}

void GenerationContext::validate() const {
  if (depth != path.depth() + 1) {
    throw DomainError("context depth " + std::to_string(depth) +
                      " does not match path depth " +
                      std::to_string(path.depth()) + " + 1");
  }
}

void RelationHypothesis::validate() const {
  if (surface.empty()) throw DomainError("relation hypothesis is empty");
  for (unsigned char c : surface) {
    if (std::isspace(c)) {
      throw DomainError("relation hypothesis contains whitespace: '" +
                        surface + "'");
    }
  }
}

void GenerationStep::validate() const {
  using reflect::TokenFamily;
  if (retrieval && retrieval->family() != TokenFamily::Retrieval) {
    throw DomainError("retrieval slot holds a non-Retrieval distribution");
  }
  for (const auto& [_, d] : relevance) {
    if (d.family() != TokenFamily::Relevance) {
      throw DomainError("relevance slot holds a non-Relevance distribution");
    }
  }
  if (rationality && rationality->family() != TokenFamily::Rationality) {
    throw DomainError("rationality slot holds a non-Rationality distribution");
  }
  if (utility && utility->family() != TokenFamily::Utility) {
    throw DomainError("utility slot holds a non-Utility distribution");
  }
  for (double lp : segment_logprobs) {
    if (!std::isfinite(lp)) {
      throw DomainError("non-finite segment log-probability");
    }
  }
}

}  // namespace kgr::gateway
