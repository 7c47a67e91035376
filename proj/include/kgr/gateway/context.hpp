#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgr/kg/types.hpp"
#include "kgr/reflect/scoring.hpp"

namespace kgr::gateway {

// Knowledge handed to the model alongside the walk: either candidate
// relations or full triples, rendered inside paragraph delimiters.
struct InjectedKnowledge {
  enum class Kind { Relations, Triples };
  Kind kind = Kind::Relations;
  std::vector<std::string> items;

  std::string joined() const;  // ";"-joined items (mock match key)
  std::string render() const;  // "{<paragraph>...</paragraph>}"
};

// Everything the generator sees when predicting one step.
struct GenerationContext {
  std::string query;
  kg::ReasoningPath path;  // completed hops only
  std::optional<InjectedKnowledge> injected;
  int depth = 1;  // hop being worked on; must equal path.depth() + 1

  void validate() const;  // throws DomainError on a depth mismatch
};

// One-step-ahead relation guess in the graph's naming style.
struct RelationHypothesis {
  std::string surface;
  int origin_depth = 1;

  void validate() const;  // non-empty, whitespace-free
};

// A full scripted/observed model step; slots line up with the prediction
// calls, so one mock rule can stock several of them at once.
struct GenerationStep {
  std::string text;
  std::optional<reflect::TokenDistribution> retrieval;
  std::map<std::string, reflect::TokenDistribution> relevance;  // by candidate
  std::optional<reflect::TokenDistribution> rationality;
  std::optional<reflect::TokenDistribution> utility;
  std::vector<std::string> hypotheses;
  std::vector<double> segment_logprobs;

  void validate() const;  // families in their right slots, finite log-probs
};

enum class CriticKind { Relation, Entity };

struct CriticVerdict {
  reflect::ReflectionToken token;
  std::string explanation;
};

}  // namespace kgr::gateway
