#pragma once

#include <string>
#include <vector>

#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/similarity.hpp"

namespace kgr::retrieval {

enum class Provenance { QueryMatch, HypothesisMatch };

struct RetrievalResult {
  kg::RelationRef candidate;
  double score = 0.0;
  Provenance provenance = Provenance::QueryMatch;
};

// Top-K outgoing relations of e, each scored
//   max(sim(candidate, query), max over hypotheses of sim(candidate, hypo))
// so one exact hypothesis match dominates a lexically distant query.
// Descending by score, ties broken lexicographically; an unknown entity
// yields an empty result. Throws DomainError when k < 1.
std::vector<RetrievalResult> retrieve_relations(
    const std::string& query, const kg::EntityRef& e,
    const std::vector<std::string>& hypotheses, const kg::KnowledgeGraph& g,
    int k, const SimilarityProvider& provider);

// Tail fetch with the graph's canonical ordering.
std::vector<kg::NodeValue> retrieve_entities(const kg::KnowledgeGraph& g,
                                             const kg::EntityRef& e,
                                             const kg::RelationRef& r);

}  // namespace kgr::retrieval
