#include "kgr/retrieval/retriever.hpp"

#include <algorithm>

#include "kgr/error.hpp"

namespace kgr::retrieval {

std::vector<RetrievalResult> retrieve_relations(
    const std::string& query, const kg::EntityRef& e,
    const std::vector<std::string>& hypotheses, const kg::KnowledgeGraph& g,
    int k, const SimilarityProvider& provider) {
  if (k < 1) throw DomainError("retrieve_relations: k must be >= 1");

  std::vector<RetrievalResult> results;
  for (const auto& rel : g.out_relations(e)) {
    const std::string name = rel.str();
    RetrievalResult r;
    r.candidate = rel;
    r.score = provider.similarity(name, query);
    r.provenance = Provenance::QueryMatch;
    for (const auto& h : hypotheses) {
      const double s = provider.similarity(name, h);
      if (s > r.score) {
        r.score = s;
        r.provenance = Provenance::HypothesisMatch;
      }
    }
    results.push_back(std::move(r));
  }

  std::sort(results.begin(), results.end(),
            [](const RetrievalResult& a, const RetrievalResult& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate < b.candidate;
            });
  if (static_cast<int>(results.size()) > k) results.resize(k);
  return results;
}

std::vector<kg::NodeValue> retrieve_entities(const kg::KnowledgeGraph& g,
                                             const kg::EntityRef& e,
                                             const kg::RelationRef& r) {
  return g.tail_entities(e, r);
}

}  // namespace kgr::retrieval
