#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kgr/reflect/tokens.hpp"

namespace kgr::reflect {

enum class UtilityMode { AsWritten, ExpectedValue };
enum class PathAggregate { Sum, Mean, Product };

struct ScoreConfig {
  double k1 = 1.0;
  double k2 = 0.5;
  double partial_weight = 0.5;
  UtilityMode utility_mode = UtilityMode::AsWritten;
  PathAggregate path_aggregate = PathAggregate::Sum;

  void validate() const;  // throws DomainError on out-of-range fields
};

// Log-probabilities over the categories a model actually emitted for one
// token family. Entries are sorted by category; softmax normalizes over
// these present entries only.
class TokenDistribution {
 public:
  TokenDistribution() = default;
  TokenDistribution(TokenFamily family,
                    std::vector<std::pair<int, double>> entries);

  static TokenDistribution single(TokenFamily family, int category,
                                  double logp = 0.0);
  static TokenDistribution uniform(TokenFamily family);

  TokenFamily family() const { return family_; }
  const std::vector<std::pair<int, double>>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool has(int category) const;
  double logp(int category) const;  // throws DomainError when absent

  // Highest-probability category; ties go to the canonically first one.
  int argmax() const;

 private:
  TokenFamily family_ = TokenFamily::Retrieval;
  std::vector<std::pair<int, double>> entries_;
};

// Softmax probability of one category over the distribution's entries.
double token_score(const TokenDistribution& d, int category);

// score(FullyRelevant) + partial_weight * score(PartiallyRelevant);
// an absent category contributes zero.
double relevance_score(const TokenDistribution& d, double partial_weight = 0.5);

double rationality_score(const TokenDistribution& d,
                         double partial_weight = 0.5);

// AsWritten sums softmax mass over the present utility levels (identically 1
// for any non-empty distribution); ExpectedValue is sum(level * p) / 5.
double utility_score(const TokenDistribution& d,
                     UtilityMode mode = UtilityMode::AsWritten);

// seq + k1 * rel * rat + k2 * uti.
double node_score(double seq, double rel, double rat, double uti,
                  const ScoreConfig& cfg);

// Backtracked leaf score over the per-depth totals of a root-to-leaf path.
double path_final_score(std::span<const double> node_totals,
                        PathAggregate agg = PathAggregate::Sum);

struct NodeScores {
  double seq = 0.0;
  double rel = 0.0;
  double rat = 0.0;
  double uti = 0.0;
  double total = 0.0;
};

NodeScores make_node_scores(double seq, double rel, double rat, double uti,
                            const ScoreConfig& cfg);

}  // namespace kgr::reflect
