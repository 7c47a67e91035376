#include "kgr/reflect/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgr/error.hpp"

namespace kgr::reflect {

void ScoreConfig::validate() const {
  if (k1 < 0.0 || k2 < 0.0) throw DomainError("k1 and k2 must be >= 0");
  if (partial_weight < 0.0 || partial_weight > 1.0) {
    throw DomainError("partial_weight must be in [0, 1]");
  }
}

TokenDistribution::TokenDistribution(
    TokenFamily family, std::vector<std::pair<int, double>> entries)
    : family_(family), entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("token distribution is empty");
  if (static_cast<int>(entries_.size()) > family_cardinality(family_)) {
    throw DomainError("token distribution has more entries than categories");
  }
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!category_valid(family_, entries_[i].first)) {
      throw DomainError("invalid category " + std::to_string(entries_[i].first) +
                        " for family " + family_name(family_));
    }
    if (i > 0 && entries_[i].first == entries_[i - 1].first) {
      throw DomainError("duplicate category in token distribution");
    }
    if (!std::isfinite(entries_[i].second)) {
      throw DomainError("non-finite log-probability in token distribution");
    }
  }
}

TokenDistribution TokenDistribution::single(TokenFamily family, int category,
                                            double logp) {
  return TokenDistribution(family, {{category, logp}});
}

TokenDistribution TokenDistribution::uniform(TokenFamily family) {
  std::vector<std::pair<int, double>> entries;
  for (int c : family_categories(family)) entries.emplace_back(c, 0.0);
  return TokenDistribution(family, std::move(entries));
}

bool TokenDistribution::has(int category) const {
  for (const auto& [c, _] : entries_) {
    if (c == category) return true;
  }
  return false;
}

double TokenDistribution::logp(int category) const {
  for (const auto& [c, lp] : entries_) {
    if (c == category) return lp;
  }
  throw DomainError("category " + std::to_string(category) +
                    " absent from distribution");
}

int TokenDistribution::argmax() const {
  int best = entries_.front().first;
  double best_lp = entries_.front().second;
  for (const auto& [c, lp] : entries_) {
    if (lp > best_lp) {  // strict: ties keep the canonically first category
      best = c;
      best_lp = lp;
    }
  }
  return best;
}

double token_score(const TokenDistribution& d, int category) {
  const double lp = d.logp(category);  // throws when absent
  double max_lp = -std::numeric_limits<double>::infinity();
  for (const auto& [_, v] : d.entries()) max_lp = std::max(max_lp, v);
  double denom = 0.0;
  for (const auto& [_, v] : d.entries()) denom += std::exp(v - max_lp);
  return std::exp(lp - max_lp) / denom;
}

namespace {

double graded_score(const TokenDistribution& d, TokenFamily want, int full,
                    int partial, double partial_weight) {
  if (d.family() != want) {
    throw DomainError("expected a " + family_name(want) + " distribution, got " +
                      family_name(d.family()));
  }
  double s = 0.0;
  if (d.has(full)) s += token_score(d, full);
  if (d.has(partial)) s += partial_weight * token_score(d, partial);
  return s;
}

}  // namespace

double relevance_score(const TokenDistribution& d, double partial_weight) {
  return graded_score(d, TokenFamily::Relevance, cat::kFullyRelevant,
                      cat::kPartiallyRelevant, partial_weight);
}

double rationality_score(const TokenDistribution& d, double partial_weight) {
  return graded_score(d, TokenFamily::Rationality, cat::kFullyReasonable,
                      cat::kPartiallyReasonable, partial_weight);
}

double utility_score(const TokenDistribution& d, UtilityMode mode) {
  if (d.family() != TokenFamily::Utility) {
    throw DomainError("expected a Utility distribution, got " +
                      family_name(d.family()));
  }
  double s = 0.0;
  for (int level = 1; level <= 5; ++level) {
    if (!d.has(level)) continue;
    const double p = token_score(d, level);
    s += mode == UtilityMode::AsWritten ? p : level * p;
  }
  return mode == UtilityMode::AsWritten ? s : s / 5.0;
}

double node_score(double seq, double rel, double rat, double uti,
                  const ScoreConfig& cfg) {
  return seq + cfg.k1 * rel * rat + cfg.k2 * uti;
}

double path_final_score(std::span<const double> node_totals,
                        PathAggregate agg) {
  if (node_totals.empty()) throw DomainError("empty score sequence");
  switch (agg) {
    case PathAggregate::Sum: {
      double s = 0.0;
      for (double v : node_totals) s += v;
      return s;
    }
    case PathAggregate::Mean: {
      double s = 0.0;
      for (double v : node_totals) s += v;
      return s / static_cast<double>(node_totals.size());
    }
    case PathAggregate::Product: {
      double s = 1.0;
      for (double v : node_totals) s *= v;
      return s;
    }
  }
  throw DomainError("unknown path aggregate");
}

namespace {

// Softmax sums drift past the bounds by an ulp or two; anything bigger is a
// caller bug.
double clamp_graded(double v) {
  constexpr double kSlack = 1e-9;
  if (v < -kSlack || v > 1.0 + kSlack) {
    throw DomainError("graded node-score component outside [0, 1]");
  }
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace

NodeScores make_node_scores(double seq, double rel, double rat, double uti,
                            const ScoreConfig& cfg) {
  NodeScores s;
  s.seq = seq;
  s.rel = clamp_graded(rel);
  s.rat = clamp_graded(rat);
  s.uti = clamp_graded(uti);
  s.total = node_score(seq, s.rel, s.rat, s.uti, cfg);
  return s;
}

}  // namespace kgr::reflect
