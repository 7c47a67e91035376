#include "kgr/bench/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kgr/error.hpp"

namespace kgr::bench {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

bool answer_matches(const kg::NodeValue& predicted, const std::string& gold) {
  if (predicted.key() == gold) return true;
  if (predicted.is_entity() && predicted.entity().id == gold) return true;
  return lower(predicted.display()) == lower(gold);
}

int hit_at_1(const std::vector<kg::NodeValue>& predicted,
             const std::vector<std::string>& gold) {
  if (gold.empty()) throw DomainError("gold answer set is empty");
  for (const auto& p : predicted) {
    for (const auto& g : gold) {
      if (answer_matches(p, g)) return 1;
    }
  }
  return 0;
}

double f1(const std::vector<kg::NodeValue>& predicted,
          const std::vector<std::string>& gold) {
  if (gold.empty()) throw DomainError("gold answer set is empty");
  if (predicted.empty()) return 0.0;

  // Dedup both sides before set metrics.
  std::vector<kg::NodeValue> preds;
  std::set<std::string> seen;
  for (const auto& p : predicted) {
    if (seen.insert(p.key()).second) preds.push_back(p);
  }
  std::set<std::string> golds(gold.begin(), gold.end());

  std::size_t matched_preds = 0;
  for (const auto& p : preds) {
    for (const auto& g : golds) {
      if (answer_matches(p, g)) {
        ++matched_preds;
        break;
      }
    }
  }
  std::size_t matched_golds = 0;
  for (const auto& g : golds) {
    for (const auto& p : preds) {
      if (answer_matches(p, g)) {
        ++matched_golds;
        break;
      }
    }
  }
  const double precision =
      static_cast<double>(matched_preds) / static_cast<double>(preds.size());
  const double recall =
      static_cast<double>(matched_golds) / static_cast<double>(golds.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace kgr::bench
