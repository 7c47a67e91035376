#include "kgr/reflect/tokens.hpp"

#include "kgr/error.hpp"

namespace kgr::reflect {

namespace {

const std::vector<int> kThree{0, 1, 2};
const std::vector<int> kLevels{1, 2, 3, 4, 5};

}  // namespace

int family_cardinality(TokenFamily family) {
  return family == TokenFamily::Utility ? 5 : 3;
}

bool category_valid(TokenFamily family, int category) {
  if (family == TokenFamily::Utility) return category >= 1 && category <= 5;
  return category >= 0 && category <= 2;
}

const std::vector<int>& family_categories(TokenFamily family) {
  return family == TokenFamily::Utility ? kLevels : kThree;
}

std::string family_name(TokenFamily family) {
  switch (family) {
    case TokenFamily::Retrieval: return "Retrieval";
    case TokenFamily::Relevance: return "Relevance";
    case TokenFamily::Rationality: return "Rationality";
    case TokenFamily::Utility: return "Utility";
  }
  return "?";
}

std::string ReflectionToken::surface() const {
  if (!category_valid(family, category)) {
    throw DomainError("invalid category " + std::to_string(category) +
                      " for family " + family_name(family));
  }
  switch (family) {
    case TokenFamily::Retrieval:
      switch (category) {
        case cat::kRelationRetrieval: return "[Relation Retrieval]";
        case cat::kEntityRetrieval: return "[Entity Retrieval]";
        default: return "[No Retrieval]";
      }
    case TokenFamily::Relevance:
      switch (category) {
        case cat::kFullyRelevant: return "[Fully Relevant]";
        case cat::kPartiallyRelevant: return "[Partially Relevant]";
        default: return "[Unrelevant]";
      }
    case TokenFamily::Rationality:
      switch (category) {
        case cat::kFullyReasonable: return "[Fully Reasonable]";
        case cat::kPartiallyReasonable: return "[Partially Reasonable]";
        default: return "[Unreasonable]";
      }
    case TokenFamily::Utility:
      return "[Utility:" + std::to_string(category) + "]";
  }
  return "?";
}

std::optional<ReflectionToken> ReflectionToken::from_surface(
    const std::string& s) {
  using T = ReflectionToken;
  if (s == "[Relation Retrieval]" || s == "[Retrieve Relation]")
    return T{TokenFamily::Retrieval, cat::kRelationRetrieval};
  if (s == "[Entity Retrieval]" || s == "[Retrieve Entity]")
    return T{TokenFamily::Retrieval, cat::kEntityRetrieval};
  if (s == "[No Retrieval]") return T{TokenFamily::Retrieval, cat::kNoRetrieval};

  if (s == "[Fully Relevant]") return T{TokenFamily::Relevance, cat::kFullyRelevant};
  if (s == "[Partially Relevant]")
    return T{TokenFamily::Relevance, cat::kPartiallyRelevant};
  if (s == "[Unrelevant]") return T{TokenFamily::Relevance, cat::kUnrelevant};

  if (s == "[Fully Reasonable]")
    return T{TokenFamily::Rationality, cat::kFullyReasonable};
  if (s == "[Partially Reasonable]")
    return T{TokenFamily::Rationality, cat::kPartiallyReasonable};
  if (s == "[Unreasonable]")
    return T{TokenFamily::Rationality, cat::kUnreasonable};

  if (s.rfind("[Utility:", 0) == 0 && s.size() == 11 && s.back() == ']' &&
      s[9] >= '1' && s[9] <= '5') {
    return T{TokenFamily::Utility, s[9] - '0'};
  }
  return std::nullopt;
}

}  // namespace kgr::reflect
