#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kgr::reflect {

enum class TokenFamily { Retrieval, Relevance, Rationality, Utility };

// Category ids. The three 3-way families use 0..2 in canonical order;
// Utility uses the level itself, 1..5.
namespace cat {
inline constexpr int kRelationRetrieval = 0;
inline constexpr int kEntityRetrieval = 1;
inline constexpr int kNoRetrieval = 2;

inline constexpr int kFullyRelevant = 0;
inline constexpr int kPartiallyRelevant = 1;
inline constexpr int kUnrelevant = 2;

inline constexpr int kFullyReasonable = 0;
inline constexpr int kPartiallyReasonable = 1;
inline constexpr int kUnreasonable = 2;
}  // namespace cat

int family_cardinality(TokenFamily family);
bool category_valid(TokenFamily family, int category);
// Canonical category order for a family (argmax tie-break order).
const std::vector<int>& family_categories(TokenFamily family);
std::string family_name(TokenFamily family);

// One reflection token: a family plus a category within it.
struct ReflectionToken {
  TokenFamily family;
  int category;

  // Canonical bracketed form, e.g. "[Partially Relevant]", "[Utility:3]".
  std::string surface() const;

  // Parses canonical forms plus the accepted aliases
  // "[Retrieve Relation]" / "[Retrieve Entity]".
  static std::optional<ReflectionToken> from_surface(const std::string& s);

  friend bool operator==(const ReflectionToken& a, const ReflectionToken& b) {
    return a.family == b.family && a.category == b.category;
  }
};

}  // namespace kgr::reflect
