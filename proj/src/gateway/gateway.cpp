#include "kgr/gateway/gateway.hpp"

#include "kgr/error.hpp"

namespace kgr::gateway {

void require_hypo_count(int n) {
  if (n < 1) throw DomainError("hypothesis count must be >= 1");
}

void require_rationality_context(const GenerationContext& ctx) {
  if (ctx.path.depth() < 1 && !ctx.injected) {
    throw DomainError("rationality needs at least one hop of context");
  }
}

void require_candidates(const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw DomainError("candidate list is empty");
}

void require_path_with_hops(const kg::ReasoningPath& path) {
  if (path.depth() < 1) {
    throw DomainError("rationality needs a path with at least one hop");
  }
}

}  // namespace kgr::gateway
