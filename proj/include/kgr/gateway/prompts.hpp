#pragma once

#include <string>
#include <vector>

#include "kgr/gateway/context.hpp"
#include "kgr/kg/types.hpp"

namespace kgr::gateway::prompts {

// Instruction templates the critic endpoints are driven with. Models trained
// on the companion corpus format expect these texts verbatim.
extern const char* const kRelationRelevanceInstruction;
extern const char* const kEntityRelevanceInstruction;
extern const char* const kRationalityInstruction;
extern const char* const kUtilityInstruction;

// Generator-side prompt: query, then the walk so far rendered with the
// corpus markers, then any injected knowledge in paragraph delimiters.
std::string generation_prompt(const GenerationContext& ctx);

std::string critic_relevance_prompt(const std::string& query,
                                    const std::string& history,
                                    const std::vector<std::string>& candidates,
                                    CriticKind kind);
std::string critic_rationality_prompt(const std::string& query,
                                      const kg::ReasoningPath& path);
std::string critic_utility_prompt(const std::string& query,
                                  const std::vector<std::string>& answers);

// Display rendering of a path: "US -> adjoin -> Canada".
std::string render_path_display(const kg::ReasoningPath& path);

}  // namespace kgr::gateway::prompts
