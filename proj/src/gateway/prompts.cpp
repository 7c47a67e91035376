#include "kgr/gateway/prompts.hpp"

namespace kgr::gateway::prompts {

const char* const kRelationRelevanceInstruction =
    "You will receive a query, topic entity, evidence and optional preceding "
    "sentences containing history information. The evidence contains graph "
    "relationships possibly useful to answering the query. Your task is "
    "evaluate each relationship's contribution to answering the query and "
    "provide a relevance score for each relation, output your explanations "
    "for the score.\n"
    "The score of relevance range from [Fully Relevant], [Partially Relevant] "
    "to [Unrelevant]:\n"
    "- If the relationship directly contains information directly about the "
    "query or can answer the query with information in preceding sentences, "
    "return [Fully Relevant].\n"
    "- If the relationship do not directly answer the query, but includes "
    "information possibly point to the answer, return [Partially Relevant].\n"
    "- If the relationship contains irrelevant information about the query, "
    "return [Unrelevant].";

const char* const kEntityRelevanceInstruction =
    "You will receive a query, evidence and optional preceding historical "
    "information for the task. The evidence and preceding information include "
    "associated retrieved knowledge graph triplets presented as (head entity, "
    "relation, tail entity).\n"
    "Your task is to assign a relevance score to the query for each tail "
    "entity in the evidence. Additionally, you are required to provide "
    "explanations for the scores assigned.\n"
    "The relevance scores should fall into one of the following categories: "
    "[Fully Relevant], [Partially Relevant], or [Unrelevant].";

const char* const kRationalityInstruction =
    "You will receive a query, output and a reasoning path. The reasoning "
    "path contains the current reasoning process starting from the topic "
    "entitiy to the answer. Your task is to rate rationality score for the "
    "path and output your explanations for the score.\n"
    "The score of rationality range from [Fully Reasonable], [Partially "
    "Reasonable] to [Unreasonable].";

const char* const kUtilityInstruction =
    "You will be given a query and the answers, where the answers may consist "
    "of one or more individual answers, separated by commas(,).\n"
    "Your task is to generate a **rating** to evaluate whether the answer is "
    "a useful response to the query.\n"
    "Use the following entailment scale to give the utility score:\n"
    "[Utility:5]: Generally, the output provides a complete, highly detailed, "
    "and informative response to the query, fully satisfying the information "
    "needs.\n"
    "[Utility:4]: Generally, the output mostly fulfills the need in the "
    "query and provides helpful answers, while there can be some minor "
    "improvements, such as discussing more detailed information or providing "
    "additional correct answers beyond the current output.\n"
    "[Utility:3]: Generally, the output is correct and acceptable, but there "
    "are obvious problems, such as being too vague or not specific enough, "
    "limiting its helpfulness in addressing the query.\n"
    "[Utility:2]: Generally, the output still discusses the topic of the "
    "query, but it is incorrect or does not actually meet the requirements "
    "of the query.\n"
    "[Utility:1]: Generally, the output is completely irrelevant to the "
    "query or does not give an answer in the end.";

std::string render_path_display(const kg::ReasoningPath& path) {
  std::string out = path.topic.display();
  for (const auto& hop : path.hops) {
    out += " -> ";
    out += hop.relation.str();
    out += " -> ";
    out += hop.node.display();
  }
  return out;
}

std::string generation_prompt(const GenerationContext& ctx) {
  std::string out = ctx.query;
  out += '\n';
  for (const auto& hop : ctx.path.hops) {
    out += "@[Retrieve Relation]@";
    out += hop.relation.str();
    out += "@[Retrieve Entity]@";
    out += hop.node.display();
  }
  if (ctx.injected) out += ctx.injected->render();
  return out;
}

std::string critic_relevance_prompt(const std::string& query,
                                    const std::string& history,
                                    const std::vector<std::string>& candidates,
                                    CriticKind kind) {
  std::string out = kind == CriticKind::Relation
                        ? kRelationRelevanceInstruction
                        : kEntityRelevanceInstruction;
  out += "\n\nQuery: " + query;
  InjectedKnowledge block;
  block.kind = kind == CriticKind::Relation ? InjectedKnowledge::Kind::Relations
                                            : InjectedKnowledge::Kind::Triples;
  block.items = candidates;
  out += "\nEvidence: " + block.render();
  if (!history.empty()) out += "\nHistory: " + history;
  return out;
}

std::string critic_rationality_prompt(const std::string& query,
                                      const kg::ReasoningPath& path) {
  std::string out = kRationalityInstruction;
  out += "\n\nQuery: " + query;
  out += "\nReasoning path: " + render_path_display(path);
  return out;
}

std::string critic_utility_prompt(const std::string& query,
                                  const std::vector<std::string>& answers) {
  std::string out = kUtilityInstruction;
  out += "\n\nQuery: " + query;
  out += "\nAnswers: ";
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i) out += ",";
    out += answers[i];
  }
  return out;
}

}  // namespace kgr::gateway::prompts
