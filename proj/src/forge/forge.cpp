#include "kgr/forge/forge.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "kgr/error.hpp"
#include "kgr/gateway/prompts.hpp"
#include "kgr/reflect/tokens.hpp"
#include "kgr/retrieval/retriever.hpp"

namespace kgr::forge {

namespace cat = reflect::cat;

namespace {

constexpr char kUnitSeparator = '\x1f';

std::string render_triple(const kg::EntityRef& subject,
                          const kg::RelationRef& relation,
                          const kg::NodeValue& object) {
  return "(" + subject.display() + ", " + relation.str() + ", " +
         object.display() + ")";
}

// One sample for one grounded path.
AnnotatedPath annotate_path(const std::string& query,
                            const kg::ReasoningPath& path,
                            const std::vector<std::string>& answers,
                            const kg::KnowledgeGraph& graph,
                            const retrieval::SimilarityProvider& similarity,
                            const gateway::ModelGateway& critic,
                            const ForgeConfig& cfg) {
  AnnotatedPath out;
  kg::ReasoningPath prefix{path.topic, {}};

  for (const auto& hop : path.hops) {
    const kg::NodeValue at = prefix.terminal();
    if (!at.is_entity()) {
      throw DataError("path continues past a literal node");
    }
    const kg::EntityRef subject = graph.entity(at.entity().id);
    const std::string history = gateway::prompts::render_path_display(prefix);

    // Candidate relations; the gold relation doubles as the hypothesis, so
    // it always makes the block.
    const auto retrieved = retrieval::retrieve_relations(
        query, subject, {hop.relation.str()}, graph, cfg.top_k, similarity);
    KnowledgeBlock rel_block;
    for (const auto& r : retrieved) rel_block.items.push_back(r.candidate.str());
    out.segments.push_back(RetrievalMarker{RetrievalKind::Relation});
    out.segments.push_back(rel_block);
    const auto rel_verdicts = critic.critic_relevance(
        query, history, rel_block.items, gateway::CriticKind::Relation);
    for (std::size_t i = 0; i < rel_block.items.size(); ++i) {
      out.segments.push_back(
          RelevanceMark{rel_block.items[i], rel_verdicts[i].token.category});
    }

    // Tail entities of the gold relation, rendered as triples.
    const auto tails = graph.tail_entities(subject, hop.relation);
    KnowledgeBlock ent_block;
    std::vector<std::string> tail_names;
    for (const auto& t : tails) {
      ent_block.items.push_back(render_triple(subject, hop.relation, t));
      tail_names.push_back(t.display());
    }
    out.segments.push_back(RetrievalMarker{RetrievalKind::Entity});
    out.segments.push_back(ent_block);
    const auto ent_verdicts = critic.critic_relevance(
        query, history, tail_names, gateway::CriticKind::Entity);
    for (std::size_t i = 0; i < tail_names.size(); ++i) {
      out.segments.push_back(
          RelevanceMark{tail_names[i], ent_verdicts[i].token.category});
    }

    prefix = prefix.extended(hop.relation, hop.node);
    const auto rationality = critic.critic_rationality(query, prefix);
    out.segments.push_back(RationalityMark{rationality.token.category});
    if (rationality.token.category == cat::kUnreasonable) break;
  }

  const auto utility = critic.critic_utility(query, answers);
  out.segments.push_back(AnswerBlock{answers, utility.token.category});
  return out;
}

}  // namespace

ForgeReport forge_question(const std::string& query,
                           const std::vector<std::string>& topic_ids,
                           const std::vector<std::string>& gold_answers,
                           const kg::KnowledgeGraph& graph,
                           const retrieval::SimilarityProvider& similarity,
                           const gateway::ModelGateway& critic,
                           const ForgeConfig& cfg) {
  if (gold_answers.empty()) throw DomainError("gold answers must be non-empty");
  if (cfg.top_k < 1) throw DomainError("top_k must be >= 1");

  ForgeReport report;
  std::vector<std::string> answer_displays;
  std::vector<kg::NodeValue> answer_nodes;
  for (const auto& raw : gold_answers) {
    auto resolved = graph.resolve(raw);
    if (!resolved) {
      report.skipped.push_back(
          ForgeSkip{query, "answer not in graph: " + raw});
      continue;
    }
    answer_nodes.push_back(*resolved);
    answer_displays.push_back(resolved->display());
  }
  if (answer_nodes.empty()) return report;

  for (const auto& topic_id : topic_ids) {
    for (const auto& answer : answer_nodes) {
      std::vector<kg::ReasoningPath> paths;
      try {
        paths = graph.shortest_paths(kg::EntityRef{topic_id, ""}, answer,
                                     cfg.max_path_depth);
      } catch (const UnknownTopicError& e) {
        report.skipped.push_back(ForgeSkip{query, e.what()});
        continue;
      }
      if (paths.empty()) {
        report.skipped.push_back(
            ForgeSkip{query, "no path within depth " +
                                 std::to_string(cfg.max_path_depth) + ": " +
                                 topic_id + " -> " + answer.display()});
        continue;
      }
      for (const auto& path : paths) {
        try {
          TrainingSample sample;
          sample.query = query;
          sample.path = annotate_path(query, path, answer_displays, graph,
                                      similarity, critic, cfg);
          sample.output = serialize(sample.path);
          report.samples.push_back(std::move(sample));
        } catch (const TransportError& e) {
          report.skipped.push_back(
              ForgeSkip{query, std::string("critic failure: ") + e.what()});
        }
      }
    }
  }
  return report;
}

void write_corpus(std::ostream& out,
                  const std::vector<TrainingSample>& samples) {
  for (const auto& s : samples) {
    for (const std::string* field : {&s.query, &s.output}) {
      if (field->find(kUnitSeparator) != std::string::npos ||
          field->find('\n') != std::string::npos) {
        throw DataError("corpus field contains a record delimiter");
      }
    }
    out << s.query << kUnitSeparator << s.output << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> read_corpus(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> records;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto sep = line.find(kUnitSeparator);
    if (sep == std::string::npos) {
      throw DataError("corpus line " + std::to_string(row) +
                      ": missing unit separator");
    }
    records.emplace_back(line.substr(0, sep), line.substr(sep + 1));
  }
  return records;
}

std::string corpus_manifest(const ForgeReport& report, const ForgeConfig& cfg) {
  nlohmann::ordered_json doc{
      {"schema", "kgr.corpus.v1"},
      {"samples", report.samples.size()},
      {"skipped", report.skipped.size()},
      {"top_k", cfg.top_k},
      {"max_path_depth", cfg.max_path_depth},
  };
  auto skips = nlohmann::ordered_json::array();
  for (const auto& s : report.skipped) {
    skips.push_back(nlohmann::ordered_json{{"query", s.query}, {"detail", s.detail}});
  }
  doc["skips"] = std::move(skips);
  return doc.dump(2);
}

}  // namespace kgr::forge
