#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgr/bench/dataset.hpp"
#include "kgr/engine/engine.hpp"

namespace kgr::bench {

struct QuestionRow {
  std::string question;
  int hit = 0;
  double f1 = 0.0;
  std::vector<std::string> predicted;  // rank-1 answer displays
  double score = 0.0;
  bool depth_forced = false;
  std::string reason;  // non-empty when the question failed or had no answer
};

struct MetricsReport {
  double hit_at_1 = 0.0;
  double f1 = 0.0;
  std::vector<QuestionRow> rows;

  // Deterministic serialization, schema "kgr.report.v1". The worker count is
  // deliberately not echoed: reports are byte-identical across worker
  // settings.
  nlohmann::ordered_json to_json(const engine::BeamConfig& cfg) const;
};

struct EvalOptions {
  engine::BeamConfig beam;
  int workers = 1;
};

// Runs inference per question (in parallel up to `workers`), scores rank-1
// answers, and aggregates row means. Per-question failures become zero-score
// rows with a reason; an empty dataset is an error.
MetricsReport run_eval(const std::vector<QaExample>& dataset,
                       const kg::KnowledgeGraph& graph,
                       const gateway::ModelGateway& gateway,
                       const retrieval::SimilarityProvider& similarity,
                       const EvalOptions& options);

}  // namespace kgr::bench
