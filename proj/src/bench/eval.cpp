#include "kgr/bench/eval.hpp"

#include <atomic>
#include <thread>

#include "kgr/bench/metrics.hpp"
#include "kgr/engine/trace.hpp"
#include "kgr/error.hpp"

namespace kgr::bench {

nlohmann::ordered_json MetricsReport::to_json(
    const engine::BeamConfig& cfg) const {
  nlohmann::ordered_json doc;
  doc["schema"] = "kgr.report.v1";
  doc["config"] = engine::config_to_json(cfg);
  doc["aggregate"] = nlohmann::ordered_json{
      {"hit_at_1", hit_at_1}, {"f1", f1}, {"questions", rows.size()}};
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    rows_json.push_back(nlohmann::ordered_json{
        {"question", row.question},
        {"hit", row.hit},
        {"f1", row.f1},
        {"predicted", row.predicted},
        {"score", row.score},
        {"depth_forced", row.depth_forced},
        {"reason", row.reason}});
  }
  doc["rows"] = std::move(rows_json);
  return doc;
}

MetricsReport run_eval(const std::vector<QaExample>& dataset,
                       const kg::KnowledgeGraph& graph,
                       const gateway::ModelGateway& gateway,
                       const retrieval::SimilarityProvider& similarity,
                       const EvalOptions& options) {
  if (dataset.empty()) throw DataError("no examples");
  if (options.workers < 1) throw ConfigError("workers must be >= 1");

  const engine::InferenceEngine engine(graph, gateway, similarity,
                                       options.beam);
  std::vector<QuestionRow> rows(dataset.size());

  // Index-sliced fan-out; each worker writes only its own rows, so assembly
  // order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dataset.size()) break;
      const QaExample& ex = dataset[i];
      QuestionRow row;
      row.question = ex.question;
      try {
        const auto result = engine.run_query(ex.question, ex.topic_ids);
        std::string failure;
        for (const auto& tree : result.trees) {
          if (tree.failed()) failure = tree.failure();
        }
        if (result.ranked.empty()) {
          row.reason = failure.empty() ? "no answer" : failure;
        } else {
          const auto& top = result.ranked.front();
          row.score = top.final_score;
          row.depth_forced = top.depth_forced;
          for (const auto& a : top.answers) row.predicted.push_back(a.display());
          row.hit = hit_at_1(top.answers, ex.gold_answers);
          row.f1 = f1(top.answers, ex.gold_answers);
          if (!failure.empty()) row.reason = failure;
        }
      } catch (const std::exception& e) {
        row.reason = e.what();
      }
      rows[i] = std::move(row);
    }
  };

  if (options.workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(options.workers));
    for (int w = 0; w < options.workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  MetricsReport report;
  report.rows = std::move(rows);
  double hit_sum = 0.0, f1_sum = 0.0;
  for (const auto& row : report.rows) {
    hit_sum += row.hit;
    f1_sum += row.f1;
  }
  report.hit_at_1 = hit_sum / static_cast<double>(report.rows.size());
  report.f1 = f1_sum / static_cast<double>(report.rows.size());
  return report;
}

}  // namespace kgr::bench
