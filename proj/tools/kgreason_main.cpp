// kgreason: knowledge-graph reasoning with reflection-token scoring.
//
// Subcommands: infer (one question), forge (training-corpus creation),
// eval (Hit@1/F1 over a dataset), trace (trace JSON -> Graphviz).
// Exit codes: 0 ok, 2 config/usage, 3 data, 4 transport, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgr/bench/dataset.hpp"
#include "kgr/bench/eval.hpp"
#include "kgr/engine/engine.hpp"
#include "kgr/engine/trace.hpp"
#include "kgr/error.hpp"
#include "kgr/forge/forge.hpp"
#include "kgr/gateway/http_gateway.hpp"
#include "kgr/gateway/mock_gateway.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/similarity.hpp"

namespace {

constexpr const char* kApiKeyEnv = "KGREASON_API_KEY";

struct Endpoint {
  std::string host;
  int port = 80;
  std::string path;
};

Endpoint parse_endpoint(const std::string& url, const std::string& default_path) {
  std::string rest = url;
  const std::string scheme = "http://";
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  if (rest.rfind("https://", 0) == 0) {
    throw kgr::ConfigError("https endpoints are not supported; use http://");
  }
  Endpoint ep;
  const auto slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  ep.path = slash == std::string::npos ? default_path : rest.substr(slash);
  const auto colon = hostport.find(':');
  if (colon == std::string::npos) {
    ep.host = hostport;
  } else {
    ep.host = hostport.substr(0, colon);
    try {
      ep.port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      throw kgr::ConfigError("bad endpoint port in '" + url + "'");
    }
  }
  if (ep.host.empty()) throw kgr::ConfigError("bad endpoint '" + url + "'");
  return ep;
}

std::string api_key_from_env() {
  const char* v = std::getenv(kApiKeyEnv);
  return v ? v : "";
}

// Flags shared by infer/eval/forge.
struct CommonOpts {
  std::string kg_path;
  std::string names_path;
  std::string mock_script;
  std::string model_endpoint;
  std::string embed_fixture;
  std::string embed_endpoint;
  kgr::engine::BeamConfig beam;
  std::string mode = "beam";
  std::string utility_mode = "as_written";
  std::string path_aggregate = "sum";
};

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--kg", o.kg_path, "triple file")->required();
  cmd->add_option("--names", o.names_path, "entity name file");
  cmd->add_option("--mock-script", o.mock_script, "scripted mock gateway");
  cmd->add_option("--model-endpoint", o.model_endpoint,
                  "completion endpoint, e.g. http://127.0.0.1:8080/v1/completions");
  cmd->add_option("--embed-fixture", o.embed_fixture,
                  "fixture embedding vectors (JSON)");
  cmd->add_option("--embed-endpoint", o.embed_endpoint,
                  "embedding endpoint (text in, vector out)");
}

void add_search_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--beam-width", o.beam.beam_width, "beam width B");
  cmd->add_option("--max-depth", o.beam.max_depth, "search depth bound");
  cmd->add_option("--top-k", o.beam.top_k, "retrieved relations per hop");
  cmd->add_option("--hypo-count", o.beam.hypo_count,
                  "hypo-generator guesses per hop (0 disables)");
  cmd->add_option("--k1", o.beam.score.k1, "relevance*rationality weight");
  cmd->add_option("--k2", o.beam.score.k2, "utility weight");
  cmd->add_option("--partial-weight", o.beam.score.partial_weight,
                  "partial-category weight");
  cmd->add_option("--mode", o.mode, "beam|exhausted");
  cmd->add_option("--utility-mode", o.utility_mode, "as_written|expected_value");
  cmd->add_option("--path-aggregate", o.path_aggregate, "sum|mean|product");
}

void finish_config(CommonOpts& o) {
  if (o.mode == "beam") {
    o.beam.mode = kgr::engine::SearchMode::Beam;
  } else if (o.mode == "exhausted") {
    o.beam.mode = kgr::engine::SearchMode::Exhausted;
  } else {
    throw kgr::ConfigError("--mode must be beam or exhausted");
  }
  if (o.utility_mode == "as_written") {
    o.beam.score.utility_mode = kgr::reflect::UtilityMode::AsWritten;
  } else if (o.utility_mode == "expected_value") {
    o.beam.score.utility_mode = kgr::reflect::UtilityMode::ExpectedValue;
  } else {
    throw kgr::ConfigError("--utility-mode must be as_written or expected_value");
  }
  if (o.path_aggregate == "sum") {
    o.beam.score.path_aggregate = kgr::reflect::PathAggregate::Sum;
  } else if (o.path_aggregate == "mean") {
    o.beam.score.path_aggregate = kgr::reflect::PathAggregate::Mean;
  } else if (o.path_aggregate == "product") {
    o.beam.score.path_aggregate = kgr::reflect::PathAggregate::Product;
  } else {
    throw kgr::ConfigError("--path-aggregate must be sum, mean or product");
  }
  try {
    o.beam.validate();
  } catch (const kgr::DomainError& e) {
    throw kgr::ConfigError(e.what());
  }
}

std::unique_ptr<kgr::gateway::ModelGateway> make_gateway(const CommonOpts& o) {
  if (!o.mock_script.empty() && !o.model_endpoint.empty()) {
    throw kgr::ConfigError("--mock-script and --model-endpoint are exclusive");
  }
  if (!o.mock_script.empty()) {
    return std::make_unique<kgr::gateway::MockGateway>(
        kgr::gateway::MockGateway::load_file(o.mock_script));
  }
  if (!o.model_endpoint.empty()) {
    const auto ep = parse_endpoint(o.model_endpoint, "/v1/completions");
    kgr::gateway::HttpGatewayConfig cfg;
    cfg.host = ep.host;
    cfg.port = ep.port;
    cfg.path = ep.path;
    cfg.api_key = api_key_from_env();
    return std::make_unique<kgr::gateway::HttpGateway>(cfg);
  }
  throw kgr::ConfigError("one of --mock-script or --model-endpoint is required");
}

std::unique_ptr<kgr::retrieval::SimilarityProvider> make_similarity(
    const CommonOpts& o) {
  if (!o.embed_fixture.empty() && !o.embed_endpoint.empty()) {
    throw kgr::ConfigError("--embed-fixture and --embed-endpoint are exclusive");
  }
  if (!o.embed_fixture.empty()) {
    auto provider = std::make_shared<kgr::retrieval::FixtureEmbeddingProvider>(
        kgr::retrieval::FixtureEmbeddingProvider::load_file(o.embed_fixture));
    return std::make_unique<kgr::retrieval::VectorSimilarity>(provider);
  }
  if (!o.embed_endpoint.empty()) {
    const auto ep = parse_endpoint(o.embed_endpoint, "/v1/embeddings");
    kgr::retrieval::HttpEmbeddingConfig cfg;
    cfg.host = ep.host;
    cfg.port = ep.port;
    cfg.path = ep.path;
    cfg.api_key = api_key_from_env();
    return std::make_unique<kgr::retrieval::VectorSimilarity>(
        std::make_shared<kgr::retrieval::HttpEmbeddingProvider>(cfg));
  }
  return std::make_unique<kgr::retrieval::LexicalSimilarity>();
}

kgr::kg::KnowledgeGraph load_graph(const CommonOpts& o) {
  return kgr::kg::KnowledgeGraph::load_files(o.kg_path, o.names_path);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kgr::DataError("cannot write: " + path);
  out << content;
}

int run_infer(const CommonOpts& opts, const std::string& question,
              const std::vector<std::string>& topics,
              const std::string& trace_out) {
  const auto graph = load_graph(opts);
  const auto gateway = make_gateway(opts);
  const auto similarity = make_similarity(opts);
  const kgr::engine::InferenceEngine engine(graph, *gateway, *similarity,
                                            opts.beam);
  const auto result = engine.run_query(question, topics);

  bool transport_failed = false;
  for (const auto& tree : result.trees) {
    if (tree.failed()) {
      transport_failed = true;
      std::cerr << "warning: tree for topic " << tree.topic().id
                << " is partial: " << tree.failure() << "\n";
    }
  }
  if (result.ranked.empty()) {
    std::cout << "no answer\n";
  } else {
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
      const auto& ra = result.ranked[i];
      std::cout << (i + 1) << ". [" << ra.final_score << "] ";
      for (std::size_t j = 0; j < ra.answers.size(); ++j) {
        if (j) std::cout << "; ";
        std::cout << ra.answers[j].display();
      }
      if (ra.depth_forced) std::cout << " (depth-forced)";
      std::cout << "\n";
    }
  }
  if (!trace_out.empty()) {
    write_file(trace_out,
               kgr::engine::trace_to_json(result, opts.beam).dump(2) + "\n");
  }
  return transport_failed ? 4 : 0;
}

int run_forge(const CommonOpts& opts, const std::string& dataset_path,
              const std::string& out_path, int top_k, int max_path_depth) {
  const auto graph = load_graph(opts);
  const auto gateway = make_gateway(opts);
  const auto similarity = make_similarity(opts);
  const auto dataset = kgr::bench::load_dataset_file(dataset_path);
  if (dataset.empty()) throw kgr::DataError("no examples");

  kgr::forge::ForgeConfig cfg;
  cfg.top_k = top_k;
  cfg.max_path_depth = max_path_depth;

  kgr::forge::ForgeReport all;
  for (const auto& ex : dataset) {
    auto report = kgr::forge::forge_question(ex.question, ex.topic_ids,
                                             ex.gold_answers, graph,
                                             *similarity, *gateway, cfg);
    for (auto& s : report.samples) all.samples.push_back(std::move(s));
    for (auto& s : report.skipped) all.skipped.push_back(std::move(s));
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw kgr::DataError("cannot write: " + out_path);
  kgr::forge::write_corpus(out, all.samples);
  write_file(out_path + ".manifest.json",
             kgr::forge::corpus_manifest(all, cfg) + "\n");
  std::cout << "samples: " << all.samples.size()
            << "  skipped: " << all.skipped.size() << "\n";
  return 0;
}

int run_eval_cmd(const CommonOpts& opts, const std::string& dataset_path,
                 const std::string& report_out, int workers) {
  const auto graph = load_graph(opts);
  const auto gateway = make_gateway(opts);
  const auto similarity = make_similarity(opts);
  const auto dataset = kgr::bench::load_dataset_file(dataset_path);

  kgr::bench::EvalOptions eval_opts;
  eval_opts.beam = opts.beam;
  eval_opts.workers = workers;
  const auto report =
      kgr::bench::run_eval(dataset, graph, *gateway, *similarity, eval_opts);

  std::cout << "questions: " << report.rows.size()
            << "  hit@1: " << report.hit_at_1 << "  f1: " << report.f1 << "\n";
  if (!report_out.empty()) {
    write_file(report_out, report.to_json(opts.beam).dump(2) + "\n");
  }
  return 0;
}

int run_trace(const std::string& in_path, const std::string& dot_out) {
  std::ifstream in(in_path);
  if (!in) throw kgr::DataError("cannot open trace: " + in_path);
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw kgr::DataError(std::string("bad trace JSON: ") + e.what());
  }
  write_file(dot_out, kgr::engine::trace_to_dot(doc));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph reasoning with reflection-token scoring"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOpts opts;

  auto* infer = app.add_subcommand("infer", "answer one question");
  std::string question, trace_out;
  std::vector<std::string> topics;
  add_model_flags(infer, opts);
  add_search_flags(infer, opts);
  infer->add_option("--question", question, "question text")->required();
  infer->add_option("--topic", topics, "topic entity id (repeatable)")
      ->required();
  infer->add_option("--trace-out", trace_out, "write trace JSON here");

  auto* forge = app.add_subcommand("forge", "build a training corpus");
  std::string forge_dataset, forge_out;
  int forge_top_k = 5, forge_max_depth = 4;
  add_model_flags(forge, opts);
  forge->add_option("--dataset", forge_dataset, "question dataset")->required();
  forge->add_option("--out", forge_out, "corpus output file")->required();
  forge->add_option("--top-k", forge_top_k, "candidate relations per hop");
  forge->add_option("--max-path-depth", forge_max_depth,
                    "skip paths deeper than this");

  auto* eval = app.add_subcommand("eval", "run metrics over a dataset");
  std::string eval_dataset, report_out;
  int workers = 1;
  add_model_flags(eval, opts);
  add_search_flags(eval, opts);
  eval->add_option("--dataset", eval_dataset, "question dataset")->required();
  eval->add_option("--report-out", report_out, "write report JSON here");
  eval->add_option("--workers", workers, "parallel question workers");

  auto* trace = app.add_subcommand("trace", "render a trace as Graphviz dot");
  std::string trace_in, dot_out;
  trace->add_option("--in", trace_in, "trace JSON file")->required();
  trace->add_option("--dot-out", dot_out, "dot output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (infer->parsed()) {
      finish_config(opts);
      return run_infer(opts, question, topics, trace_out);
    }
    if (forge->parsed()) {
      return run_forge(opts, forge_dataset, forge_out, forge_top_k,
                       forge_max_depth);
    }
    if (eval->parsed()) {
      finish_config(opts);
      return run_eval_cmd(opts, eval_dataset, report_out, workers);
    }
    if (trace->parsed()) {
      return run_trace(trace_in, dot_out);
    }
  } catch (const kgr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const kgr::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const kgr::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const kgr::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
