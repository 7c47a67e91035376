#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kgr/forge/annotated.hpp"
#include "kgr/gateway/gateway.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/similarity.hpp"

namespace kgr::forge {

struct TrainingSample {
  std::string query;
  AnnotatedPath path;
  std::string output;  // serialize(path)
};

struct ForgeSkip {
  std::string query;
  std::string detail;
};

struct ForgeReport {
  std::vector<TrainingSample> samples;
  std::vector<ForgeSkip> skipped;
};

struct ForgeConfig {
  int top_k = 5;
  int max_path_depth = 4;
};

// Weak supervision per question: every shortest topic->answer path becomes
// one sample. Each hop stocks a retrieved candidate-relation block (the gold
// relation rides along as a retrieval hypothesis) with per-candidate critic
// relevance, the gold relation's tail-entity block with per-candidate critic
// relevance, and a critic rationality mark on the walked prefix; an
// Unreasonable mark stops annotation early and the gold answers plus critic
// utility close the sample. Questions without a path inside the depth bound
// are reported, not truncated; critic transport failures abort just the
// affected sample.
ForgeReport forge_question(const std::string& query,
                           const std::vector<std::string>& topic_ids,
                           const std::vector<std::string>& gold_answers,
                           const kg::KnowledgeGraph& graph,
                           const retrieval::SimilarityProvider& similarity,
                           const gateway::ModelGateway& critic,
                           const ForgeConfig& cfg);

// Corpus record: query <US> output, one per line; the unit separator cannot
// occur in either field.
void write_corpus(std::ostream& out, const std::vector<TrainingSample>& samples);
std::vector<std::pair<std::string, std::string>> read_corpus(std::istream& in);

// Manifest JSON: sample/skip counts and the config used.
std::string corpus_manifest(const ForgeReport& report, const ForgeConfig& cfg);

}  // namespace kgr::forge
