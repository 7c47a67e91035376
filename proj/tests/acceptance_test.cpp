// Acceptance suite. Runs the ten project gates end to end and prints one
// PASS/FAIL line per criterion; exits nonzero when any gate fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgr/bench/eval.hpp"
#include "kgr/bench/metrics.hpp"
#include "kgr/engine/engine.hpp"
#include "kgr/engine/trace.hpp"
#include "kgr/error.hpp"
#include "kgr/forge/forge.hpp"
#include "kgr/gateway/mock_gateway.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/retriever.hpp"
#include "kgr/retrieval/similarity.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kgr;
namespace cat = reflect::cat;

namespace {

std::string fixture(const std::string& name) {
  return std::string(KGR_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing fixture: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

class Harness {
 public:
  void criterion(int n, const std::string& label, double budget_seconds,
                 const std::function<void(Harness&)>& body) {
    failures_.clear();
    const auto start = std::chrono::steady_clock::now();
    try {
      body(*this);
    } catch (const std::exception& e) {
      failures_.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (budget_seconds > 0 && elapsed > budget_seconds) {
      failures_.push_back("runtime " + std::to_string(elapsed) +
                          "s exceeded budget " +
                          std::to_string(budget_seconds) + "s");
    }
    const bool ok = failures_.empty();
    std::printf("[%s] criterion %2d: %s (%.3fs)\n", ok ? "PASS" : "FAIL", n,
                label.c_str(), elapsed);
    if (!ok) {
      ++failed_;
      for (const auto& f : failures_) std::printf("        - %s\n", f.c_str());
    }
  }

  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void close(double got, double want, double tol, const std::string& what) {
    if (std::abs(got - want) > tol) {
      failures_.push_back(what + ": got " + std::to_string(got) + ", want " +
                          std::to_string(want));
    }
  }

  int finish() const {
    std::printf("%s: %d criterion(s) failed\n", failed_ ? "FAIL" : "OK",
                failed_);
    return failed_ ? 1 : 0;
  }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

// Shared scenario loader.
struct Scenario {
  kg::KnowledgeGraph graph;
  gateway::MockGateway mock;
  retrieval::LexicalSimilarity sim;

  Scenario(const std::string& kgf, const std::string& namesf,
           const std::string& mockf)
      : graph(kg::KnowledgeGraph::load_files(fixture(kgf), fixture(namesf))),
        mock(gateway::MockGateway::load_file(fixture(mockf))) {}
};

void check_tree_pruning(Harness& h, const engine::ReasoningTree& tree,
                        const std::string& tag) {
  for (const auto& n : tree.nodes()) {
    if (n.status != engine::NodeStatus::Pruned) continue;
    h.require(n.children.empty(), tag + ": pruned node has descendants");
    if (!n.prune_reason) {
      h.require(false, tag + ": pruned node lacks a recorded token");
      continue;
    }
    const bool undesirable =
        (n.prune_reason->family == reflect::TokenFamily::Relevance &&
         n.prune_reason->category == cat::kUnrelevant) ||
        (n.prune_reason->family == reflect::TokenFamily::Rationality &&
         n.prune_reason->category == cat::kUnreasonable);
    h.require(undesirable, tag + ": prune token is not Unrelevant/Unreasonable");
  }
}

std::set<std::string> leaf_keys(const engine::ReasoningTree& tree) {
  std::set<std::string> keys;
  for (int id : tree.answered_leaves()) keys.insert(tree.node(id).sort_key());
  return keys;
}

}  // namespace

int main() {
  Harness h;

  // 1. Scoring oracle equivalence.
  h.criterion(1, "scoring matches the independent oracle (1e-9; softmax 5e-5)",
              1.0, [](Harness& h) {
    std::mt19937 rng(424242);
    for (int i = 0; i < 100; ++i) {
      const auto family = static_cast<reflect::TokenFamily>(i % 4);
      const auto d = gen::token_distribution(rng, family);
      std::vector<int> cats;
      std::vector<double> lps;
      for (const auto& [c, lp] : d.entries()) {
        cats.push_back(c);
        lps.push_back(lp);
      }
      const auto probs = oracle::softmax(lps);
      for (std::size_t k = 0; k < cats.size(); ++k) {
        h.close(reflect::token_score(d, cats[k]), probs[k], 1e-9,
                "token_score");
      }
      if (family == reflect::TokenFamily::Relevance) {
        h.close(reflect::relevance_score(d),
                oracle::graded(cats, lps, cat::kFullyRelevant,
                               cat::kPartiallyRelevant, 0.5),
                1e-9, "relevance_score");
      }
      if (family == reflect::TokenFamily::Rationality) {
        h.close(reflect::rationality_score(d),
                oracle::graded(cats, lps, cat::kFullyReasonable,
                               cat::kPartiallyReasonable, 0.5),
                1e-9, "rationality_score");
      }
      if (family == reflect::TokenFamily::Utility) {
        h.close(reflect::utility_score(d), oracle::utility_as_written(lps),
                1e-9, "utility_score as_written");
        h.close(reflect::utility_score(d, reflect::UtilityMode::ExpectedValue),
                oracle::utility_expected(cats, lps), 1e-9,
                "utility_score expected_value");
      }
    }
    std::uniform_real_distribution<double> v(-2.0, 2.0);
    std::uniform_real_distribution<double> kdist(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      reflect::ScoreConfig cfg;
      cfg.k1 = kdist(rng);
      cfg.k2 = kdist(rng);
      const double seq = v(rng), rel = v(rng), rat = v(rng), uti = v(rng);
      h.close(reflect::node_score(seq, rel, rat, uti, cfg),
              oracle::combine(seq, rel, rat, uti, cfg.k1, cfg.k2), 1e-9,
              "node_score");
    }
    const reflect::TokenDistribution d(
        reflect::TokenFamily::Relevance,
        {{cat::kFullyRelevant, -1.0}, {cat::kPartiallyRelevant, -2.0},
         {cat::kUnrelevant, -3.0}});
    h.close(reflect::token_score(d, cat::kFullyRelevant), 0.6652, 5e-5,
            "softmax(-1)");
    h.close(reflect::token_score(d, cat::kPartiallyRelevant), 0.2447, 5e-5,
            "softmax(-2)");
    h.close(reflect::token_score(d, cat::kUnrelevant), 0.0900, 5e-5,
            "softmax(-3)");
  });

  // 2. Score-combination constants.
  h.criterion(2, "k1=1, k2=0.5 constants: node_score(0,1,1,1)=1.5 exact; "
                 "utility as_written = 1",
              0, [](Harness& h) {
    reflect::ScoreConfig cfg;  // defaults carry k1=1, k2=0.5
    h.require(cfg.k1 == 1.0 && cfg.k2 == 0.5, "default k1/k2");
    h.require(reflect::node_score(0, 1, 1, 1, cfg) == 1.5,
              "node_score(0,1,1,1) must equal 1.5 exactly");
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lp(-6.0, 2.0);
    std::vector<std::pair<int, double>> entries;
    for (int level = 1; level <= 5; ++level) entries.emplace_back(level, lp(rng));
    const reflect::TokenDistribution d(reflect::TokenFamily::Utility,
                                       std::move(entries));
    h.close(reflect::utility_score(d), 1.0, 1e-12,
            "utility as_written over all five categories");
  });

  // 3. Bit-exact corpus format.
  h.criterion(3, "corpus grammar: figure string byte-exact; 100 random "
                 "round-trips",
              1.0, [](Harness& h) {
    const std::string figure = read_file(fixture("mlk.figure.txt"));
    const auto parsed = forge::parse(figure);
    h.require(forge::serialize(parsed) == figure,
              "serialize(parse(figure)) != figure");
    std::mt19937 rng(9001);
    for (int i = 0; i < 100; ++i) {
      const auto path = gen::annotated_path(rng);
      const auto text = forge::serialize(path);
      if (!(forge::parse(text) == path)) {
        h.require(false, "random path failed to round-trip: " + text);
        break;
      }
    }
  });

  // 4. Graph path oracles.
  h.criterion(4, "shortest/enumerate match brute-force DFS on 25 random "
                 "graphs",
              5.0, [](Harness& h) {
    std::mt19937 rng(1337);
    int graphs = 0;
    while (graphs < 25) {
      const std::string text = gen::random_graph_text(rng, 12, 24);
      std::istringstream in(text);
      const auto g = kg::KnowledgeGraph::load(in);
      if (!g.contains("n0")) continue;
      ++graphs;
      const auto edges = oracle::parse_triples(text);
      for (const std::string goal : {"n1", "n7", "lit:v3"}) {
        const auto expected = oracle::all_simple_paths(edges, "n0", goal, 4);
        const kg::NodeValue answer =
            goal.rfind("lit:", 0) == 0
                ? kg::NodeValue(kg::Literal{goal.substr(4)})
                : kg::NodeValue(kg::EntityRef{goal, ""});
        std::vector<std::string> got;
        for (const auto& p :
             g.enumerate_paths(kg::EntityRef{"n0", ""}, answer, 4)) {
          got.push_back(p.key());
          if (!g.validates(p)) h.require(false, "path fails revalidation");
        }
        h.require(got == expected, "enumerate_paths mismatch vs oracle");
        std::vector<std::string> got_shortest;
        for (const auto& p :
             g.shortest_paths(kg::EntityRef{"n0", ""}, answer, 4)) {
          got_shortest.push_back(p.key());
        }
        const auto want_shortest =
            expected.empty() ? expected : oracle::min_depth_paths(expected);
        h.require(got_shortest == want_shortest,
                  "shortest_paths mismatch vs oracle");
      }
    }
  });

  // 5. Pruning soundness across the whole fixture suite.
  h.criterion(5, "no pruned node has descendants; prune tokens are "
                 "undesirable; Ferguson prunes the Marriage branch at depth 1",
              0, [](Harness& h) {
    engine::BeamConfig cfg;
    cfg.max_depth = 2;

    {
      Scenario s("border.kg", "border.names", "border.mock.json");
      const engine::InferenceEngine eng(s.graph, s.mock, s.sim, cfg);
      check_tree_pruning(
          h, eng.run("which countries border the us", kg::EntityRef{"m.us", ""}),
          "border");
    }
    {
      Scenario s("panthers.kg", "panthers.names", "panthers.mock.json");
      const engine::InferenceEngine eng(s.graph, s.mock, s.sim, cfg);
      check_tree_pruning(h,
                         eng.run("where do florida panthers play",
                                 kg::EntityRef{"m.fp", ""}),
                         "panthers");
    }
    {
      Scenario s("mlk.kg", "mlk.names", "mlk.mock.json");
      const engine::InferenceEngine eng(s.graph, s.mock, s.sim, cfg);
      check_tree_pruning(h,
                         eng.run("what organization did martin luther king lead",
                                 kg::EntityRef{"m.mlk", ""}),
                         "mlk");
    }
    {
      Scenario s("ferguson.kg", "ferguson.names", "ferguson.mock.json");
      const engine::InferenceEngine eng(s.graph, s.mock, s.sim, cfg);
      const auto result = eng.run_query("who is niall ferguson's wife",
                                        {"m.nf", "m.marriage"});
      for (const auto& t : result.trees) check_tree_pruning(h, t, "ferguson");
      bool marriage_pruned = false;
      for (const auto& n : result.trees[1].nodes()) {
        if (n.status == engine::NodeStatus::Pruned && n.depth == 1 &&
            n.prune_reason->family == reflect::TokenFamily::Rationality &&
            n.prune_reason->category == cat::kUnreasonable) {
          marriage_pruned = n.children.empty();
        }
      }
      h.require(marriage_pruned,
                "Marriage-origin branch not pruned Unreasonable at depth 1");
      h.require(!result.ranked.empty() &&
                    result.ranked.front().answers.size() == 1 &&
                    result.ranked.front().answers[0].display() ==
                        "Ayaan Hirsi Ali",
                "Ferguson rank-1 answer");
    }
    {
      Scenario s("mini.kg", "mini.names", "mini.mock.json");
      const auto dataset = bench::load_dataset_file(fixture("mini.dataset"));
      for (auto mode : {engine::SearchMode::Beam, engine::SearchMode::Exhausted}) {
        engine::BeamConfig mc;
        mc.max_depth = 2;
        mc.mode = mode;
        const engine::InferenceEngine eng(s.graph, s.mock, s.sim, mc);
        for (const auto& ex : dataset) {
          for (const auto& topic : ex.topic_ids) {
            check_tree_pruning(
                h, eng.run(ex.question, kg::EntityRef{topic, ""}), "mini");
          }
        }
      }
    }
  });

  // 6. Beam subsumption and Hit@1 monotonicity on the 20-question suite.
  h.criterion(6, "beam(B) leaf sets nest inside exhausted; Hit@1 rises with "
                 "B; exhausted Hit@1 = 1.0",
              10.0, [](Harness& h) {
    Scenario s("mini.kg", "mini.names", "mini.mock.json");
    const auto dataset = bench::load_dataset_file(fixture("mini.dataset"));

    auto config_for = [](engine::SearchMode mode, int width) {
      engine::BeamConfig cfg;
      cfg.max_depth = 2;
      cfg.mode = mode;
      if (mode == engine::SearchMode::Beam) cfg.beam_width = width;
      return cfg;
    };

    // Per-question leaf-set subsumption.
    for (const auto& ex : dataset) {
      const engine::InferenceEngine full(
          s.graph, s.mock, s.sim,
          config_for(engine::SearchMode::Exhausted, 0));
      const auto exhausted =
          leaf_keys(full.run(ex.question, kg::EntityRef{ex.topic_ids[0], ""}));
      std::set<std::string> previous;
      for (int width : {1, 2, 3}) {
        const engine::InferenceEngine eng(
            s.graph, s.mock, s.sim, config_for(engine::SearchMode::Beam, width));
        const auto keys =
            leaf_keys(eng.run(ex.question, kg::EntityRef{ex.topic_ids[0], ""}));
        h.require(std::includes(exhausted.begin(), exhausted.end(),
                                keys.begin(), keys.end()),
                  ex.question + ": beam(" + std::to_string(width) +
                      ") leaves escape the exhausted set");
        h.require(std::includes(keys.begin(), keys.end(), previous.begin(),
                                previous.end()),
                  ex.question + ": answered leaves shrank when B grew to " +
                      std::to_string(width));
        previous = keys;
      }
    }

    // Aggregate Hit@1 trend.
    auto hit_for = [&](engine::SearchMode mode, int width) {
      bench::EvalOptions opts;
      opts.beam = config_for(mode, width);
      return bench::run_eval(dataset, s.graph, s.mock, s.sim, opts).hit_at_1;
    };
    const double b1 = hit_for(engine::SearchMode::Beam, 1);
    const double b2 = hit_for(engine::SearchMode::Beam, 2);
    const double b3 = hit_for(engine::SearchMode::Beam, 3);
    const double full = hit_for(engine::SearchMode::Exhausted, 0);
    h.require(b1 <= b2 + 1e-12 && b2 <= b3 + 1e-12 && b3 <= full + 1e-12,
              "Hit@1 not non-decreasing in beam width");
    h.close(full, 1.0, 0.0, "exhausted Hit@1");
    h.close(b1, 0.6, 1e-12, "beam-1 Hit@1 (fixture-determined)");
    h.close(b2, 0.9, 1e-12, "beam-2 Hit@1 (fixture-determined)");
    h.close(b3, 1.0, 1e-12, "beam-3 Hit@1 (fixture-determined)");
  });

  // 7. Hypo-generator efficacy.
  h.criterion(7, "gold relation reaches the top-5 only with hypotheses", 0,
              [](Harness& h) {
    const auto g = kg::KnowledgeGraph::load_files(fixture("hypo.kg"),
                                                  fixture("hypo.names"));
    const retrieval::LexicalSimilarity sim;
    const std::string query = "which squad does the athlete represent";
    const std::string gold = "basketball.roster_position.squad_number";

    auto contains_gold = [&](const std::vector<retrieval::RetrievalResult>& rs) {
      for (const auto& r : rs) {
        if (r.candidate.str() == gold) return true;
      }
      return false;
    };
    const auto without = retrieval::retrieve_relations(
        query, kg::EntityRef{"m.player", ""}, {}, g, 5, sim);
    const auto with = retrieval::retrieve_relations(
        query, kg::EntityRef{"m.player", ""}, {gold}, g, 5, sim);
    h.require(!contains_gold(without), "gold in top-5 without hypotheses");
    h.require(contains_gold(with) && with[0].candidate.str() == gold,
              "gold not first with the hypothesis");

    // Same effect end to end: the gold branch exists in the tree only when
    // the hypo-generator is on.
    const auto mock = gateway::MockGateway::load_string(
        R"({"rules": [{"when": {"path": "m.player", "depth": 1},
                       "give": {"hypotheses": [")" + gold + R"("]}}]})");
    auto run_with_hypos = [&](int hypo_count) {
      engine::BeamConfig cfg;
      cfg.max_depth = 1;
      cfg.hypo_count = hypo_count;
      const engine::InferenceEngine eng(g, mock, sim, cfg);
      const auto tree = eng.run(query, kg::EntityRef{"m.player", ""});
      for (const auto& n : tree.nodes()) {
        if (n.kind == engine::NodeKind::Relation && n.relation->str() == gold) {
          return true;
        }
      }
      return false;
    };
    h.require(run_with_hypos(1), "gold branch missing despite hypotheses");
    h.require(!run_with_hypos(0), "gold branch present without hypotheses");
  });

  // 8. Determinism under concurrency.
  h.criterion(8, "eval reports are byte-identical with 1 and 8 workers", 0,
              [](Harness& h) {
    Scenario s("mini.kg", "mini.names", "mini.mock.json");
    const auto dataset = bench::load_dataset_file(fixture("mini.dataset"));
    bench::EvalOptions one, eight;
    one.beam.max_depth = eight.beam.max_depth = 2;
    one.workers = 1;
    eight.workers = 8;
    const auto r1 = bench::run_eval(dataset, s.graph, s.mock, s.sim, one);
    const auto r8 = bench::run_eval(dataset, s.graph, s.mock, s.sim, eight);
    h.require(r1.to_json(one.beam).dump(2) == r8.to_json(eight.beam).dump(2),
              "reports differ across worker counts");
  });

  // 9. Forge fidelity.
  h.criterion(9, "MLK forge output equals the corpus figure; early stop "
                 "emits one hop plus the answer",
              0, [](Harness& h) {
    const auto graph =
        kg::KnowledgeGraph::load_files(fixture("mlk.kg"), fixture("mlk.names"));
    const auto critic = gateway::MockGateway::load_file(fixture("mlk.mock.json"));
    auto embeddings = std::make_shared<retrieval::FixtureEmbeddingProvider>(
        retrieval::FixtureEmbeddingProvider::load_file(fixture("mlk.embed.json")));
    const retrieval::VectorSimilarity sim(embeddings);
    forge::ForgeConfig cfg;
    const auto report = forge::forge_question(
        "what organization did martin luther king lead", {"m.mlk"},
        {"Southern Christian Leadership Conference",
         "Montgomery Improvement Association"},
        graph, sim, critic, cfg);
    const std::string figure = read_file(fixture("mlk.figure.txt"));
    h.require(report.samples.size() == 2,
              "expected one sample per gold answer path");
    for (const auto& sample : report.samples) {
      h.require(sample.output == figure, "sample differs from the figure");
    }

    const auto early_graph = kg::KnowledgeGraph::load_files(
        fixture("earlystop.kg"), fixture("earlystop.names"));
    const retrieval::LexicalSimilarity lex;
    const auto early = forge::forge_question(
        "which group did jane windmill found", {"m.jw"},
        {"Windmill Youth Wing"}, early_graph, lex, critic, cfg);
    h.require(early.samples.size() == 1, "early-stop sample count");
    if (!early.samples.empty()) {
      int markers = 0;
      for (const auto& seg : early.samples[0].path.segments) {
        if (std::holds_alternative<forge::RetrievalMarker>(seg)) ++markers;
      }
      h.require(markers == 2, "early-stop sample should hold a single hop");
      const auto& segs = early.samples[0].path.segments;
      h.require(std::holds_alternative<forge::AnswerBlock>(segs.back()),
                "early-stop sample must end with the answer block");
      const auto* rat =
          std::get_if<forge::RationalityMark>(&segs[segs.size() - 2]);
      h.require(rat && rat->category == cat::kUnreasonable,
                "answer block must directly follow the Unreasonable mark");
    }
  });

  // 10. Metric correctness.
  h.criterion(10, "hit@1 and f1 match the independent metric oracle (1e-12)",
              0, [](Harness& h) {
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> size_dist(0, 9);
    std::uniform_int_distribution<int> gold_size(1, 9);
    std::uniform_int_distribution<int> label(0, 13);
    for (int trial = 0; trial < 50; ++trial) {
      std::set<std::string> pred_set, gold_set;
      const int np = size_dist(rng);
      for (int i = 0; i < np; ++i) pred_set.insert("e" + std::to_string(label(rng)));
      const int ng = gold_size(rng);
      for (int i = 0; i < ng; ++i) gold_set.insert("e" + std::to_string(label(rng)));
      std::vector<kg::NodeValue> pred;
      for (const auto& p : pred_set) {
        pred.push_back(kg::NodeValue(kg::EntityRef{p, ""}));
      }
      const std::vector<std::string> gold(gold_set.begin(), gold_set.end());
      h.require(bench::hit_at_1(pred, gold) == oracle::hit_at_1(pred_set, gold_set),
                "hit@1 mismatch");
      h.close(bench::f1(pred, gold), oracle::f1(pred_set, gold_set), 1e-12,
              "f1 mismatch");
    }
  });

  return h.finish();
}
