#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "kgr/engine/engine.hpp"
#include "kgr/engine/trace.hpp"
#include "kgr/error.hpp"
#include "kgr/gateway/mock_gateway.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/similarity.hpp"

using namespace kgr;
using engine::BeamConfig;
using engine::InferenceEngine;
using engine::NodeKind;
using engine::NodeStatus;
using engine::ReasoningTree;
using engine::SearchMode;
using gateway::MockGateway;
using kg::EntityRef;
using kg::KnowledgeGraph;
namespace cat = reflect::cat;

namespace {

std::string fixture(const std::string& name) {
  return std::string(KGR_FIXTURE_DIR) + "/" + name;
}

struct Scenario {
  KnowledgeGraph graph;
  MockGateway mock;
  retrieval::LexicalSimilarity sim;
  BeamConfig cfg;

  Scenario(const std::string& kg, const std::string& names,
           const std::string& mock_file) :
      graph(KnowledgeGraph::load_files(fixture(kg), fixture(names))),
      mock(MockGateway::load_file(fixture(mock_file))) {}

  InferenceEngine engine() const { return {graph, mock, sim, cfg}; }
};

std::set<std::string> answer_displays(const engine::RankedAnswer& ra) {
  std::set<std::string> out;
  for (const auto& a : ra.answers) out.insert(a.display());
  return out;
}

void check_pruning_sound(const ReasoningTree& tree) {
  for (const auto& n : tree.nodes()) {
    if (n.status == NodeStatus::Pruned) {
      CHECK(n.children.empty());
      REQUIRE(n.prune_reason.has_value());
      const bool undesirable =
          (n.prune_reason->family == reflect::TokenFamily::Relevance &&
           n.prune_reason->category == cat::kUnrelevant) ||
          (n.prune_reason->family == reflect::TokenFamily::Rationality &&
           n.prune_reason->category == cat::kUnreasonable);
      CHECK(undesirable);
    }
  }
}

}  // namespace

TEST_CASE("border fixture answers Canada through the adjoin edge") {
  Scenario s("border.kg", "border.names", "border.mock.json");
  const auto tree = s.engine().run("which countries border the us",
                                   EntityRef{"m.us", ""});
  REQUIRE_FALSE(tree.failed());

  bool direct_leaf = false;
  for (int id : tree.answered_leaves()) {
    const auto& leaf = tree.node(id);
    if (leaf.path.key() == "m.us -> adjoin -> m.ca") {
      direct_leaf = true;
      REQUIRE(leaf.answer->answers.size() == 1);
      CHECK(leaf.answer->answers[0].display() == "Canada");
      CHECK(leaf.depth == 1);
      CHECK_FALSE(leaf.answer->depth_forced);
    }
  }
  CHECK(direct_leaf);
  // The depth-2 river walk also reaches Canada.
  CHECK(tree.answered_leaves().size() == 2);
  check_pruning_sound(tree);

  // Every root-to-leaf path revalidates against the graph.
  for (int id : tree.answered_leaves()) {
    CHECK(s.graph.validates(tree.node(id).path));
  }
}

TEST_CASE("ferguson fixture: two hops through the CVT, marriage branch pruned") {
  Scenario s("ferguson.kg", "ferguson.names", "ferguson.mock.json");
  const auto result = s.engine().run_query("who is niall ferguson's wife",
                                           {"m.nf", "m.marriage"});
  REQUIRE(result.trees.size() == 2);
  REQUIRE_FALSE(result.ranked.empty());
  CHECK(answer_displays(result.ranked.front()) ==
        std::set<std::string>{"Ayaan Hirsi Ali"});

  // Rank-1 leaf sits two hops deep, through the nameless CVT node.
  const auto& top = result.ranked.front();
  const auto& leaf = result.trees[top.tree_index].node(top.leaf_id);
  CHECK(leaf.depth == 2);
  CHECK(leaf.path.key().find("m.0j4jq57") != std::string::npos);

  // The Marriage-topic tree prunes its single branch as Unreasonable in one
  // step and contributes no answers.
  const auto& marriage_tree = result.trees[1];
  CHECK(marriage_tree.topic().id == "m.marriage");
  CHECK(marriage_tree.answered_leaves().empty());
  bool unreasonable_at_depth1 = false;
  for (const auto& n : marriage_tree.nodes()) {
    if (n.status == NodeStatus::Pruned && n.depth == 1 &&
        n.prune_reason->family == reflect::TokenFamily::Rationality) {
      unreasonable_at_depth1 = true;
      CHECK(n.children.empty());
      CHECK(n.kind == NodeKind::Relation);
      CHECK(n.relation->str() == "people.marriage.type_of_union");
    }
  }
  CHECK(unreasonable_at_depth1);

  // The children relation in the Ferguson tree was pruned as Unrelevant.
  bool children_pruned = false;
  for (const auto& n : result.trees[0].nodes()) {
    if (n.kind == NodeKind::Relation && n.relation->str() == "people.person.children") {
      CHECK(n.status == NodeStatus::Pruned);
      CHECK(n.prune_reason->category == cat::kUnrelevant);
      children_pruned = true;
    }
  }
  CHECK(children_pruned);
  for (const auto& t : result.trees) check_pruning_sound(t);
}

TEST_CASE("panthers fixture groups both arenas into one answer") {
  Scenario s("panthers.kg", "panthers.names", "panthers.mock.json");
  const auto result =
      s.engine().run_query("where do florida panthers play", {"m.fp"});
  REQUIRE_FALSE(result.ranked.empty());
  CHECK(answer_displays(result.ranked.front()) ==
        std::set<std::string>{"Miami Arena", "BB&T Center"});
  const auto& leaf =
      result.trees[0].node(result.ranked.front().leaf_id);
  CHECK(leaf.answer->utility.argmax() == 4);
  CHECK(leaf.depth == 1);
}

TEST_CASE("expected-value utility mode grades answer leaves") {
  Scenario s("panthers.kg", "panthers.names", "panthers.mock.json");
  s.cfg.score.utility_mode = reflect::UtilityMode::ExpectedValue;
  const auto result =
      s.engine().run_query("where do florida panthers play", {"m.fp"});
  REQUIRE_FALSE(result.ranked.empty());
  const auto& leaf = result.trees[0].node(result.ranked.front().leaf_id);
  // Mass concentrated on level 4: expectation just below 4/5.
  CHECK(leaf.scores.uti > 0.70);
  CHECK(leaf.scores.uti < 0.85);

  Scenario w("panthers.kg", "panthers.names", "panthers.mock.json");
  const auto written =
      w.engine().run_query("where do florida panthers play", {"m.fp"});
  const auto& wleaf = written.trees[0].node(written.ranked.front().leaf_id);
  CHECK(wleaf.scores.uti == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("root-level no-retrieval answers with the topic itself") {
  Scenario s("border.kg", "border.names", "border.mock.json");
  const auto mock = MockGateway::load_string(R"({
    "rules": [{"when": {"path": "m.us", "depth": 1},
               "give": {"retrieval": {"[No Retrieval]": -0.1, "[Relation Retrieval]": -2.0},
                        "utility": {"[Utility:2]": -0.1}}}]})");
  const InferenceEngine eng(s.graph, mock, s.sim, s.cfg);
  const auto tree = eng.run("anything", EntityRef{"m.us", ""});
  const auto leaves = tree.answered_leaves();
  REQUIRE(leaves.size() == 1);
  CHECK(tree.node(leaves[0]).answer->answers[0].key() == "m.us");
  CHECK(tree.node(leaves[0]).depth == 0);
}

TEST_CASE("depth exhaustion forces a flagged answer attempt") {
  Scenario s("border.kg", "border.names", "border.mock.json");
  // No scripting at all: defaults keep continuing until the bound.
  const auto mock = MockGateway::load_string(R"({"rules": []})");
  BeamConfig cfg;
  cfg.max_depth = 1;
  const InferenceEngine eng(s.graph, mock, s.sim, cfg);
  const auto tree = eng.run("unscripted", EntityRef{"m.us", ""});
  const auto leaves = tree.answered_leaves();
  REQUIRE_FALSE(leaves.empty());
  for (int id : leaves) {
    CHECK(tree.node(id).answer->depth_forced);
    CHECK(tree.node(id).depth == 1);
  }
}

TEST_CASE("dead-end expansion closes the node with no children") {
  std::istringstream t("m.a\tr.x\tm.b\n");
  const auto g = KnowledgeGraph::load(t);
  const auto mock = MockGateway::load_string(R"({"rules": []})");
  retrieval::LexicalSimilarity sim;
  BeamConfig cfg;
  cfg.max_depth = 2;
  const InferenceEngine eng(g, mock, sim, cfg);
  const auto tree = eng.run("q", EntityRef{"m.a", ""});
  CHECK(tree.answered_leaves().empty());
  for (const auto& n : tree.nodes()) {
    if (n.kind == NodeKind::Entity && n.node->key() == "m.b") {
      CHECK(n.children.empty());
      CHECK(n.status == NodeStatus::Open);
    }
  }
  // Explicit no-answer result.
  CHECK(engine::finalize_answers(tree, cfg).empty());
}

TEST_CASE("unknown topics are rejected up front") {
  Scenario s("border.kg", "border.names", "border.mock.json");
  CHECK_THROWS_AS(s.engine().run("q", EntityRef{"m.nope", ""}),
                  UnknownTopicError);
}

TEST_CASE("transport failures mark the tree partial instead of throwing") {
  Scenario s("border.kg", "border.names", "border.mock.json");
  const auto mock = MockGateway::load_string(R"({
    "rules": [{"when": {"candidate": "adjoin"}, "give": {"fail": "backend down"}}]})");
  const InferenceEngine eng(s.graph, mock, s.sim, s.cfg);
  const auto tree = eng.run("q", EntityRef{"m.us", ""});
  CHECK(tree.failed());
  CHECK(tree.failure() == "backend down");
}

TEST_CASE("expand_node on the MLK fixture keeps four of five relations") {
  Scenario s("mlk.kg", "mlk.names", "mlk.mock.json");
  InferenceEngine eng = s.engine();
  ReasoningTree tree(s.graph.entity("m.mlk"));
  const auto survivors = eng.expand_node(
      tree, tree.root(), 1, "what organization did martin luther king lead");

  const auto& root = tree.node(tree.root());
  int relation_children = 0, pruned = 0;
  for (int id : root.children) {
    const auto& n = tree.node(id);
    if (n.kind == NodeKind::Relation) {
      ++relation_children;
      if (n.status == NodeStatus::Pruned) {
        ++pruned;
        CHECK(n.relation->str() == "organization.organization.founders");
        CHECK(n.prune_reason->category == cat::kUnrelevant);
      }
    }
  }
  CHECK(relation_children == 5);
  CHECK(pruned == 1);

  // The gold branch answered immediately (scripted NoRetrieval), carrying
  // both founded organizations in one leaf; the other three survive.
  const auto leaves = tree.answered_leaves();
  REQUIRE(leaves.size() == 1);
  std::set<std::string> names;
  for (const auto& a : tree.node(leaves[0]).answer->answers) {
    names.insert(a.display());
  }
  CHECK(names == std::set<std::string>{"Montgomery Improvement Association",
                                       "Southern Christian Leadership Conference"});
  CHECK(tree.node(leaves[0]).answer->utility.argmax() == 5);
  CHECK(survivors.size() == 3);
}

TEST_CASE("beam_select") {
  ReasoningTree tree(EntityRef{"m.root", ""});
  BeamConfig cfg;
  auto add_leaf = [&](const std::string& id, double total) {
    engine::TreeNode n;
    n.kind = NodeKind::Entity;
    n.depth = 1;
    n.node = kg::NodeValue(EntityRef{id, ""});
    n.path = tree.node(0).path.extended(kg::RelationRef::parse("r.x"),
                                        kg::NodeValue(EntityRef{id, ""}));
    n.scores.total = total;
    return tree.add_child(0, std::move(n));
  };
  const int a = add_leaf("m.a", 0.9);
  const int b = add_leaf("m.b", 0.5);
  const int c = add_leaf("m.c", 0.5);
  const int d = add_leaf("m.d", 0.1);

  SUBCASE("a frontier smaller than B passes through") {
    cfg.beam_width = 3;
    const auto kept = InferenceEngine::beam_select(tree, {a, b}, cfg);
    CHECK(kept == std::vector<int>{a, b});
  }
  SUBCASE("ties break lexicographically on the serialized path") {
    cfg.beam_width = 2;
    const auto kept = InferenceEngine::beam_select(tree, {d, c, b, a}, cfg);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0] == a);
    CHECK(kept[1] == b);  // m.b sorts before m.c at the same score
  }
  SUBCASE("exhausted mode keeps everything, deterministically ordered") {
    cfg.mode = SearchMode::Exhausted;
    const auto kept = InferenceEngine::beam_select(tree, {d, c, b, a}, cfg);
    CHECK(kept == std::vector<int>{a, b, c, d});
  }
}

TEST_CASE("beam width one expands only the argmax branch of a 3-way fixture") {
  std::istringstream t(
      "m.q\tr.a\tm.a1\n"
      "m.q\tr.b\tm.b1\n"
      "m.q\tr.c\tm.c1\n"
      "m.a1\ts.x\tm.ans1\n"
      "m.b1\ts.y\tm.ans2\n"
      "m.c1\ts.z\tm.ans3\n");
  const auto g = KnowledgeGraph::load(t);
  // Distinct entity relevance masses strictly order the hop-1 frontier.
  const auto mock = MockGateway::load_string(R"({
    "rules": [
      {"when": {"candidate": "m.a1"}, "give": {"relevance": {"[Fully Relevant]": -0.1, "[Partially Relevant]": -4.0}}},
      {"when": {"candidate": "m.b1"}, "give": {"relevance": {"[Fully Relevant]": -0.8, "[Partially Relevant]": -1.2}}},
      {"when": {"candidate": "m.c1"}, "give": {"relevance": {"[Partially Relevant]": -0.1, "[Fully Relevant]": -2.5}}}
    ]})");
  retrieval::LexicalSimilarity sim;

  auto leaf_keys = [](const ReasoningTree& tree) {
    std::set<std::string> keys;
    for (int id : tree.answered_leaves()) keys.insert(tree.node(id).sort_key());
    return keys;
  };
  auto run_mode = [&](SearchMode mode, int width) {
    BeamConfig cfg;
    cfg.mode = mode;
    cfg.beam_width = width;
    cfg.max_depth = 2;  // hop-2 expansions answer via the depth bound
    const InferenceEngine eng(g, mock, sim, cfg);
    return eng.run("q", EntityRef{"m.q", ""});
  };

  const auto exhausted = leaf_keys(run_mode(SearchMode::Exhausted, 1));
  const auto narrow = leaf_keys(run_mode(SearchMode::Beam, 1));
  const auto wide = leaf_keys(run_mode(SearchMode::Beam, 3));

  CHECK(exhausted.size() == 3);
  REQUIRE(narrow.size() == 1);
  // The surviving branch is the top-scored one.
  CHECK(narrow.begin()->find("m.ans1") != std::string::npos);
  CHECK(std::includes(exhausted.begin(), exhausted.end(), narrow.begin(),
                      narrow.end()));
  CHECK(std::includes(exhausted.begin(), exhausted.end(), wide.begin(),
                      wide.end()));
  CHECK(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end()));
}

TEST_CASE("finalize ranks leaves by backtracked score") {
  ReasoningTree tree(EntityRef{"m.root", ""});
  BeamConfig cfg;
  auto add_answer = [&](const std::string& id, double total) {
    engine::TreeNode n;
    n.kind = NodeKind::Answer;
    n.depth = 1;
    n.status = NodeStatus::Answered;
    n.path = tree.node(0).path;
    n.scores.total = total;
    engine::AnswerSet set;
    set.answers = {kg::NodeValue(EntityRef{id, ""})};
    set.utility = reflect::TokenDistribution::single(reflect::TokenFamily::Utility, 5);
    n.answer = std::move(set);
    return tree.add_child(0, std::move(n));
  };
  add_answer("m.low", 0.2);
  const int hi = add_answer("m.high", 0.1300841530 + 0.2);

  const auto ranked = engine::finalize_answers(tree, cfg);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].leaf_id == hi);
  CHECK(ranked[0].final_score == doctest::Approx(0.3300841530));
  CHECK(ranked[1].final_score == doctest::Approx(0.2));
}

TEST_CASE("identical runs serialize to identical traces") {
  Scenario s("ferguson.kg", "ferguson.names", "ferguson.mock.json");
  const auto r1 = s.engine().run_query("who is niall ferguson's wife",
                                       {"m.nf", "m.marriage"});
  const auto r2 = s.engine().run_query("who is niall ferguson's wife",
                                       {"m.nf", "m.marriage"});
  CHECK(engine::trace_to_json(r1, s.cfg).dump() ==
        engine::trace_to_json(r2, s.cfg).dump());
}

TEST_CASE("trace json and dot exports") {
  Scenario s("panthers.kg", "panthers.names", "panthers.mock.json");
  const auto result =
      s.engine().run_query("where do florida panthers play", {"m.fp"});
  const auto doc = engine::trace_to_json(result, s.cfg);
  CHECK(doc["schema"] == "kgr.trace.v1");
  CHECK(doc["trees"].size() == 1);
  for (const auto& n : doc["trees"][0]["nodes"]) {
    CHECK(n.contains("id"));
    CHECK(n.contains("scores"));
    CHECK(n["scores"].contains("total"));
    CHECK(n.contains("status"));
  }
  const auto dot = engine::trace_to_dot(doc);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("BB&T Center") != std::string::npos);
  nlohmann::ordered_json bad{{"schema", "other"}};
  CHECK_THROWS_AS(engine::trace_to_dot(bad), DataError);

  // Multi-topic traces render one cluster per tree.
  Scenario f("ferguson.kg", "ferguson.names", "ferguson.mock.json");
  const auto multi = f.engine().run_query("who is niall ferguson's wife",
                                          {"m.nf", "m.marriage"});
  const auto mdot = engine::trace_to_dot(engine::trace_to_json(multi, f.cfg));
  CHECK(mdot.find("cluster_0") != std::string::npos);
  CHECK(mdot.find("cluster_1") != std::string::npos);
  CHECK(mdot.find("[Unreasonable]") != std::string::npos);
}

TEST_CASE("config validation") {
  BeamConfig cfg;
  cfg.beam_width = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.beam_width = 1;
  cfg.max_depth = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.max_depth = 2;
  cfg.top_k = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.top_k = 5;
  cfg.mode = SearchMode::Exhausted;
  cfg.beam_width = 0;  // width is ignored in exhausted mode
  CHECK_NOTHROW(cfg.validate());
}
