#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kgr/error.hpp"
#include "kgr/kg/graph.hpp"
#include "kgr/retrieval/retriever.hpp"
#include "kgr/retrieval/similarity.hpp"

using namespace kgr;
using kg::EntityRef;
using kg::KnowledgeGraph;
using retrieval::lexical_similarity;
using retrieval::LexicalSimilarity;
using retrieval::retrieve_relations;

namespace {

std::string fixture(const std::string& name) {
  return std::string(KGR_FIXTURE_DIR) + "/" + name;
}

std::vector<std::string> names_of(
    const std::vector<retrieval::RetrievalResult>& results) {
  std::vector<std::string> out;
  for (const auto& r : results) out.push_back(r.candidate.str());
  return out;
}

}  // namespace

TEST_CASE("lexical similarity") {
  CHECK(lexical_similarity("abc.def_gh", "abc.def_gh") == 1.0);
  CHECK(lexical_similarity("aaa", "zzz") == 0.0);
  CHECK(lexical_similarity("", "") == 1.0);
  // Precomputed trigram-Jaccard value.
  CHECK(lexical_similarity("spouse", "people.person.spouse_s") ==
        doctest::Approx(0.2).epsilon(1e-12));
  // Symmetry.
  CHECK(lexical_similarity("people.person.spouse_s", "spouse") ==
        doctest::Approx(0.2).epsilon(1e-12));
  // Separator normalization: dots and underscores read as spaces.
  CHECK(lexical_similarity("people.person", "people_person") == 1.0);
}

TEST_CASE("cosine") {
  CHECK(retrieval::cosine({1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(retrieval::cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(retrieval::cosine({0, 0}, {1, 0}) == 0.0);  // zero vector convention
  CHECK_THROWS_AS(retrieval::cosine({1, 0}, {1, 0, 0}), DomainError);
}

TEST_CASE("retrieve_relations basics") {
  const auto g = KnowledgeGraph::load_files(fixture("border.kg"),
                                            fixture("border.names"));
  const LexicalSimilarity sim;
  SUBCASE("k must be positive") {
    CHECK_THROWS_AS(
        retrieve_relations("q", EntityRef{"m.us", ""}, {}, g, 0, sim),
        DomainError);
  }
  SUBCASE("unknown entity retrieves nothing") {
    CHECK(retrieve_relations("q", EntityRef{"m.zz", ""}, {}, g, 5, sim).empty());
  }
  SUBCASE("single outgoing relation with a large K") {
    const auto out =
        retrieve_relations("q", EntityRef{"m.cr", ""}, {}, g, 5, sim);
    REQUIRE(out.size() == 1);
    CHECK(out[0].candidate.str() == "flow_through");
  }
}

TEST_CASE("an exact hypothesis match ranks first on the MLK fixture") {
  const auto g =
      KnowledgeGraph::load_files(fixture("mlk.kg"), fixture("mlk.names"));
  const LexicalSimilarity sim;
  const std::string gold =
      "organization.organization_founder.organizations_founded";
  const auto out = retrieve_relations("what organization did martin luther king lead",
                                      EntityRef{"m.mlk", ""}, {gold}, g, 5, sim);
  REQUIRE(out.size() == 5);
  CHECK(out[0].candidate.str() == gold);
  CHECK(out[0].score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out[0].provenance == retrieval::Provenance::HypothesisMatch);
}

TEST_CASE("hypo fixture: gold enters the top-5 only with the hypothesis") {
  const auto g =
      KnowledgeGraph::load_files(fixture("hypo.kg"), fixture("hypo.names"));
  const LexicalSimilarity sim;
  const std::string query = "which squad does the athlete represent";
  const std::string gold = "basketball.roster_position.squad_number";

  const auto without =
      retrieve_relations(query, EntityRef{"m.player", ""}, {}, g, 5, sim);
  const auto names = names_of(without);
  CHECK(std::find(names.begin(), names.end(), gold) == names.end());
  // Hand-scored trigram ordering of the decoys.
  CHECK(names == std::vector<std::string>{
                     "sports.represented_squad.athlete",
                     "sports.the_squad.represented",
                     "sports.athlete.represents_team",
                     "sports.athlete.squad_member",
                     "sports.team.the_athletes"});
  CHECK(without[0].score == doctest::Approx(0.40425531914893614).epsilon(1e-12));
  CHECK(without[1].score == doctest::Approx(0.37777777777777777).epsilon(1e-12));
  CHECK(without[2].score == doctest::Approx(0.3695652173913043).epsilon(1e-12));
  CHECK(without[3].score == doctest::Approx(0.24489795918367346).epsilon(1e-12));
  CHECK(without[4].score == doctest::Approx(0.23404255319148937).epsilon(1e-12));

  // Query-only rank of the gold relation is 7th of 8.
  const auto all8 =
      retrieve_relations(query, EntityRef{"m.player", ""}, {}, g, 8, sim);
  REQUIRE(all8.size() == 8);
  CHECK(all8[6].candidate.str() == gold);
  CHECK(all8[6].score == doctest::Approx(0.07352941176470588).epsilon(1e-12));

  const auto with =
      retrieve_relations(query, EntityRef{"m.player", ""}, {gold}, g, 5, sim);
  REQUIRE(!with.empty());
  CHECK(with[0].candidate.str() == gold);
  CHECK(with[0].score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: output is a bounded subset with monotone hypo scores") {
  const auto g =
      KnowledgeGraph::load_files(fixture("hypo.kg"), fixture("hypo.names"));
  const LexicalSimilarity sim;
  const std::string query = "which squad does the athlete represent";
  for (int k = 1; k <= 9; ++k) {
    const auto out =
        retrieve_relations(query, EntityRef{"m.player", ""}, {}, g, k, sim);
    CHECK(static_cast<int>(out.size()) <= k);
    const auto rels = g.out_relations(EntityRef{"m.player", ""});
    for (const auto& r : out) {
      CHECK(std::find(rels.begin(), rels.end(), r.candidate) != rels.end());
    }
    // Scores are sorted descending with lexicographic tie-break.
    for (std::size_t i = 1; i < out.size(); ++i) {
      const bool ordered =
          out[i - 1].score > out[i].score ||
          (out[i - 1].score == out[i].score &&
           out[i - 1].candidate < out[i].candidate);
      CHECK(ordered);
    }
  }
  // Adding a hypothesis never decreases any candidate's score.
  const auto base =
      retrieve_relations(query, EntityRef{"m.player", ""}, {}, g, 8, sim);
  const auto boosted = retrieve_relations(
      query, EntityRef{"m.player", ""}, {"sports.athlete.club"}, g, 8, sim);
  for (const auto& b : base) {
    for (const auto& h : boosted) {
      if (h.candidate == b.candidate) CHECK(h.score >= b.score - 1e-15);
    }
  }
}

TEST_CASE("fixture embeddings drive cosine similarity") {
  using retrieval::FixtureEmbeddingProvider;
  FixtureEmbeddingProvider provider(
      3, {{"alpha", {1.0, 0.0, 0.0}}, {"beta", {0.0, 1.0, 0.0}},
          {"gamma", {1.0, 0.0, 0.0}}});
  retrieval::VectorSimilarity sim(
      std::make_shared<FixtureEmbeddingProvider>(provider));
  CHECK(sim.similarity("alpha", "gamma") == doctest::Approx(1.0));
  CHECK(sim.similarity("alpha", "beta") == doctest::Approx(0.0));
  CHECK(sim.similarity("alpha", "unknown") == 0.0);
  CHECK(provider.embed("missing") == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(FixtureEmbeddingProvider(2, {{"x", {1.0}}}), DataError);
}

TEST_CASE("retrieve_entities keeps the graph's canonical order") {
  const auto g =
      KnowledgeGraph::load_files(fixture("mlk.kg"), fixture("mlk.names"));
  const auto tails = retrieval::retrieve_entities(
      g, EntityRef{"m.mlk", ""},
      kg::RelationRef::parse(
          "organization.organization_founder.organizations_founded"));
  REQUIRE(tails.size() == 2);
  CHECK(tails[0].key() == "m.mia");
  CHECK(tails[1].key() == "m.sclc");
}
