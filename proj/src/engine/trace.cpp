#include "kgr/engine/trace.hpp"

#include <sstream>

#include "kgr/error.hpp"

namespace kgr::engine {

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Root: return "root";
    case NodeKind::Relation: return "relation";
    case NodeKind::Entity: return "entity";
    case NodeKind::Answer: return "answer";
  }
  return "?";
}

const char* status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Open: return "open";
    case NodeStatus::Pruned: return "pruned";
    case NodeStatus::Answered: return "answered";
  }
  return "?";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

nlohmann::ordered_json config_to_json(const BeamConfig& cfg) {
  return nlohmann::ordered_json{
      {"beam_width", cfg.beam_width},
      {"max_depth", cfg.max_depth},
      {"top_k", cfg.top_k},
      {"hypo_count", cfg.hypo_count},
      {"mode", cfg.mode == SearchMode::Beam ? "beam" : "exhausted"},
      {"k1", cfg.score.k1},
      {"k2", cfg.score.k2},
      {"partial_weight", cfg.score.partial_weight},
      {"utility_mode", cfg.score.utility_mode == reflect::UtilityMode::AsWritten
                           ? "as_written"
                           : "expected_value"},
      {"path_aggregate",
       cfg.score.path_aggregate == reflect::PathAggregate::Sum    ? "sum"
       : cfg.score.path_aggregate == reflect::PathAggregate::Mean ? "mean"
                                                                  : "product"}};
}

nlohmann::ordered_json trace_to_json(const InferenceResult& result,
                                     const BeamConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["schema"] = "kgr.trace.v1";
  doc["query"] = result.query;
  doc["config"] = config_to_json(cfg);

  auto trees = nlohmann::ordered_json::array();
  for (const auto& tree : result.trees) {
    nlohmann::ordered_json t;
    t["topic"] = tree.topic().id;
    t["failure"] = tree.failed() ? nlohmann::ordered_json(tree.failure())
                                 : nlohmann::ordered_json(nullptr);
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : tree.nodes()) {
      nlohmann::ordered_json j;
      j["id"] = n.id;
      j["parent"] = n.parent < 0 ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(n.parent);
      j["depth"] = n.depth;
      j["kind"] = kind_name(n.kind);
      if (n.kind == NodeKind::Relation) {
        j["content"] = n.relation->str();
        j["label"] = n.relation->str();
      } else if (n.kind == NodeKind::Entity) {
        j["content"] = n.node->key();
        j["label"] = n.node->display();
      } else if (n.kind == NodeKind::Root) {
        j["content"] = tree.topic().id;
        j["label"] = tree.topic().display();
      } else {
        std::string joined;
        for (const auto& a : n.answer->answers) {
          if (!joined.empty()) joined += ';';
          joined += a.display();
        }
        j["content"] = joined;
        j["label"] = "answer: " + joined;
      }
      j["scores"] = nlohmann::ordered_json{{"seq", n.scores.seq},
                                           {"rel", n.scores.rel},
                                           {"rat", n.scores.rat},
                                           {"uti", n.scores.uti},
                                           {"total", n.scores.total}};
      j["status"] = status_name(n.status);
      j["prune_reason"] = n.prune_reason
                              ? nlohmann::ordered_json(n.prune_reason->surface())
                              : nlohmann::ordered_json(nullptr);
      if (n.answer) {
        auto answers = nlohmann::ordered_json::array();
        for (const auto& a : n.answer->answers) {
          answers.push_back(nlohmann::ordered_json{{"key", a.key()},
                                                   {"display", a.display()}});
        }
        j["answers"] = std::move(answers);
        j["final_score"] = n.answer->final_score;
        j["depth_forced"] = n.answer->depth_forced;
      }
      nodes.push_back(std::move(j));
    }
    t["nodes"] = std::move(nodes);
    trees.push_back(std::move(t));
  }
  doc["trees"] = std::move(trees);

  auto ranked = nlohmann::ordered_json::array();
  for (const auto& ra : result.ranked) {
    auto answers = nlohmann::ordered_json::array();
    for (const auto& a : ra.answers) answers.push_back(a.display());
    ranked.push_back(nlohmann::ordered_json{{"answers", std::move(answers)},
                                            {"score", ra.final_score},
                                            {"depth_forced", ra.depth_forced},
                                            {"tree", ra.tree_index},
                                            {"leaf", ra.leaf_id}});
  }
  doc["ranked"] = std::move(ranked);
  return doc;
}

std::string trace_to_dot(const nlohmann::ordered_json& trace) {
  if (!trace.contains("schema") || trace["schema"] != "kgr.trace.v1") {
    throw DataError("trace document has an unrecognized schema");
  }
  std::ostringstream out;
  out << "// kgr.dot.v1\n";
  out << "digraph reasoning {\n";
  out << "  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  int tree_idx = 0;
  for (const auto& tree : trace.at("trees")) {
    out << "  subgraph cluster_" << tree_idx << " {\n";
    out << "    label=\"topic: " << dot_escape(tree.at("topic").get<std::string>())
        << "\";\n";
    for (const auto& n : tree.at("nodes")) {
      const int id = n.at("id").get<int>();
      const std::string status = n.at("status").get<std::string>();
      std::ostringstream label;
      label << n.at("label").get<std::string>() << "\\n"
            << n.at("kind").get<std::string>() << " d=" << n.at("depth").get<int>()
            << " s=" << n.at("scores").at("total").get<double>();
      if (!n.at("prune_reason").is_null()) {
        label << "\\n" << n.at("prune_reason").get<std::string>();
      }
      out << "    t" << tree_idx << "_n" << id << " [label=\""
          << dot_escape(label.str()) << "\"";
      if (status == "pruned") {
        out << ", style=filled, fillcolor=gray85, color=gray50";
      } else if (status == "answered") {
        out << ", peripheries=2, style=filled, fillcolor=palegreen";
      }
      out << "];\n";
      if (!n.at("parent").is_null()) {
        out << "    t" << tree_idx << "_n" << n.at("parent").get<int>() << " -> t"
            << tree_idx << "_n" << id << ";\n";
      }
    }
    out << "  }\n";
    ++tree_idx;
  }
  out << "}\n";
  return out.str();
}

}  // namespace kgr::engine
