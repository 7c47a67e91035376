#include "kgr/kg/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <functional>
#include <istream>
#include <unordered_map>

#include "kgr/error.hpp"

namespace kgr::kg {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

constexpr const char* kLiteralPrefix = "lit:";

}  // namespace

void KnowledgeGraph::add_triple(Triple t) {
  entity_ids_.insert(t.subject.id);
  node_keys_.insert(t.subject.id);
  node_keys_.insert(t.object.key());
  if (t.object.is_entity()) entity_ids_.insert(t.object.entity().id);
  triples_.push_back(std::move(t));
}

void KnowledgeGraph::finish_load() {
  std::sort(triples_.begin(), triples_.end(),
            [](const Triple& a, const Triple& b) { return a.key() < b.key(); });
  triples_.erase(std::unique(triples_.begin(), triples_.end(),
                             [](const Triple& a, const Triple& b) {
                               return a.key() == b.key();
                             }),
                 triples_.end());
  for (const auto& t : triples_) {
    auto& objects = fwd_[t.subject.id][t.relation.str()];
    objects.push_back(t.object);  // triples_ is sorted, so objects stay sorted
    rev_[t.object.key()].emplace_back(t.subject.id, t.relation.str());
  }
}

KnowledgeGraph KnowledgeGraph::load(std::istream& triples) {
  KnowledgeGraph g;
  std::string line;
  std::size_t row = 0;
  while (std::getline(triples, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw DataError("triple file line " + std::to_string(row) +
                      ": expected 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    const auto& [subj, rel, obj] = std::tie(fields[0], fields[1], fields[2]);
    if (subj.empty() || obj.empty()) {
      throw DataError("triple file line " + std::to_string(row) +
                      ": empty subject or object");
    }
    Triple t;
    t.subject = EntityRef{subj, ""};
    try {
      t.relation = RelationRef::parse(rel);
    } catch (const DataError& e) {
      throw DataError("triple file line " + std::to_string(row) + ": " +
                      e.what());
    }
    if (obj.rfind(kLiteralPrefix, 0) == 0) {
      t.object = NodeValue(Literal{obj.substr(4)});
    } else {
      t.object = NodeValue(EntityRef{obj, ""});
    }
    g.add_triple(std::move(t));
  }
  g.finish_load();
  return g;
}

KnowledgeGraph KnowledgeGraph::load(std::istream& triples,
                                    std::istream& names) {
  KnowledgeGraph g = load(triples);
  std::string line;
  std::size_t row = 0;
  while (std::getline(names, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw DataError("name file line " + std::to_string(row) +
                      ": expected 'id<TAB>label'");
    }
    auto [it, inserted] = g.names_.emplace(fields[0], fields[1]);
    if (!inserted) {
      throw DataError("name file line " + std::to_string(row) +
                      ": duplicate name binding for id '" + fields[0] + "'");
    }
  }
  return g;
}

KnowledgeGraph KnowledgeGraph::load_files(const std::string& triples_path,
                                          const std::string& names_path) {
  std::ifstream tf(triples_path);
  if (!tf) throw DataError("cannot open triple file: " + triples_path);
  if (names_path.empty()) return load(tf);
  std::ifstream nf(names_path);
  if (!nf) throw DataError("cannot open name file: " + names_path);
  return load(tf, nf);
}

bool KnowledgeGraph::contains(const std::string& entity_id) const {
  return node_keys_.count(entity_id) > 0;
}

std::optional<std::string> KnowledgeGraph::name_of(const std::string& id) const {
  auto it = names_.find(id);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

EntityRef KnowledgeGraph::entity(const std::string& id) const {
  auto it = names_.find(id);
  return EntityRef{id, it == names_.end() ? std::string() : it->second};
}

NodeValue KnowledgeGraph::labeled(const NodeValue& v) const {
  if (!v.is_entity()) return v;
  return NodeValue(entity(v.entity().id));
}

std::vector<RelationRef> KnowledgeGraph::out_relations(const EntityRef& e) const {
  std::vector<RelationRef> out;
  auto it = fwd_.find(e.id);
  if (it == fwd_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& [rel, _] : it->second) out.push_back(RelationRef::parse(rel));
  return out;  // map iteration keeps these sorted
}

std::vector<NodeValue> KnowledgeGraph::tail_entities(const EntityRef& e,
                                                     const RelationRef& r) const {
  auto it = fwd_.find(e.id);
  if (it == fwd_.end()) return {};
  auto jt = it->second.find(r.str());
  if (jt == it->second.end()) return {};
  std::vector<NodeValue> out;
  out.reserve(jt->second.size());
  for (const auto& v : jt->second) out.push_back(labeled(v));
  return out;
}

std::vector<ReasoningPath> KnowledgeGraph::shortest_paths(
    const EntityRef& topic, const NodeValue& answer, int max_depth) const {
  if (max_depth < 0) throw DomainError("max_depth must be >= 0");
  if (!contains(topic.id)) {
    throw UnknownTopicError("unknown topic entity: " + topic.id);
  }
  const std::string answer_key = answer.key();

  // Level-synchronous BFS from the topic; literals have no out-edges.
  std::unordered_map<std::string, int> dist;
  dist[topic.id] = 0;
  std::deque<std::string> frontier{topic.id};
  int answer_depth = topic.id == answer_key ? 0 : -1;
  int d = 0;
  while (!frontier.empty() && answer_depth < 0 && d < max_depth) {
    ++d;
    std::deque<std::string> next;
    for (const auto& u : frontier) {
      auto it = fwd_.find(u);
      if (it == fwd_.end()) continue;
      for (const auto& [rel, objects] : it->second) {
        for (const auto& o : objects) {
          const std::string k = o.key();
          if (dist.emplace(k, d).second) next.push_back(k);
          if (k == answer_key) answer_depth = d;
        }
      }
    }
    frontier.swap(next);
  }
  if (answer_depth < 0) return {};
  if (answer_depth == 0) return {ReasoningPath{entity(topic.id), {}}};

  // Walk predecessors backward along strictly decreasing BFS depth.
  std::vector<ReasoningPath> out;
  std::vector<ReasoningHop> suffix;
  std::function<void(const std::string&, int)> back = [&](const std::string& key,
                                                          int depth) {
    if (depth == 0) {
      if (key != topic.id) return;
      ReasoningPath p{entity(topic.id), {}};
      p.hops.assign(suffix.rbegin(), suffix.rend());
      out.push_back(std::move(p));
      return;
    }
    auto it = rev_.find(key);
    if (it == rev_.end()) return;
    NodeValue node = labeled(key.rfind("lit:", 0) == 0
                                 ? NodeValue(Literal{key.substr(4)})
                                 : NodeValue(EntityRef{key, ""}));
    for (const auto& [subj, rel] : it->second) {
      auto dit = dist.find(subj);
      if (dit == dist.end() || dit->second != depth - 1) continue;
      suffix.push_back(ReasoningHop{RelationRef::parse(rel), node});
      back(subj, depth - 1);
      suffix.pop_back();
    }
  };
  back(answer_key, answer_depth);

  std::sort(out.begin(), out.end(), [](const ReasoningPath& a,
                                       const ReasoningPath& b) {
    return a.key() < b.key();
  });
  return out;
}

std::vector<ReasoningPath> KnowledgeGraph::enumerate_paths(
    const EntityRef& topic, const NodeValue& answer, int max_depth) const {
  if (max_depth < 0) throw DomainError("max_depth must be >= 0");
  if (!contains(topic.id)) {
    throw UnknownTopicError("unknown topic entity: " + topic.id);
  }
  const std::string answer_key = answer.key();

  std::vector<ReasoningPath> out;
  std::set<std::string> visited{topic.id};
  std::vector<ReasoningHop> prefix;
  std::function<void(const std::string&)> walk = [&](const std::string& node) {
    if (node == answer_key) {
      ReasoningPath p{entity(topic.id), prefix};
      out.push_back(std::move(p));
      // The answer node may still be an interior node of a longer simple
      // path, but extending past it cannot reach the answer again (no
      // repeated nodes), so stop here.
      return;
    }
    if (static_cast<int>(prefix.size()) >= max_depth) return;
    auto it = fwd_.find(node);
    if (it == fwd_.end()) return;
    for (const auto& [rel, objects] : it->second) {
      for (const auto& o : objects) {
        const std::string k = o.key();
        if (visited.count(k)) continue;
        visited.insert(k);
        prefix.push_back(ReasoningHop{RelationRef::parse(rel), labeled(o)});
        walk(k);
        prefix.pop_back();
        visited.erase(k);
      }
    }
  };
  walk(topic.id);

  std::sort(out.begin(), out.end(), [](const ReasoningPath& a,
                                       const ReasoningPath& b) {
    return a.key() < b.key();
  });
  return out;
}

bool KnowledgeGraph::validates(const ReasoningPath& path) const {
  std::string at = path.topic.id;
  for (const auto& hop : path.hops) {
    auto it = fwd_.find(at);
    if (it == fwd_.end()) return false;
    auto jt = it->second.find(hop.relation.str());
    if (jt == it->second.end()) return false;
    const std::string want = hop.node.key();
    bool found = false;
    for (const auto& o : jt->second) {
      if (o.key() == want) {
        found = true;
        break;
      }
    }
    if (!found) return false;
    at = want;
  }
  return true;
}

std::optional<NodeValue> KnowledgeGraph::resolve(
    const std::string& id_or_label) const {
  if (contains(id_or_label)) {
    if (node_keys_.count(id_or_label) && entity_ids_.count(id_or_label)) {
      return NodeValue(entity(id_or_label));
    }
  }
  // Unique case-insensitive label match.
  const std::string want = lower(id_or_label);
  std::optional<NodeValue> hit;
  for (const auto& [id, label] : names_) {
    if (lower(label) == want && entity_ids_.count(id)) {
      if (hit) return std::nullopt;  // ambiguous
      hit = NodeValue(entity(id));
    }
  }
  if (hit) return hit;
  const std::string lit_key = "lit:" + id_or_label;
  if (node_keys_.count(lit_key)) return NodeValue(Literal{id_or_label});
  return std::nullopt;
}

}  // namespace kgr::kg
