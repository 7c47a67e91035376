#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgr/kg/types.hpp"

namespace kgr::kg {

// Indexed, immutable triple store.
//
// Triple file: one triple per line, three tab-separated fields
//   subject-id <TAB> relation <TAB> object
// where an object prefixed "lit:" is a literal payload and anything else is
// an entity id. Name file: "id <TAB> label" lines. '#' starts a comment in
// both. Loading deduplicates; after load the graph never mutates, so any
// number of concurrent readers is safe.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  static KnowledgeGraph load(std::istream& triples);
  static KnowledgeGraph load(std::istream& triples, std::istream& names);
  static KnowledgeGraph load_files(const std::string& triples_path,
                                   const std::string& names_path = "");

  std::size_t triple_count() const { return triples_.size(); }
  std::size_t entity_count() const { return entity_ids_.size(); }
  const std::vector<Triple>& triples() const { return triples_; }

  // True when the id occurs anywhere in a triple (subject or object side).
  bool contains(const std::string& entity_id) const;

  std::optional<std::string> name_of(const std::string& id) const;

  // EntityRef for an id, with the label attached when one is known.
  EntityRef entity(const std::string& id) const;

  // NodeValue with label resolution applied to entity objects.
  NodeValue labeled(const NodeValue& v) const;

  // Distinct relations leaving e; empty when e is absent. Sorted.
  std::vector<RelationRef> out_relations(const EntityRef& e) const;

  // Objects o with (e, r, o) in the graph, in canonical key order.
  std::vector<NodeValue> tail_entities(const EntityRef& e,
                                       const RelationRef& r) const;

  // All minimum-depth simple paths topic -> answer with depth <= max_depth,
  // sorted by serialized form. Throws UnknownTopicError when the topic id
  // occurs nowhere in the graph.
  std::vector<ReasoningPath> shortest_paths(const EntityRef& topic,
                                            const NodeValue& answer,
                                            int max_depth) const;

  // All simple paths topic -> answer with depth <= max_depth, same ordering
  // and error behavior as shortest_paths.
  std::vector<ReasoningPath> enumerate_paths(const EntityRef& topic,
                                             const NodeValue& answer,
                                             int max_depth) const;

  // Edge-by-edge revalidation of a path against this graph.
  bool validates(const ReasoningPath& path) const;

  // Answer resolution: id match first, then unique case-insensitive label
  // match, then literal payload match. Empty optional when nothing matches.
  std::optional<NodeValue> resolve(const std::string& id_or_label) const;

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.triples_ == b.triples_ && a.names_ == b.names_;
  }

 private:
  struct Edge {
    std::string relation;
    NodeValue object;
  };

  void add_triple(Triple t);
  void finish_load();

  std::vector<Triple> triples_;  // deduplicated, canonically sorted
  // subject id -> relation -> objects (sorted by key)
  std::map<std::string, std::map<std::string, std::vector<NodeValue>>> fwd_;
  // object key -> (subject id, relation) pairs, for shortest-path backtracking
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> rev_;
  std::map<std::string, std::string> names_;
  std::set<std::string> entity_ids_;  // every id seen on either triple side
  std::set<std::string> node_keys_;   // every node key incl. literals
};

}  // namespace kgr::kg
