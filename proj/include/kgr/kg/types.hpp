#pragma once

#include <string>
#include <variant>
#include <vector>

namespace kgr::kg {

// Graph entity. Identity is the id alone; the name is a display label and
// never participates in equality or ordering.
struct EntityRef {
  std::string id;
  std::string name;  // empty = unnamed, renders as the raw id

  const std::string& display() const { return name.empty() ? id : name; }

  friend bool operator==(const EntityRef& a, const EntityRef& b) {
    return a.id == b.id;
  }
  friend bool operator<(const EntityRef& a, const EntityRef& b) {
    return a.id < b.id;
  }
};

// Hierarchical relation name, e.g. "location.country.adjoins".
struct RelationRef {
  std::vector<std::string> segments;

  // Parses the dotted form. Throws DataError on empty/whitespace segments.
  static RelationRef parse(const std::string& dotted);

  std::string str() const;

  friend bool operator==(const RelationRef& a, const RelationRef& b) {
    return a.segments == b.segments;
  }
  friend bool operator<(const RelationRef& a, const RelationRef& b) {
    return a.segments < b.segments;
  }
};

struct Literal {
  std::string value;
  std::string kind = "text";

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.value == b.value && a.kind == b.kind;
  }
};

// Object position of a triple: an entity or a literal, never both.
class NodeValue {
 public:
  NodeValue() : node_(EntityRef{}) {}
  NodeValue(EntityRef e) : node_(std::move(e)) {}
  NodeValue(Literal l) : node_(std::move(l)) {}

  bool is_entity() const { return std::holds_alternative<EntityRef>(node_); }
  bool is_literal() const { return !is_entity(); }
  const EntityRef& entity() const { return std::get<EntityRef>(node_); }
  const Literal& literal() const { return std::get<Literal>(node_); }

  // Canonical sort/dedup key: entity id, or "lit:" + payload.
  std::string key() const;

  // Human-facing form: entity label (or id when unnamed), literal payload.
  std::string display() const;

  friend bool operator==(const NodeValue& a, const NodeValue& b) {
    if (a.is_entity() != b.is_entity()) return false;
    if (a.is_entity()) return a.entity() == b.entity();
    return a.literal() == b.literal();
  }
  friend bool operator<(const NodeValue& a, const NodeValue& b) {
    return a.key() < b.key();
  }

 private:
  std::variant<EntityRef, Literal> node_;
};

struct Triple {
  EntityRef subject;
  RelationRef relation;
  NodeValue object;

  // Tab-joined canonical form used for dedup and ordering.
  std::string key() const;

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.subject == b.subject && a.relation == b.relation &&
           a.object == b.object;
  }
};

struct ReasoningHop {
  RelationRef relation;
  NodeValue node;

  friend bool operator==(const ReasoningHop& a, const ReasoningHop& b) {
    return a.relation == b.relation && a.node == b.node;
  }
};

// Alternating entity/relation walk from a topic entity. Depth = hop count;
// a depth-0 path is just the topic itself.
struct ReasoningPath {
  EntityRef topic;
  std::vector<ReasoningHop> hops;

  int depth() const { return static_cast<int>(hops.size()); }

  // Key of the walk's last node (the topic for depth 0).
  std::string terminal_key() const;

  // The last node as a NodeValue (the topic for depth 0).
  NodeValue terminal() const;

  // Canonical serialized form, " -> " joined; doubles as the sort key.
  std::string key() const;

  ReasoningPath extended(const RelationRef& r, const NodeValue& n) const;

  friend bool operator==(const ReasoningPath& a, const ReasoningPath& b) {
    return a.topic == b.topic && a.hops == b.hops;
  }
};

}  // namespace kgr::kg
