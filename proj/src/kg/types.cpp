#include "kgr/kg/types.hpp"

#include <cctype>
#include <sstream>

#include "kgr/error.hpp"

namespace kgr::kg {

namespace {

bool has_whitespace(const std::string& s) {
  for (unsigned char c : s) {
    if (std::isspace(c)) return true;
  }
  return false;
}

}  // namespace

RelationRef RelationRef::parse(const std::string& dotted) {
  if (dotted.empty()) throw DataError("relation is empty");
  if (has_whitespace(dotted)) {
    throw DataError("relation contains whitespace: '" + dotted + "'");
  }
  RelationRef r;
  std::string seg;
  std::stringstream ss(dotted);
  while (std::getline(ss, seg, '.')) {
    if (seg.empty()) {
      throw DataError("relation has an empty segment: '" + dotted + "'");
    }
    r.segments.push_back(seg);
  }
  if (r.segments.empty()) {
    throw DataError("relation has no segments: '" + dotted + "'");
  }
  return r;
}

std::string RelationRef::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '.';
    out += segments[i];
  }
  return out;
}

std::string NodeValue::key() const {
  if (is_entity()) return entity().id;
  return "lit:" + literal().value;
}

std::string NodeValue::display() const {
  if (is_entity()) return entity().display();
  return literal().value;
}

std::string Triple::key() const {
  return subject.id + '\t' + relation.str() + '\t' + object.key();
}

std::string ReasoningPath::terminal_key() const {
  if (hops.empty()) return topic.id;
  return hops.back().node.key();
}

NodeValue ReasoningPath::terminal() const {
  if (hops.empty()) return NodeValue(topic);
  return hops.back().node;
}

std::string ReasoningPath::key() const {
  std::string out = topic.id;
  for (const auto& h : hops) {
    out += " -> ";
    out += h.relation.str();
    out += " -> ";
    out += h.node.key();
  }
  return out;
}

ReasoningPath ReasoningPath::extended(const RelationRef& r,
                                      const NodeValue& n) const {
  ReasoningPath p = *this;
  p.hops.push_back(ReasoningHop{r, n});
  return p;
}

}  // namespace kgr::kg
