#pragma once

#include <string>

#include <json.hpp>

#include "kgr/engine/engine.hpp"

namespace kgr::engine {

// Trace document, schema "kgr.trace.v1": config echo plus one object per
// node (id, parent, depth, kind, content, four sub-scores, total, status,
// prune reason) per topic tree, and the merged answer ranking.
nlohmann::ordered_json trace_to_json(const InferenceResult& result,
                                     const BeamConfig& cfg);

// Graphviz rendering of a trace document. Throws DataError on an
// unrecognized schema.
std::string trace_to_dot(const nlohmann::ordered_json& trace);

nlohmann::ordered_json config_to_json(const BeamConfig& cfg);

}  // namespace kgr::engine
