#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mc2/types.hpp"

namespace mc2::serde {

// Canonical trace document: top-level "history" list of iteration records,
// with the role output field names of the trace schema ("final answer",
// "full response text", "error found flag", ...). Round-trips losslessly
// and re-serializes byte-stably (keys are emitted in sorted order).

nlohmann::json trace_to_json(const Trace& trace);
Trace trace_from_json(const nlohmann::json& j, int max_iterations);

std::string serialize_trace(const Trace& trace);
Trace deserialize_trace(const std::string& text, int max_iterations);

nlohmann::json lesson_to_json(const MicroLesson& lesson);
MicroLesson lesson_from_json(const nlohmann::json& j);

nlohmann::json meta_to_json(const MetaKnowledge& k);
MetaKnowledge meta_from_json(const nlohmann::json& j);

nlohmann::json reflection_to_json(const Reflection& r);

}  // namespace mc2::serde
