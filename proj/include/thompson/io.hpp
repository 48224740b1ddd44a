#pragma once

#include <string>

#include "json.hpp"

#include "thompson/plmap.hpp"

namespace thompson {

/// Element file layout (version 1):
///   {"version": 1, "space": "interval" | "circle",
///    "points": [{"x": [m, k], "y": [m, k]}, ...]}
/// where m/2^k is the coordinate in canonical form; m is a JSON number
/// when |m| <= 2^53 - 1 and a decimal string beyond. A canonicalizing
/// write is byte-stable under read-then-write.
nlohmann::json element_to_json(const PLMap& g);

/// Throws ParseError on malformed JSON or a structurally invalid element.
PLMap element_from_json(const nlohmann::json& j);

void write_element(const std::string& path, const PLMap& g);
PLMap read_element(const std::string& path);

} // namespace thompson
