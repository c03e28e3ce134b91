#pragma once

#include <string>

#include "json.hpp"
#include "mtswarm/arena.hpp"
#include "mtswarm/error.hpp"

namespace mtswarm::mission::detail {

template <typename T>
T field_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(where + ": field '" + key + "': " + e.what());
    }
}

ArenaConfig arena_from_json(const nlohmann::json& obj, const std::string& where);
nlohmann::json arena_to_json(const ArenaConfig& arena);

/// Parses JSON text, mapping syntax errors to FormatError with line:column.
nlohmann::json parse_json(std::string_view text, const std::string& where);

}  // namespace mtswarm::mission::detail
