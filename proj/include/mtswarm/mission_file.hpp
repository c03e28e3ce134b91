#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mtswarm/mission.hpp"

/// JSON mission and secrets files.
///
/// Mission:
///   {"version": 1, "mission_kind": "foraging" | "maze",
///    "operations": [{"sensor": "...", "action": "..."}, ...],
///    "arena": {...}, "robots": 4, "seed": 1, "label": "..."}
/// Every arena key is optional and falls back to the ArenaConfig default.
namespace mtswarm::mission {

/// Throws FormatError with line/column context on malformed JSON or fields.
MissionSpec parse_mission(std::string_view text);
MissionSpec load_mission(const std::filesystem::path& path);
std::string dump_mission(const MissionSpec& spec);

std::string dump_secrets(const OperatorSecrets& secrets);
OperatorSecrets parse_secrets(std::string_view text);

/// Arena block alone; used by mission files and sweep plans.
ArenaConfig parse_arena(std::string_view json_text);
std::string dump_arena(const ArenaConfig& arena);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mtswarm::mission
