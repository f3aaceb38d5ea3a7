#pragma once

#include <filesystem>

#include "json.hpp"

#include "fragmenta/puzzle.hpp"

namespace fragmenta {

nlohmann::json to_json(const PuzzleSpec& spec);
PuzzleSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CorruptionSpec& spec, const CorruptionRecord& record);
std::pair<CorruptionSpec, CorruptionRecord> corruption_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Assembly& assembly);
Assembly assembly_from_json(const nlohmann::json& j);

/// Manifest of a puzzle export; piece pixels live in sibling PNG files.
nlohmann::json puzzle_manifest(const Puzzle& puzzle);

/// Writes `piece_<id>.png` for every non-missing piece, `source.png` and
/// `manifest.json` into `dir` (created if needed).
void export_puzzle(const Puzzle& puzzle, const std::filesystem::path& dir);

/// Reads an export given its manifest path or directory. Missing pieces get
/// all-zero pixels.
Puzzle import_puzzle(const std::filesystem::path& manifest_or_dir);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace fragmenta
