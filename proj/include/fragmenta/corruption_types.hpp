#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fragmenta {

using PieceId = int;

enum class EdgeSide { North = 0, East = 1, South = 2, West = 3 };

inline constexpr std::array<EdgeSide, 4> kAllSides{EdgeSide::North, EdgeSide::East, EdgeSide::South,
                                                   EdgeSide::West};

/// Content erosion effects, in the order they are applied.
enum class ContentEffect { Saturation = 0, Contrast = 1, Brightness = 2, Flaking = 3 };

inline constexpr std::array<ContentEffect, 4> kAllEffects{ContentEffect::Saturation, ContentEffect::Contrast,
                                                          ContentEffect::Brightness, ContentEffect::Flaking};

enum class CorruptionType { None, MissingPieces, ErodedEdges, ErodedContents };

/// One corruption family with its parameter in the family's native unit:
/// fraction of pieces for MissingPieces, per-edge probability for
/// ErodedEdges, erosion factor in percent for ErodedContents.
struct CorruptionSpec {
  CorruptionType type = CorruptionType::None;
  double amount = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

struct EffectSeverity {
  ContentEffect effect;
  int severity;  // percent, one of 10, 20, ..., 100

  friend bool operator==(const EffectSeverity&, const EffectSeverity&) = default;
};

/// What a corruption pass actually did, keyed by piece id.
struct CorruptionRecord {
  std::vector<PieceId> removed_ids;                                // ascending
  std::map<PieceId, std::vector<EdgeSide>> eroded_edges;           // sides ascending N,E,S,W
  std::map<PieceId, std::vector<EffectSeverity>> content_effects;  // in application order

  bool empty() const { return removed_ids.empty() && eroded_edges.empty() && content_effects.empty(); }
  friend bool operator==(const CorruptionRecord&, const CorruptionRecord&) = default;
};

std::string_view to_string(EdgeSide side);       // "N" | "E" | "S" | "W"
std::string_view to_string(ContentEffect effect);  // "saturation" | ...
std::string_view to_string(CorruptionType type);   // "none" | "missing_pieces" | ...

std::optional<EdgeSide> parse_edge_side(std::string_view text);
std::optional<ContentEffect> parse_content_effect(std::string_view text);
std::optional<CorruptionType> parse_corruption_type(std::string_view text);

}  // namespace fragmenta
