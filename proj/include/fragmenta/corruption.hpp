#pragma once

#include <array>
#include <cstdint>

#include "fragmenta/puzzle.hpp"

namespace fragmenta {

/// Number of pieces removed for fraction `rho` of `n` pieces (round half up).
int missing_piece_count(double rho, int n);

/// Marks round-half-up(rho * N) uniformly chosen pieces Missing.
/// rho must lie in [0, 0.5].
Puzzle apply_missing_pieces(Puzzle puzzle, double rho, std::uint64_t seed);

/// Turns every Missing piece into an all-zero BlackSubstitute piece.
Puzzle substitute_black_patches(Puzzle puzzle);

/// Each of the four edges of each piece is eroded with probability p in
/// [0, 0.5]: its two outermost pixel rows/columns take values of pixels
/// drawn uniformly (independently per pixel) from the cropped source image.
Puzzle apply_eroded_edges(Puzzle puzzle, double p, std::uint64_t seed);

/// Erosion factor E in [0, 100]. Each effect independently selects a piece
/// with probability E/100 at a severity drawn around E.
Puzzle apply_eroded_contents(Puzzle puzzle, double erosion_percent, std::uint64_t seed);

/// Dispatches on spec.type; None returns the puzzle unchanged.
Puzzle apply_corruption(Puzzle puzzle, const CorruptionSpec& spec);

inline constexpr double kSeveritySigma = 15.0;
inline constexpr std::array<std::uint8_t, 3> kFlakeColor{220, 214, 200};

/// Snaps a raw severity to the nearest of {10, 20, ..., 100}.
int snap_severity(double raw);

/// Single-piece transfer functions, severity in percent.
void apply_saturation_loss(PixelBuffer& piece, int severity);
void apply_contrast_loss(PixelBuffer& piece, int severity);
void apply_brightness_loss(PixelBuffer& piece, int severity);

struct CorruptionStats {
  int piece_count = 0;
  int missing_count = 0;
  double missing_rate = 0.0;
  int eroded_edge_count = 0;    // recorded (piece, side) pairs
  double eroded_edge_rate = 0.0;  // eroded_edge_count / (4N)
  double mean_edges_per_piece = 0.0;
  std::array<int, 4> effect_counts{};     // indexed by ContentEffect
  std::array<double, 4> effect_rates{};   // effect_counts / N
  std::array<std::array<int, 10>, 4> severity_histogram{};  // [effect][severity/10 - 1]
};

CorruptionStats corruption_stats(const Puzzle& puzzle);

}  // namespace fragmenta
