#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fragmenta/corruption_types.hpp"
#include "fragmenta/pixel_buffer.hpp"

namespace fragmenta {

struct GridCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

/// Grid geometry of a Type-1 puzzle: rows x cols square pieces of
/// piece_size pixels.
struct PuzzleSpec {
  int rows = 6;
  int cols = 6;
  int piece_size = 32;

  int piece_count() const { return rows * cols; }
  int pixel_width() const { return cols * piece_size; }
  int pixel_height() const { return rows * piece_size; }
  bool contains(GridCell cell) const { return cell.row >= 0 && cell.row < rows && cell.col >= 0 && cell.col < cols; }

  /// Throws std::invalid_argument unless rows, cols in [2, 64] and piece_size >= 4.
  void validate() const;

  friend bool operator==(const PuzzleSpec&, const PuzzleSpec&) = default;
};

enum class PieceStatus { Present, Missing, BlackSubstitute };

struct Piece {
  PieceId id = 0;
  PixelBuffer pixels;
  PieceStatus status = PieceStatus::Present;
  std::array<bool, 4> eroded_sides{};  // indexed by EdgeSide
  std::vector<EffectSeverity> effects;

  bool corrupted() const;
  bool counted() const { return status == PieceStatus::Present; }
};

struct Puzzle {
  PuzzleSpec spec;
  std::vector<Piece> pieces;           // solver input order; Missing pieces are skipped by solvers
  std::vector<GridCell> ground_truth;  // indexed by piece id
  std::optional<CorruptionSpec> corruption;
  CorruptionRecord record;
  std::string source_id;
  std::uint64_t seed = 0;
  PixelBuffer source;  // cropped R*S x C*S image the pieces were cut from

  /// Pieces the solvers receive, in input order.
  std::vector<Piece> solver_pieces() const;

  const Piece& piece(PieceId id) const;
  Piece& piece(PieceId id);
};

/// Partial, injective mapping piece id -> grid cell.
class Assembly {
 public:
  Assembly() = default;
  explicit Assembly(PuzzleSpec spec) : spec_(spec) {}

  const PuzzleSpec& spec() const { return spec_; }

  /// Throws std::invalid_argument if the cell is out of bounds, already
  /// occupied, or the piece is already placed.
  void place(PieceId id, GridCell cell);

  std::optional<GridCell> cell_of(PieceId id) const;
  std::optional<PieceId> piece_at(GridCell cell) const;
  std::size_t size() const { return placements_.size(); }

  /// Placements sorted by piece id.
  const std::vector<std::pair<PieceId, GridCell>>& placements() const { return placements_; }

  friend bool operator==(const Assembly&, const Assembly&) = default;

 private:
  PuzzleSpec spec_;
  std::vector<std::pair<PieceId, GridCell>> placements_;
};

/// Ground-truth assembly over every non-missing piece.
Assembly ground_truth_assembly(const Puzzle& puzzle);

/// Center-crops the image to R*S x C*S and cuts it into pieces with ids in
/// row-major order. Throws ImageTooSmall if either side is too short.
Puzzle slice_image(const PixelBuffer& image, const PuzzleSpec& spec);

/// Seed-deterministic uniform permutation of the piece order.
Puzzle shuffle_pieces(Puzzle puzzle, std::uint64_t seed);

inline constexpr std::uint8_t kEmptyCellGray = 128;

/// Draws the assembly; empty cells are mid-gray and, when mark_errors is
/// set, every counted piece away from its true cell gets a red disk.
PixelBuffer render_assembly(const Assembly& assembly, const Puzzle& puzzle, bool mark_errors);

}  // namespace fragmenta
