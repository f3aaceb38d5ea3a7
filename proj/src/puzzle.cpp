#include "fragmenta/puzzle.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "fragmenta/error.hpp"

namespace fragmenta {

std::string_view to_string(EdgeSide side) {
  switch (side) {
    case EdgeSide::North: return "N";
    case EdgeSide::East: return "E";
    case EdgeSide::South: return "S";
    case EdgeSide::West: return "W";
  }
  return "?";
}

std::string_view to_string(ContentEffect effect) {
  switch (effect) {
    case ContentEffect::Saturation: return "saturation";
    case ContentEffect::Contrast: return "contrast";
    case ContentEffect::Brightness: return "brightness";
    case ContentEffect::Flaking: return "flaking";
  }
  return "?";
}

std::string_view to_string(CorruptionType type) {
  switch (type) {
    case CorruptionType::None: return "none";
    case CorruptionType::MissingPieces: return "missing_pieces";
    case CorruptionType::ErodedEdges: return "eroded_edges";
    case CorruptionType::ErodedContents: return "eroded_contents";
  }
  return "?";
}

std::optional<EdgeSide> parse_edge_side(std::string_view text) {
  for (auto side : kAllSides) {
    if (to_string(side) == text) return side;
  }
  return std::nullopt;
}

std::optional<ContentEffect> parse_content_effect(std::string_view text) {
  for (auto effect : kAllEffects) {
    if (to_string(effect) == text) return effect;
  }
  return std::nullopt;
}

std::optional<CorruptionType> parse_corruption_type(std::string_view text) {
  for (auto type : {CorruptionType::None, CorruptionType::MissingPieces, CorruptionType::ErodedEdges,
                    CorruptionType::ErodedContents}) {
    if (to_string(type) == text) return type;
  }
  return std::nullopt;
}

void PuzzleSpec::validate() const {
  if (rows < 2 || rows > 64 || cols < 2 || cols > 64) {
    throw std::invalid_argument("puzzle rows and cols must lie in [2, 64], got " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  if (piece_size < 4) throw std::invalid_argument("piece_size must be at least 4");
}

bool Piece::corrupted() const {
  return std::any_of(eroded_sides.begin(), eroded_sides.end(), [](bool b) { return b; }) || !effects.empty();
}

std::vector<Piece> Puzzle::solver_pieces() const {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    if (p.status != PieceStatus::Missing) out.push_back(p);
  }
  return out;
}

const Piece& Puzzle::piece(PieceId id) const {
  auto it = std::find_if(pieces.begin(), pieces.end(), [id](const Piece& p) { return p.id == id; });
  if (it == pieces.end()) throw std::out_of_range("unknown piece id " + std::to_string(id));
  return *it;
}

Piece& Puzzle::piece(PieceId id) {
  return const_cast<Piece&>(std::as_const(*this).piece(id));
}

void Assembly::place(PieceId id, GridCell cell) {
  if (!spec_.contains(cell)) throw std::invalid_argument("placement outside the grid");
  if (piece_at(cell)) throw std::invalid_argument("grid cell already occupied");
  auto it = std::lower_bound(placements_.begin(), placements_.end(), id,
                             [](const auto& entry, PieceId key) { return entry.first < key; });
  if (it != placements_.end() && it->first == id) throw std::invalid_argument("piece already placed");
  placements_.insert(it, {id, cell});
}

std::optional<GridCell> Assembly::cell_of(PieceId id) const {
  auto it = std::lower_bound(placements_.begin(), placements_.end(), id,
                             [](const auto& entry, PieceId key) { return entry.first < key; });
  if (it != placements_.end() && it->first == id) return it->second;
  return std::nullopt;
}

std::optional<PieceId> Assembly::piece_at(GridCell cell) const {
  for (const auto& [id, c] : placements_) {
    if (c == cell) return id;
  }
  return std::nullopt;
}

Assembly ground_truth_assembly(const Puzzle& puzzle) {
  Assembly a(puzzle.spec);
  for (const auto& p : puzzle.pieces) {
    if (p.status != PieceStatus::Missing) a.place(p.id, puzzle.ground_truth.at(static_cast<std::size_t>(p.id)));
  }
  return a;
}

Puzzle slice_image(const PixelBuffer& image, const PuzzleSpec& spec) {
  spec.validate();
  const int w = spec.pixel_width();
  const int h = spec.pixel_height();
  if (image.width < w || image.height < h) {
    throw ImageTooSmall("image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                        " cannot cover " + std::to_string(w) + "x" + std::to_string(h));
  }
  Puzzle puzzle;
  puzzle.spec = spec;
  puzzle.source = crop(image, (image.width - w) / 2, (image.height - h) / 2, w, h);
  const int s = spec.piece_size;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      Piece piece;
      piece.id = r * spec.cols + c;
      piece.pixels = crop(puzzle.source, c * s, r * s, s, s);
      puzzle.pieces.push_back(std::move(piece));
      puzzle.ground_truth.push_back({r, c});
    }
  }
  return puzzle;
}

Puzzle shuffle_pieces(Puzzle puzzle, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Fisher-Yates from a canonical (id-sorted) order so the result does not
  // depend on any previous shuffle.
  std::sort(puzzle.pieces.begin(), puzzle.pieces.end(), [](const Piece& a, const Piece& b) { return a.id < b.id; });
  for (std::size_t i = puzzle.pieces.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(puzzle.pieces[i - 1], puzzle.pieces[pick(rng)]);
  }
  puzzle.seed = seed;
  return puzzle;
}

PixelBuffer render_assembly(const Assembly& assembly, const Puzzle& puzzle, bool mark_errors) {
  const auto& spec = puzzle.spec;
  const int s = spec.piece_size;
  PixelBuffer out(spec.pixel_width(), spec.pixel_height(), kEmptyCellGray);
  // Disk of diameter S/4 centered on the piece.
  const double radius = std::max(s / 8.0, 0.75);
  const double center = (s - 1) / 2.0;
  for (const auto& [id, cell] : assembly.placements()) {
    const Piece& piece = puzzle.piece(id);
    paste(out, piece.pixels, cell.col * s, cell.row * s);
    const bool wrong = piece.counted() && puzzle.ground_truth.at(static_cast<std::size_t>(id)) != cell;
    if (!mark_errors || !wrong) continue;
    for (int y = 0; y < s; ++y) {
      for (int x = 0; x < s; ++x) {
        double dx = x - center;
        double dy = y - center;
        if (dx * dx + dy * dy <= radius * radius) out.set_rgb(cell.col * s + x, cell.row * s + y, 255, 0, 0);
      }
    }
  }
  return out;
}

}  // namespace fragmenta
