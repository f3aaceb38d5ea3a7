#include "fragmenta/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fragmenta {

namespace {

void require_range(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    throw std::invalid_argument(std::string(what) + " must lie in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

std::vector<Piece*> pieces_by_id(Puzzle& puzzle) {
  std::vector<Piece*> out;
  for (auto& p : puzzle.pieces) out.push_back(&p);
  std::sort(out.begin(), out.end(), [](const Piece* a, const Piece* b) { return a->id < b->id; });
  return out;
}

void paint_flakes(PixelBuffer& piece, int severity, std::mt19937_64& rng) {
  const int s = piece.width;
  const int lo = std::max(1, s / 8);
  const int hi = std::max(lo, s / 2);
  const auto target = static_cast<std::size_t>(std::ceil(0.5 * severity / 100.0 * s * s));
  std::vector<bool> covered(static_cast<std::size_t>(s) * static_cast<std::size_t>(s), false);
  std::size_t count = 0;
  std::uniform_int_distribution<int> side(lo, hi);
  while (count < target) {
    const int w = side(rng);
    const int h = side(rng);
    const int x0 = std::uniform_int_distribution<int>(0, s - w)(rng);
    const int y0 = std::uniform_int_distribution<int>(0, s - h)(rng);
    for (int y = y0; y < y0 + h; ++y) {
      for (int x = x0; x < x0 + w; ++x) {
        auto k = static_cast<std::size_t>(y) * static_cast<std::size_t>(s) + static_cast<std::size_t>(x);
        if (!covered[k]) {
          covered[k] = true;
          ++count;
        }
        piece.set_rgb(x, y, kFlakeColor[0], kFlakeColor[1], kFlakeColor[2]);
      }
    }
  }
}

}  // namespace

int missing_piece_count(double rho, int n) {
  // The epsilon absorbs binary representation error of decimal fractions,
  // e.g. 0.35 * 10 = 3.4999999999999996.
  return static_cast<int>(std::floor(rho * n + 0.5 + 1e-9));
}

Puzzle apply_missing_pieces(Puzzle puzzle, double rho, std::uint64_t seed) {
  require_range(rho, 0.0, 0.5, "missing-piece fraction");
  auto pieces = pieces_by_id(puzzle);
  const int n = static_cast<int>(pieces.size());
  const int k = missing_piece_count(rho, n);
  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  for (int i = 0; i < k; ++i) {
    Piece* p = pieces[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    p->status = PieceStatus::Missing;
    puzzle.record.removed_ids.push_back(p->id);
  }
  std::sort(puzzle.record.removed_ids.begin(), puzzle.record.removed_ids.end());
  puzzle.corruption = CorruptionSpec{CorruptionType::MissingPieces, rho, seed};
  return puzzle;
}

Puzzle substitute_black_patches(Puzzle puzzle) {
  for (auto& p : puzzle.pieces) {
    if (p.status != PieceStatus::Missing) continue;
    p.status = PieceStatus::BlackSubstitute;
    std::fill(p.pixels.data.begin(), p.pixels.data.end(), std::uint8_t{0});
  }
  return puzzle;
}

Puzzle apply_eroded_edges(Puzzle puzzle, double p, std::uint64_t seed) {
  require_range(p, 0.0, 0.5, "edge erosion probability");
  const PixelBuffer& source = puzzle.source;
  if (!source.valid()) throw std::invalid_argument("edge erosion needs the puzzle's source image");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution select(p);
  std::uniform_int_distribution<int> sx(0, source.width - 1);
  std::uniform_int_distribution<int> sy(0, source.height - 1);
  for (Piece* piece : pieces_by_id(puzzle)) {
    std::array<bool, 4> chosen{};
    for (auto side : kAllSides) chosen[static_cast<std::size_t>(side)] = select(rng);
    if (piece->status == PieceStatus::Missing) continue;
    PixelBuffer& px = piece->pixels;
    const int s = px.width;
    auto overwrite = [&](int x, int y) {
      const int ux = sx(rng);
      const int uy = sy(rng);
      px.set_rgb(x, y, source.at(ux, uy, 0), source.at(ux, uy, 1), source.at(ux, uy, 2));
    };
    std::vector<EdgeSide> sides;
    for (auto side : kAllSides) {
      if (!chosen[static_cast<std::size_t>(side)]) continue;
      sides.push_back(side);
      piece->eroded_sides[static_cast<std::size_t>(side)] = true;
      for (int band = 0; band < 2; ++band) {
        for (int t = 0; t < s; ++t) {
          switch (side) {
            case EdgeSide::North: overwrite(t, band); break;
            case EdgeSide::South: overwrite(t, s - 1 - band); break;
            case EdgeSide::West: overwrite(band, t); break;
            case EdgeSide::East: overwrite(s - 1 - band, t); break;
          }
        }
      }
    }
    if (!sides.empty()) puzzle.record.eroded_edges[piece->id] = std::move(sides);
  }
  puzzle.corruption = CorruptionSpec{CorruptionType::ErodedEdges, p, seed};
  return puzzle;
}

int snap_severity(double raw) {
  const double clamped = std::clamp(raw, 0.0, 100.0);
  const int snapped = static_cast<int>(std::floor(clamped / 10.0 + 0.5)) * 10;
  return std::clamp(snapped, 10, 100);
}

void apply_saturation_loss(PixelBuffer& piece, int severity) {
  const double s = severity / 100.0;
  for (int y = 0; y < piece.height; ++y) {
    for (int x = 0; x < piece.width; ++x) {
      const double luma = 0.299 * piece.at(x, y, 0) + 0.587 * piece.at(x, y, 1) + 0.114 * piece.at(x, y, 2);
      for (int c = 0; c < 3; ++c) {
        const double v = piece.at(x, y, c);
        piece.at(x, y, c) = to_byte(v + (luma - v) * s);
      }
    }
  }
}

void apply_contrast_loss(PixelBuffer& piece, int severity) {
  const double s = severity / 100.0;
  std::array<double, 3> mean{};
  const double n = static_cast<double>(piece.width) * piece.height;
  for (std::size_t i = 0; i < piece.data.size(); ++i) mean[i % 3] += piece.data[i];
  for (auto& m : mean) m /= n;
  for (std::size_t i = 0; i < piece.data.size(); ++i) {
    const double m = mean[i % 3];
    piece.data[i] = to_byte(m + (piece.data[i] - m) * (1.0 - s));
  }
}

void apply_brightness_loss(PixelBuffer& piece, int severity) {
  const double factor = 1.0 - 0.6 * (severity / 100.0);
  for (auto& v : piece.data) v = to_byte(v * factor);
}

Puzzle apply_eroded_contents(Puzzle puzzle, double erosion_percent, std::uint64_t seed) {
  require_range(erosion_percent, 0.0, 100.0, "erosion factor");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution select(erosion_percent / 100.0);
  std::normal_distribution<double> severity(erosion_percent, kSeveritySigma);
  for (Piece* piece : pieces_by_id(puzzle)) {
    std::vector<EffectSeverity> effects;
    for (auto effect : kAllEffects) {
      if (select(rng)) effects.push_back({effect, snap_severity(severity(rng))});
    }
    if (piece->status == PieceStatus::Missing || effects.empty()) continue;
    for (const auto& [effect, sev] : effects) {
      switch (effect) {
        case ContentEffect::Saturation: apply_saturation_loss(piece->pixels, sev); break;
        case ContentEffect::Contrast: apply_contrast_loss(piece->pixels, sev); break;
        case ContentEffect::Brightness: apply_brightness_loss(piece->pixels, sev); break;
        case ContentEffect::Flaking: paint_flakes(piece->pixels, sev, rng); break;
      }
    }
    piece->effects = effects;
    puzzle.record.content_effects[piece->id] = std::move(effects);
  }
  puzzle.corruption = CorruptionSpec{CorruptionType::ErodedContents, erosion_percent, seed};
  return puzzle;
}

Puzzle apply_corruption(Puzzle puzzle, const CorruptionSpec& spec) {
  switch (spec.type) {
    case CorruptionType::None: return puzzle;
    case CorruptionType::MissingPieces: return apply_missing_pieces(std::move(puzzle), spec.amount, spec.seed);
    case CorruptionType::ErodedEdges: return apply_eroded_edges(std::move(puzzle), spec.amount, spec.seed);
    case CorruptionType::ErodedContents: return apply_eroded_contents(std::move(puzzle), spec.amount, spec.seed);
  }
  return puzzle;
}

CorruptionStats corruption_stats(const Puzzle& puzzle) {
  CorruptionStats st;
  st.piece_count = static_cast<int>(puzzle.pieces.size());
  st.missing_count = static_cast<int>(puzzle.record.removed_ids.size());
  for (const auto& [id, sides] : puzzle.record.eroded_edges) st.eroded_edge_count += static_cast<int>(sides.size());
  for (const auto& [id, effects] : puzzle.record.content_effects) {
    for (const auto& [effect, sev] : effects) {
      auto e = static_cast<std::size_t>(effect);
      ++st.effect_counts[e];
      ++st.severity_histogram[e][static_cast<std::size_t>(sev / 10 - 1)];
    }
  }
  if (st.piece_count > 0) {
    const double n = st.piece_count;
    st.missing_rate = st.missing_count / n;
    st.eroded_edge_rate = st.eroded_edge_count / (4.0 * n);
    st.mean_edges_per_piece = st.eroded_edge_count / n;
    for (std::size_t e = 0; e < 4; ++e) st.effect_rates[e] = st.effect_counts[e] / n;
  }
  return st;
}

}  // namespace fragmenta
