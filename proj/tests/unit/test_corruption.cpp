#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "fragmenta/corruption.hpp"
#include "synthetic.hpp"

using namespace fragmenta;

namespace {

Puzzle small_puzzle(std::uint64_t seed, int rows = 6, int cols = 6, int s = 16) {
  return slice_image(testing::detailed_image(cols * s, rows * s, seed), {rows, cols, s});
}

// 4096 pieces of side 8.
Puzzle large_puzzle(std::uint64_t seed) { return small_puzzle(seed, 64, 64, 8); }

}  // namespace

TEST_CASE("missing piece counts") {
  CHECK(missing_piece_count(0.5, 144) == 72);
  CHECK(missing_piece_count(0.1, 36) == 4);
  CHECK(missing_piece_count(0.0, 36) == 0);
  CHECK(missing_piece_count(0.25, 2) == 1);
  CHECK(missing_piece_count(0.35, 10) == 4);
}

TEST_CASE("missing pieces marks exactly k pieces") {
  const Puzzle pz = small_puzzle(1);
  const Puzzle out = apply_missing_pieces(pz, 0.1, 9);
  CHECK(out.record.removed_ids.size() == 4);
  CHECK(std::is_sorted(out.record.removed_ids.begin(), out.record.removed_ids.end()));
  int missing = 0;
  for (const auto& p : out.pieces) missing += p.status == PieceStatus::Missing;
  CHECK(missing == 4);
  CHECK(out.ground_truth == pz.ground_truth);
  CHECK(out.solver_pieces().size() == 32);
  for (auto id : out.record.removed_ids) CHECK(out.piece(id).status == PieceStatus::Missing);

  const Puzzle none = apply_missing_pieces(pz, 0.0, 9);
  CHECK(none.record.removed_ids.empty());
  for (const auto& p : none.pieces) CHECK(p.status == PieceStatus::Present);
  CHECK_THROWS_AS(apply_missing_pieces(pz, 0.51, 1), std::invalid_argument);
}

TEST_CASE("missing piece choice covers ids uniformly") {
  const Puzzle pz = small_puzzle(1, 2, 5, 8);
  std::vector<int> hits(10, 0);
  const int trials = 5000;
  for (int s = 0; s < trials; ++s) {
    for (auto id : apply_missing_pieces(pz, 0.2, static_cast<std::uint64_t>(s)).record.removed_ids) ++hits[id];
  }
  const double expected = trials * 0.2;
  const double sigma = std::sqrt(trials * 0.2 * 0.8);
  for (int h : hits) CHECK(std::abs(h - expected) < 5 * sigma);
}

TEST_CASE("black substitution") {
  const Puzzle pz = apply_missing_pieces(small_puzzle(2), 2.0 / 36.0, 4);
  const Puzzle out = substitute_black_patches(pz);
  CHECK(out.solver_pieces().size() == 36);
  int black = 0;
  for (const auto& p : out.pieces) {
    if (p.status != PieceStatus::BlackSubstitute) continue;
    ++black;
    CHECK(std::all_of(p.pixels.data.begin(), p.pixels.data.end(), [](auto v) { return v == 0; }));
    CHECK_FALSE(p.counted());
  }
  CHECK(black == 2);
  CHECK(out.ground_truth == pz.ground_truth);
  CHECK(out.record == pz.record);

  const Puzzle clean = small_puzzle(2);
  const Puzzle same = substitute_black_patches(clean);
  for (std::size_t i = 0; i < clean.pieces.size(); ++i) CHECK(same.pieces[i].pixels == clean.pieces[i].pixels);
}

TEST_CASE("eroded edges touch only flagged bands") {
  const Puzzle pz = small_puzzle(3);
  const Puzzle out = apply_eroded_edges(pz, 0.5, 11);
  REQUIRE_FALSE(out.record.eroded_edges.empty());
  for (const auto& p : out.pieces) {
    const auto& before = pz.piece(p.id).pixels;
    const int s = before.width;
    auto flagged = [&](EdgeSide side) { return p.eroded_sides[static_cast<std::size_t>(side)]; };
    auto rec = out.record.eroded_edges.find(p.id);
    std::vector<EdgeSide> sides = rec == out.record.eroded_edges.end() ? std::vector<EdgeSide>{} : rec->second;
    for (auto side : kAllSides) CHECK(flagged(side) == (std::find(sides.begin(), sides.end(), side) != sides.end()));
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x) {
        const bool in_band = (flagged(EdgeSide::North) && y < 2) || (flagged(EdgeSide::South) && y >= s - 2) ||
                             (flagged(EdgeSide::West) && x < 2) || (flagged(EdgeSide::East) && x >= s - 2);
        if (!in_band)
          for (int c = 0; c < 3; ++c) CHECK(p.pixels.at(x, y, c) == before.at(x, y, c));
      }
  }
  const Puzzle none = apply_eroded_edges(pz, 0.0, 11);
  CHECK(none.record.eroded_edges.empty());
  CHECK(apply_eroded_edges(pz, 0.5, 11).pieces[5].pixels == out.pieces[5].pixels);
  CHECK_THROWS_AS(apply_eroded_edges(pz, 0.6, 11), std::invalid_argument);
}

TEST_CASE("eroded edge samples come from the source image") {
  Puzzle pz = slice_image(PixelBuffer(32, 32, 0), {2, 2, 16});
  for (int x = 0; x < 32; ++x) pz.source.set_rgb(x, 0, 1, 2, 3);
  for (int y = 1; y < 32; ++y)
    for (int x = 0; x < 32; ++x) pz.source.set_rgb(x, y, 9, 9, 9);
  const Puzzle out = apply_eroded_edges(pz, 0.5, 2);
  for (const auto& [id, sides] : out.record.eroded_edges) {
    const auto& px = out.piece(id).pixels;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const bool a = px.at(x, y, 0) == 0 && px.at(x, y, 1) == 0 && px.at(x, y, 2) == 0;
        const bool b = px.at(x, y, 0) == 1 && px.at(x, y, 1) == 2 && px.at(x, y, 2) == 3;
        const bool c = px.at(x, y, 0) == 9 && px.at(x, y, 1) == 9 && px.at(x, y, 2) == 9;
        CHECK((a || b || c));
      }
  }
}

TEST_CASE("eroded edges average two per piece at p = 0.5") {
  CorruptionStats total{};
  int pieces = 0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto st = corruption_stats(apply_eroded_edges(large_puzzle(s), 0.5, 100 + s));
    pieces += st.piece_count;
    total.eroded_edge_count += st.eroded_edge_count;
    CHECK(st.eroded_edge_rate == doctest::Approx(st.eroded_edge_count / (4.0 * st.piece_count)));
  }
  REQUIRE(pieces >= 10000);
  CHECK(std::abs(double(total.eroded_edge_count) / pieces - 2.0) < 0.05);
}

TEST_CASE("severity snapping") {
  CHECK(snap_severity(-20) == 10);
  CHECK(snap_severity(0) == 10);
  CHECK(snap_severity(14.99) == 10);
  CHECK(snap_severity(15) == 20);
  CHECK(snap_severity(44) == 40);
  CHECK(snap_severity(95) == 100);
  CHECK(snap_severity(180) == 100);
}

TEST_CASE("content effect transfer functions") {
  PixelBuffer px(2, 1);
  px.set_rgb(0, 0, 200, 101, 0);
  px.set_rgb(1, 0, 0, 50, 250);
  PixelBuffer sat = px;
  apply_saturation_loss(sat, 100);
  CHECK(sat.at(0, 0, 0) == sat.at(0, 0, 1));
  CHECK(sat.at(0, 0, 0) == 119);
  CHECK(sat.at(0, 0, 2) == 119);
  PixelBuffer con = px;
  apply_contrast_loss(con, 100);
  CHECK(con.at(0, 0, 0) == 100);
  CHECK(con.at(1, 0, 0) == 100);
  CHECK(con.at(0, 0, 2) == 125);
  PixelBuffer con_half = px;
  apply_contrast_loss(con_half, 50);
  CHECK(con_half.at(0, 0, 0) == 150);
  PixelBuffer bri = px;
  apply_brightness_loss(bri, 100);
  CHECK(bri.at(0, 0, 0) == 80);
  CHECK(bri.at(1, 0, 2) == 100);
  PixelBuffer same = px;
  apply_saturation_loss(same, 0);
  apply_contrast_loss(same, 0);
  apply_brightness_loss(same, 0);
  CHECK(same == px);
}

TEST_CASE("eroded contents extremes") {
  const Puzzle pz = small_puzzle(5);
  const Puzzle none = apply_eroded_contents(pz, 0, 3);
  CHECK(none.record.content_effects.empty());
  for (std::size_t i = 0; i < pz.pieces.size(); ++i) CHECK(none.pieces[i].pixels == pz.pieces[i].pixels);

  const Puzzle all = apply_eroded_contents(pz, 100, 3);
  REQUIRE(all.record.content_effects.size() == 36);
  for (const auto& [id, effects] : all.record.content_effects) {
    REQUIRE(effects.size() == 4);
    for (std::size_t e = 0; e < 4; ++e) CHECK(effects[e].effect == kAllEffects[e]);
    CHECK(all.piece(id).effects == effects);
  }
  // Flaking covers at least 0.5 * severity percent of the piece.
  const auto& px = all.pieces[0].pixels;
  const int sev = all.record.content_effects.at(all.pieces[0].id)[3].severity;
  int flake = 0;
  for (int y = 0; y < px.height; ++y)
    for (int x = 0; x < px.width; ++x)
      flake += px.at(x, y, 0) == kFlakeColor[0] && px.at(x, y, 1) == kFlakeColor[1] && px.at(x, y, 2) == kFlakeColor[2];
  CHECK(flake * 200 >= sev * px.width * px.height);
  CHECK(sev >= 10);
  CHECK_THROWS_AS(apply_eroded_contents(pz, 101, 1), std::invalid_argument);
}

TEST_CASE("eroded contents selection rate and severity mode") {
  std::array<int, 4> counts{};
  std::array<std::array<int, 10>, 4> hist{};
  int pieces = 0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto st = corruption_stats(apply_eroded_contents(large_puzzle(10 + s), 30, 200 + s));
    pieces += st.piece_count;
    for (std::size_t e = 0; e < 4; ++e) {
      counts[e] += st.effect_counts[e];
      for (std::size_t b = 0; b < 10; ++b) hist[e][b] += st.severity_histogram[e][b];
    }
  }
  REQUIRE(pieces >= 10000);
  for (std::size_t e = 0; e < 4; ++e) {
    CHECK(std::abs(double(counts[e]) / pieces - 0.30) < 0.01);
    const auto mode = std::max_element(hist[e].begin(), hist[e].end()) - hist[e].begin();
    CHECK((mode + 1) * 10 == 30);
  }
}

TEST_CASE("content erosion keeps dimensions and is deterministic") {
  const Puzzle pz = small_puzzle(6);
  const Puzzle a = apply_eroded_contents(pz, 60, 8), b = apply_eroded_contents(pz, 60, 8);
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    CHECK(a.pieces[i].pixels == b.pieces[i].pixels);
    CHECK(a.pieces[i].pixels.width == 16);
    CHECK(a.pieces[i].pixels.valid());
  }
  CHECK(a.record == b.record);
}

TEST_CASE("corruption stats") {
  const Puzzle pz = small_puzzle(7, 12, 12, 8);
  const auto clean = corruption_stats(pz);
  CHECK(clean.missing_count == 0);
  CHECK(clean.eroded_edge_count == 0);
  CHECK(clean.effect_counts == std::array<int, 4>{});
  const auto half = corruption_stats(apply_missing_pieces(pz, 0.5, 1));
  CHECK(half.missing_count == 72);
  CHECK(half.missing_rate == 0.5);
}

TEST_CASE("dispatch through corruption spec") {
  const Puzzle pz = small_puzzle(8);
  const Puzzle a = apply_corruption(pz, {CorruptionType::ErodedEdges, 0.3, 5});
  const Puzzle b = apply_eroded_edges(pz, 0.3, 5);
  CHECK(a.record == b.record);
  REQUIRE(a.corruption);
  CHECK(*a.corruption == CorruptionSpec{CorruptionType::ErodedEdges, 0.3, 5});
  CHECK_FALSE(apply_corruption(pz, {CorruptionType::None, 0, 0}).corruption);
}

TEST_CASE("enum names round trip") {
  for (auto t : {CorruptionType::None, CorruptionType::MissingPieces, CorruptionType::ErodedEdges,
                 CorruptionType::ErodedContents})
    CHECK(parse_corruption_type(to_string(t)) == t);
  CHECK(to_string(EdgeSide::West) == "W");
  CHECK(to_string(ContentEffect::Flaking) == "flaking");
  CHECK_FALSE(parse_corruption_type("noise"));
}
