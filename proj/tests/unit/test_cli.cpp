#include <filesystem>

#include "doctest.h"

#include "cli.hpp"
#include "fragmenta/serialization.hpp"
#include "scratch.hpp"
#include "synthetic.hpp"

using namespace fragmenta;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "fragmenta");
  return cli::run(args);
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}) == 1);
  CHECK(run({"shuffle"}) == 1);
  CHECK(run({"slice", "--rows", "6"}) == 1);
  CHECK(run({"solve", "--puzzle", "x", "--solver", "nope", "--out", "y"}) == 1);
  CHECK(run({"slice", "--image", "x.png", "--rows", "1", "--out", "y"}) == 1);
}

TEST_CASE("io and data errors exit with 2") {
  const auto dir = testing::scratch_dir("cli_err");
  CHECK(run({"slice", "--image", (dir / "missing.png").string(), "--out", (dir / "p").string()}) == 2);
  CHECK(run({"eval", "--puzzle", (dir / "nothing").string(), "--assembly", (dir / "a.json").string()}) == 2);
  write_png(PixelBuffer(10, 10), dir / "tiny.png");
  CHECK(run({"slice", "--image", (dir / "tiny.png").string(), "--out", (dir / "p").string()}) == 2);
  CHECK(run({"bench", "--config", (dir / "none.json").string()}) == 2);
}

TEST_CASE("slice, corrupt, solve, eval and render") {
  const auto dir = testing::scratch_dir("cli_flow");
  write_png(testing::smooth_gradient_image(128, 128, 2), dir / "img.png");
  const auto p = (dir / "puzzle").string();
  REQUIRE(run({"slice", "--image", (dir / "img.png").string(), "--rows", "4", "--cols", "4", "--seed", "3", "--out", p}) == 0);
  const Puzzle pz = import_puzzle(p);
  CHECK(pz.source_id == "img");
  CHECK(pz.pieces.size() == 16);

  for (const char* solver : {"gallagher", "paikin-tal", "yu-lp"}) {
    const auto out = (dir / (std::string(solver) + ".json")).string();
    REQUIRE(run({"solve", "--puzzle", p, "--solver", solver, "--out", out}) == 0);
    CHECK(run({"eval", "--puzzle", p + "/manifest.json", "--assembly", out}) == 0);
    CHECK(assembly_from_json(read_json(out)).size() == 16);
  }
  CHECK(run({"solve", "--puzzle", p, "--solver", "yu-lp", "--metric", "l1pred", "--table-csv",
             (dir / "table.csv").string(), "--out", (dir / "l1.json").string()}) == 0);
  CHECK(std::filesystem::exists(dir / "table.csv"));

  // Swap two pieces and render.
  Assembly truth = ground_truth_assembly(pz), swapped(pz.spec);
  for (const auto& [id, cell] : truth.placements()) {
    const PieceId other = id == 0 ? 5 : (id == 5 ? 0 : id);
    swapped.place(other, cell);
  }
  write_text(dir / "swapped.json", to_json(swapped).dump());
  REQUIRE(run({"render", "--puzzle", p, "--assembly", (dir / "swapped.json").string(), "--out",
               (dir / "render.png").string()}) == 0);
  const auto img = read_image(dir / "render.png");
  CHECK(img.width == 128);
  int red = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int x = c * 32 + 16, y = r * 32 + 16;
      red += img.at(x, y, 0) == 255 && img.at(x, y, 1) == 0 && img.at(x, y, 2) == 0;
    }
  CHECK(red == 2);
  REQUIRE(run({"render", "--puzzle", p, "--assembly", (dir / "swapped.json").string(), "--out",
               (dir / "plain.png").string(), "--no-marks"}) == 0);
  CHECK(read_image(dir / "plain.png") != img);

  const auto c = (dir / "corrupted").string();
  REQUIRE(run({"corrupt", "--puzzle", p, "--type", "missing_pieces", "--level", "25", "--seed", "1", "--out", c}) == 0);
  const Puzzle cz = import_puzzle(c);
  CHECK(cz.record.removed_ids.size() == 4);
  CHECK(run({"corrupt", "--puzzle", c, "--type", "eroded_edges", "--level", "10", "--out", (dir / "twice").string()}) == 2);
  CHECK(run({"corrupt", "--puzzle", p, "--type", "eroded_edges", "--level", "70", "--out", (dir / "x").string()}) == 1);
  CHECK(run({"corrupt", "--puzzle", p, "--type", "fog", "--level", "10", "--out", (dir / "x").string()}) == 1);
  REQUIRE(run({"solve", "--puzzle", c, "--solver", "gallagher", "--out", (dir / "c.json").string()}) == 0);
  CHECK(run({"render", "--puzzle", c, "--assembly", (dir / "c.json").string(), "--out", (dir / "c.png").string()}) == 0);
}

TEST_CASE("bench and plot") {
  const auto dir = testing::scratch_dir("cli_bench");
  testing::write_detailed_corpus(dir / "corpus", 2, 64, 64, 3);
  write_text(dir / "cfg.json", R"({"corpus_dir": "corpus", "sizes": [[2, 3]], "piece_size": 16,
    "corruption": {"type": "eroded_contents", "levels": [0, 40]}, "master_seed": 1, "output_dir": "out"})");
  REQUIRE(run({"bench", "--config", (dir / "cfg.json").string(), "--threads", "2"}) == 0);
  CHECK(std::filesystem::exists(dir / "out" / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "eroded_contents_2x3_perfect_rate.svg"));
  REQUIRE(run({"plot", "--summary", (dir / "out" / "summary.csv").string(), "--out", (dir / "plots").string()}) == 0);
  CHECK(std::filesystem::exists(dir / "plots" / "eroded_contents_2x3_direct_comparison.svg"));
  write_text(dir / "bad.json", R"({"corpus_dir": "corpus", "solvers": ["x"]})");
  CHECK(run({"bench", "--config", (dir / "bad.json").string()}) == 2);
}
