#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fragmenta/bench.hpp"
#include "fragmenta/corruption.hpp"
#include "fragmenta/error.hpp"
#include "fragmenta/evaluation.hpp"
#include "fragmenta/serialization.hpp"
#include "fragmenta/solvers.hpp"

namespace fragmenta::cli {

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

// Raised for argument values CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path manifest_path(const std::string& p) {
  std::filesystem::path path(p);
  return std::filesystem::is_directory(path) ? path / "manifest.json" : path;
}

int cmd_slice(const std::string& image_path, int rows, int cols, int piece_size, std::uint64_t seed,
              std::string source_id, const std::string& out_dir) {
  PuzzleSpec spec{rows, cols, piece_size};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const PixelBuffer image = read_image(image_path);
  Puzzle puzzle = slice_image(image, spec);
  puzzle.source_id = source_id.empty() ? std::filesystem::path(image_path).stem().string() : std::move(source_id);
  puzzle = shuffle_pieces(std::move(puzzle), seed);
  export_puzzle(puzzle, out_dir);
  std::cout << "wrote " << puzzle.pieces.size() << " pieces to " << out_dir << "\n";
  return 0;
}

int cmd_corrupt(const std::string& puzzle_path, const std::string& type_name, double level, std::uint64_t seed,
                bool substitute, const std::string& out_dir) {
  auto type = parse_corruption_type(type_name);
  if (!type) throw UsageError("unknown corruption type '" + type_name + "'");
  const double cap = *type == CorruptionType::ErodedContents ? 100.0 : 50.0;
  if (!(level >= 0.0 && level <= cap)) throw UsageError("level outside [0, " + format_number(cap) + "]");
  Puzzle puzzle = import_puzzle(manifest_path(puzzle_path));
  if (puzzle.corruption) throw DataError("puzzle is already corrupted");
  const double amount = *type == CorruptionType::ErodedContents ? level : level / 100.0;
  puzzle = apply_corruption(std::move(puzzle), CorruptionSpec{*type, amount, seed});
  if (*type == CorruptionType::MissingPieces && substitute) puzzle = substitute_black_patches(std::move(puzzle));
  export_puzzle(puzzle, out_dir);
  const auto st = corruption_stats(puzzle);
  std::cout << "missing=" << st.missing_count << " eroded_edges=" << st.eroded_edge_count
            << " content_effects=" << st.effect_counts[0] + st.effect_counts[1] + st.effect_counts[2] + st.effect_counts[3]
            << "\n";
  return 0;
}

int cmd_solve(const std::string& puzzle_path, const std::string& solver_name, const std::string& metric_name,
              const std::string& out_path, const std::string& table_csv) {
  auto solver = parse_solver(solver_name);
  if (!solver) throw UsageError("unknown solver '" + solver_name + "'");
  Metric metric = default_metric(*solver);
  if (!metric_name.empty()) {
    auto m = parse_metric(metric_name);
    if (!m) throw UsageError("unknown metric '" + metric_name + "'");
    metric = *m;
  }
  const Puzzle puzzle = import_puzzle(manifest_path(puzzle_path));
  const auto pieces = puzzle.solver_pieces();
  MatchTable table;
  if (pieces.size() >= 2) table = build_match_table(pieces, metric);
  if (!table_csv.empty()) {
    std::ofstream out(table_csv);
    if (!out) throw IoError("cannot write " + table_csv);
    write_match_table_csv(table, out);
  }
  const Assembly assembly = solve(*solver, pieces, table, puzzle.spec);
  write_text(out_path, to_json(assembly).dump(2) + "\n");
  return 0;
}

int cmd_eval(const std::string& puzzle_path, const std::string& assembly_path) {
  const Puzzle puzzle = import_puzzle(manifest_path(puzzle_path));
  const Assembly assembly = assembly_from_json(read_json(assembly_path));
  if (assembly.spec() != puzzle.spec) throw DataError("assembly and puzzle grids differ");
  const auto dc = direct_comparison(assembly, puzzle);
  nlohmann::json j = {{"direct_comparison", dc ? nlohmann::json(*dc) : nlohmann::json(nullptr)},
                      {"perfect", perfect_reconstruction(assembly, puzzle)}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_bench(const std::string& config_path, int threads) {
  const BenchConfig cfg = parse_bench_config(read_json(config_path), std::filesystem::path(config_path).parent_path());
  const auto outcome = run_sweep(cfg, threads);
  std::cout << outcome.results.size() << " puzzle results, " << outcome.reports.size() << " groups -> "
            << cfg.output_dir.string() << "\n";
  return 0;
}

int cmd_plot(const std::string& summary_path, const std::string& out_dir) {
  std::ifstream in(summary_path);
  if (!in) throw IoError("cannot read " + summary_path);
  std::stringstream text;
  text << in.rdbuf();
  const auto reports = parse_summary_csv(text.str());
  if (reports.empty()) throw DataError("summary has no rows");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir);
  std::size_t files = 0;
  for (auto metric : {PlotMetric::DirectComparison, PlotMetric::PerfectRate}) {
    files += emit_plot(reports, metric, out_dir).size();
  }
  std::cout << "wrote " << files << " plots to " << out_dir << "\n";
  return 0;
}

int cmd_render(const std::string& puzzle_path, const std::string& assembly_path, const std::string& out_path,
               bool no_marks) {
  const Puzzle puzzle = import_puzzle(manifest_path(puzzle_path));
  const Assembly assembly = assembly_from_json(read_json(assembly_path));
  if (assembly.spec() != puzzle.spec) throw DataError("assembly and puzzle grids differ");
  for (const auto& [id, cell] : assembly.placements()) {
    if (id < 0 || id >= puzzle.spec.piece_count()) throw DataError("assembly places unknown piece");
  }
  write_png(render_assembly(assembly, puzzle, !no_marks), out_path);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Type-1 jigsaw puzzle solving and corruption benchmark"};
  app.require_subcommand(1);

  std::string image, puzzle, out, source_id, type, solver, metric, assembly, config, summary, table_csv;
  int rows = 6, cols = 6, piece_size = 32, threads = 0;
  std::uint64_t seed = 0;
  double level = 0.0;
  bool no_substitute = false, no_marks = false;

  auto* slice = app.add_subcommand("slice", "cut an image into a shuffled puzzle export");
  slice->add_option("--image", image, "PNG or JPEG image")->required();
  slice->add_option("--rows", rows, "grid rows");
  slice->add_option("--cols", cols, "grid columns");
  slice->add_option("--piece-size", piece_size, "piece side in pixels");
  slice->add_option("--seed", seed, "shuffle seed");
  slice->add_option("--source-id", source_id, "identifier recorded in the manifest");
  slice->add_option("--out", out, "output directory")->required();

  auto* corrupt = app.add_subcommand("corrupt", "apply one corruption family to a puzzle export");
  corrupt->add_option("--puzzle", puzzle, "manifest.json or export directory")->required();
  corrupt->add_option("--type", type, "missing_pieces | eroded_edges | eroded_contents")->required();
  corrupt->add_option("--level", level, "level in percent")->required();
  corrupt->add_option("--seed", seed, "corruption seed");
  corrupt->add_flag("--no-substitute", no_substitute, "keep missing pieces out instead of black patches");
  corrupt->add_option("--out", out, "output directory")->required();

  auto* solve_cmd = app.add_subcommand("solve", "reassemble a puzzle export");
  solve_cmd->add_option("--puzzle", puzzle, "manifest.json or export directory")->required();
  solve_cmd->add_option("--solver", solver, "gallagher | paikin-tal | yu-lp")->required();
  solve_cmd->add_option("--metric", metric, "mgc | l1pred (default depends on solver)");
  solve_cmd->add_option("--table-csv", table_csv, "also dump the match table as CSV");
  solve_cmd->add_option("--out", out, "assembly JSON path")->required();

  auto* eval = app.add_subcommand("eval", "score an assembly against the puzzle's ground truth");
  eval->add_option("--puzzle", puzzle, "manifest.json or export directory")->required();
  eval->add_option("--assembly", assembly, "assembly JSON")->required();

  auto* bench = app.add_subcommand("bench", "run a configured corruption sweep");
  bench->add_option("--config", config, "bench JSON config")->required();
  bench->add_option("--threads", threads, "worker count (0 = FRAGMENTA_THREADS or hardware)");

  auto* plot = app.add_subcommand("plot", "draw SVG charts from summary.csv");
  plot->add_option("--summary", summary, "summary.csv")->required();
  plot->add_option("--out", out, "output directory")->required();

  auto* render = app.add_subcommand("render", "draw an assembly, marking misplaced pieces");
  render->add_option("--puzzle", puzzle, "manifest.json or export directory")->required();
  render->add_option("--assembly", assembly, "assembly JSON")->required();
  render->add_option("--out", out, "output PNG")->required();
  render->add_flag("--no-marks", no_marks, "do not draw red dots");

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*slice) return cmd_slice(image, rows, cols, piece_size, seed, source_id, out);
    if (*corrupt) return cmd_corrupt(puzzle, type, level, seed, !no_substitute, out);
    if (*solve_cmd) return cmd_solve(puzzle, solver, metric, out, table_csv);
    if (*eval) return cmd_eval(puzzle, assembly);
    if (*bench) return cmd_bench(config, threads);
    if (*plot) return cmd_plot(summary, out);
    if (*render) return cmd_render(puzzle, assembly, out, no_marks);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace fragmenta::cli
