#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fragmenta/compatibility.hpp"
#include "fragmenta/evaluation.hpp"
#include "fragmenta/solvers.hpp"

namespace fragmenta {

inline constexpr const char* kSoftwareVersion = "0.1.0";

struct SweepCorruption {
  CorruptionType type = CorruptionType::None;
  std::vector<double> levels{0.0};  // percent for every type
};

struct BenchConfig {
  std::filesystem::path corpus_dir;
  std::vector<SolverKind> solvers{SolverKind::Gallagher, SolverKind::PaikinTal, SolverKind::YuLp};
  std::vector<std::pair<int, int>> sizes{{6, 6}};
  int piece_size = 32;
  SweepCorruption corruption;
  std::map<SolverKind, Metric> metric_backend;  // overrides default_metric()
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "bench_out";
  int max_images = 0;             // 0 = whole corpus
  bool record_wall_time = false;  // false writes 0 so results.csv is reproducible

  Metric metric_for(SolverKind kind) const;
  /// Throws DataError on out-of-range levels, sizes or empty solver lists.
  void validate() const;
};

/// Parses the JSON config; relative paths resolve against `base_dir`.
BenchConfig parse_bench_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const BenchConfig& config);

/// Stable per-puzzle seed; independent of execution order and solver.
std::uint64_t derive_puzzle_seed(std::uint64_t master_seed, std::string_view source_id, int rows, int cols,
                                 double level_percent);

/// Corruption parameter in its native unit for a sweep level in percent.
CorruptionSpec corruption_for_level(CorruptionType type, double level_percent, std::uint64_t puzzle_seed);

/// Slice, corrupt, substitute black patches, shuffle: the solver input for
/// one (image, size, level) cell of a sweep.
Puzzle prepare_puzzle(const PixelBuffer& image, std::string_view source_id, const PuzzleSpec& spec,
                      CorruptionType type, double level_percent, std::uint64_t master_seed);

/// Worker count: `requested` if positive, else FRAGMENTA_THREADS if
/// positive, else the hardware concurrency.
int resolve_thread_count(int requested = 0);

struct SkippedInput {
  std::string path;
  std::string reason;
};

struct PuzzleSeedEntry {
  std::string source_id;
  int rows, cols;
  double level;
  std::uint64_t seed;
};

struct SweepOutcome {
  std::vector<PuzzleResult> results;        // sorted by key
  std::vector<ExperimentReport> reports;    // sorted by key
  std::vector<PuzzleSeedEntry> puzzles;     // sorted by key
  std::vector<SkippedInput> skipped;
  std::vector<std::filesystem::path> written;
  double total_seconds = 0.0;
  int threads = 1;
};

/// Runs the sweep and writes results.csv, summary.csv, one SVG per (size,
/// metric) and run_manifest.json to config.output_dir.
SweepOutcome run_sweep(const BenchConfig& config, int threads = 0);

/// In-memory part of run_sweep (no files written).
SweepOutcome compute_sweep(const BenchConfig& config, int threads = 0);

inline constexpr const char* kResultsHeader =
    "solver,source_id,rows,cols,corruption_type,level,seed,direct_comparison,perfect,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "solver,rows,cols,corruption_type,level,n,mean_direct_comparison,perfect_rate";

std::string results_csv(std::span<const PuzzleResult> results);
std::string summary_csv(std::span<const ExperimentReport> reports);
std::vector<ExperimentReport> parse_summary_csv(std::string_view text);

/// Writes results.csv and summary.csv; returns their paths.
std::vector<std::filesystem::path> emit_csv(std::span<const PuzzleResult> results,
                                            std::span<const ExperimentReport> reports,
                                            const std::filesystem::path& dir);

enum class PlotMetric { DirectComparison, PerfectRate };

/// SVG line chart for one (corruption type, size) group: x = level, y in
/// [0, 100], one polyline per solver.
std::string plot_svg(std::span<const ExperimentReport> reports, PlotMetric metric);

std::string_view to_string(PlotMetric metric);  // "direct_comparison" | "perfect_rate"

/// One SVG per (corruption type, size) named
/// `<type>_<rows>x<cols>_<metric>.svg`.
std::vector<std::filesystem::path> emit_plot(std::span<const ExperimentReport> reports, PlotMetric metric,
                                             const std::filesystem::path& dir);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace fragmenta
