#include "fragmenta/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "fragmenta/corruption.hpp"
#include "fragmenta/error.hpp"
#include "fragmenta/hashing.hpp"
#include "fragmenta/serialization.hpp"

namespace fragmenta {

using nlohmann::json;

Metric BenchConfig::metric_for(SolverKind kind) const {
  auto it = metric_backend.find(kind);
  return it == metric_backend.end() ? default_metric(kind) : it->second;
}

void BenchConfig::validate() const {
  if (solvers.empty()) throw DataError("config: solvers must not be empty");
  if (sizes.empty()) throw DataError("config: sizes must not be empty");
  for (auto [r, c] : sizes) {
    try {
      PuzzleSpec{r, c, piece_size}.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("config: ") + e.what());
    }
  }
  if (corruption.levels.empty()) throw DataError("config: corruption.levels must not be empty");
  const double cap = corruption.type == CorruptionType::ErodedContents ? 100.0
                     : corruption.type == CorruptionType::None         ? 0.0
                                                                       : 50.0;
  for (double level : corruption.levels) {
    if (!(level >= 0.0 && level <= cap)) {
      throw DataError("config: level " + format_number(level) + " outside [0, " + format_number(cap) + "] for " +
                      std::string(to_string(corruption.type)));
    }
  }
  if (max_images < 0) throw DataError("config: max_images must be >= 0");
}

BenchConfig parse_bench_config(const json& j, const std::filesystem::path& base_dir) {
  try {
    BenchConfig cfg;
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    cfg.corpus_dir = resolve(j.at("corpus_dir").get<std::string>());
    if (j.contains("solvers")) {
      cfg.solvers.clear();
      for (const auto& s : j.at("solvers")) {
        auto kind = parse_solver(s.get<std::string>());
        if (!kind) throw DataError("config: unknown solver " + s.dump());
        cfg.solvers.push_back(*kind);
      }
    }
    if (j.contains("sizes")) {
      cfg.sizes.clear();
      for (const auto& s : j.at("sizes")) {
        if (s.is_array()) cfg.sizes.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
        else cfg.sizes.emplace_back(s.at("rows").get<int>(), s.at("cols").get<int>());
      }
    }
    cfg.piece_size = j.value("piece_size", 32);
    if (j.contains("corruption")) {
      const auto& c = j.at("corruption");
      auto type = parse_corruption_type(c.at("type").get<std::string>());
      if (!type) throw DataError("config: unknown corruption type " + c.at("type").dump());
      cfg.corruption.type = *type;
      cfg.corruption.levels = c.value("levels", std::vector<double>{0.0});
    }
    if (j.contains("metric_backend")) {
      for (const auto& [name, metric] : j.at("metric_backend").items()) {
        auto kind = parse_solver(name);
        auto m = parse_metric(metric.get<std::string>());
        if (!kind || !m) throw DataError("config: bad metric_backend entry '" + name + "'");
        cfg.metric_backend[*kind] = *m;
      }
    }
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.output_dir = resolve(j.value("output_dir", std::string("bench_out")));
    cfg.max_images = j.value("max_images", 0);
    cfg.record_wall_time = j.value("record_wall_time", false);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
}

json to_json(const BenchConfig& cfg) {
  json solvers = json::array();
  for (auto s : cfg.solvers) solvers.push_back(to_string(s));
  json sizes = json::array();
  for (auto [r, c] : cfg.sizes) sizes.push_back({r, c});
  json backend = json::object();
  for (auto s : cfg.solvers) backend[std::string(to_string(s))] = to_string(cfg.metric_for(s));
  return {{"corpus_dir", cfg.corpus_dir.string()},
          {"solvers", solvers},
          {"sizes", sizes},
          {"piece_size", cfg.piece_size},
          {"corruption", {{"type", to_string(cfg.corruption.type)}, {"levels", cfg.corruption.levels}}},
          {"metric_backend", backend},
          {"master_seed", cfg.master_seed},
          {"output_dir", cfg.output_dir.string()},
          {"max_images", cfg.max_images},
          {"record_wall_time", cfg.record_wall_time}};
}

std::uint64_t derive_puzzle_seed(std::uint64_t master_seed, std::string_view source_id, int rows, int cols,
                                 double level_percent) {
  const auto level_milli = static_cast<std::uint64_t>(std::llround(level_percent * 1000.0));
  return combine_seed({master_seed, fnv1a64(source_id), static_cast<std::uint64_t>(rows),
                       static_cast<std::uint64_t>(cols), level_milli});
}

CorruptionSpec corruption_for_level(CorruptionType type, double level_percent, std::uint64_t puzzle_seed) {
  const std::uint64_t seed = combine_seed({puzzle_seed, 1});
  switch (type) {
    case CorruptionType::None: return {CorruptionType::None, 0.0, seed};
    case CorruptionType::MissingPieces:
    case CorruptionType::ErodedEdges: return {type, level_percent / 100.0, seed};
    case CorruptionType::ErodedContents: return {type, level_percent, seed};
  }
  return {};
}

Puzzle prepare_puzzle(const PixelBuffer& image, std::string_view source_id, const PuzzleSpec& spec,
                      CorruptionType type, double level_percent, std::uint64_t master_seed) {
  const std::uint64_t seed = derive_puzzle_seed(master_seed, source_id, spec.rows, spec.cols, level_percent);
  Puzzle puzzle = slice_image(downscale_to_cover(image, spec.pixel_width(), spec.pixel_height()), spec);
  puzzle.source_id = std::string(source_id);
  puzzle = apply_corruption(std::move(puzzle), corruption_for_level(type, level_percent, seed));
  if (type == CorruptionType::MissingPieces) puzzle = substitute_black_patches(std::move(puzzle));
  return shuffle_pieces(std::move(puzzle), combine_seed({seed, 2}));
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRAGMENTA_THREADS")) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct ImageTask {
  std::filesystem::path path;
  std::string source_id;
};

struct TaskOutput {
  std::vector<PuzzleResult> results;
  std::vector<PuzzleSeedEntry> puzzles;
  std::vector<SkippedInput> skipped;
  bool decoded = false;
};

std::vector<ImageTask> list_corpus(const BenchConfig& cfg) {
  std::error_code ec;
  if (!std::filesystem::is_directory(cfg.corpus_dir, ec)) {
    throw IoError("corpus_dir is not a directory: " + cfg.corpus_dir.string());
  }
  std::vector<ImageTask> tasks;
  for (const auto& entry : std::filesystem::directory_iterator(cfg.corpus_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    tasks.push_back({entry.path(), entry.path().stem().string()});
  }
  std::sort(tasks.begin(), tasks.end(), [](const ImageTask& a, const ImageTask& b) { return a.path < b.path; });
  return tasks;
}

TaskOutput run_image(const BenchConfig& cfg, const ImageTask& task) {
  TaskOutput out;
  PixelBuffer image;
  try {
    image = read_image(task.path);
  } catch (const Error& e) {
    out.skipped.push_back({task.path.string(), e.what()});
    return out;
  }
  out.decoded = true;
  for (auto [rows, cols] : cfg.sizes) {
    const PuzzleSpec spec{rows, cols, cfg.piece_size};
    for (double level : cfg.corruption.levels) {
      Puzzle puzzle;
      try {
        puzzle = prepare_puzzle(image, task.source_id, spec, cfg.corruption.type, level, cfg.master_seed);
      } catch (const ImageTooSmall& e) {
        out.skipped.push_back({task.path.string(), e.what()});
        break;
      }
      out.puzzles.push_back({task.source_id, rows, cols, level,
                             derive_puzzle_seed(cfg.master_seed, task.source_id, rows, cols, level)});
      const auto pieces = puzzle.solver_pieces();
      std::map<Metric, MatchTable> tables;
      for (auto solver : cfg.solvers) {
        const auto start = std::chrono::steady_clock::now();
        const Metric metric = cfg.metric_for(solver);
        auto it = tables.find(metric);
        if (it == tables.end()) it = tables.emplace(metric, build_match_table(pieces, metric)).first;
        const Assembly assembly = solve(solver, pieces, it->second, spec);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        PuzzleResult r;
        r.solver = std::string(to_string(solver));
        r.source_id = task.source_id;
        r.rows = rows;
        r.cols = cols;
        r.corruption_type = std::string(to_string(cfg.corruption.type));
        r.level = level;
        r.seed = out.puzzles.back().seed;
        r.direct_comparison = direct_comparison(assembly, puzzle);
        r.perfect = perfect_reconstruction(assembly, puzzle);
        r.wall_time_s = cfg.record_wall_time ? seconds : 0.0;
        out.results.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') fields.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else fields.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <typename T>
T parse_field(const std::string& text, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(std::string("summary.csv: bad ") + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

SweepOutcome compute_sweep(const BenchConfig& config, int threads) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  auto tasks = list_corpus(config);
  if (config.max_images > 0 && static_cast<int>(tasks.size()) > config.max_images) {
    tasks.resize(static_cast<std::size_t>(config.max_images));
  }
  SweepOutcome outcome;
  outcome.threads = resolve_thread_count(threads);
  std::vector<TaskOutput> outputs(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        outputs[k] = run_image(config, tasks[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(outcome.threads, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  bool any_image = false;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    auto& o = outputs[k];
    any_image = any_image || o.decoded;
    for (const auto& s : o.skipped) std::cerr << "skipped " << s.path << ": " << s.reason << "\n";
    std::move(o.results.begin(), o.results.end(), std::back_inserter(outcome.results));
    std::move(o.puzzles.begin(), o.puzzles.end(), std::back_inserter(outcome.puzzles));
    std::move(o.skipped.begin(), o.skipped.end(), std::back_inserter(outcome.skipped));
  }
  if (!any_image) throw EmptyCorpus("no decodable image in " + config.corpus_dir.string());

  std::sort(outcome.results.begin(), outcome.results.end(), [](const PuzzleResult& a, const PuzzleResult& b) {
    return std::tie(a.solver, a.source_id, a.rows, a.cols, a.corruption_type, a.level) <
           std::tie(b.solver, b.source_id, b.rows, b.cols, b.corruption_type, b.level);
  });
  std::sort(outcome.puzzles.begin(), outcome.puzzles.end(), [](const PuzzleSeedEntry& a, const PuzzleSeedEntry& b) {
    return std::tie(a.source_id, a.rows, a.cols, a.level) < std::tie(b.source_id, b.rows, b.cols, b.level);
  });
  outcome.reports = aggregate(outcome.results);
  outcome.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

SweepOutcome run_sweep(const BenchConfig& config, int threads) {
  SweepOutcome outcome = compute_sweep(config, threads);
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
  outcome.written = emit_csv(outcome.results, outcome.reports, config.output_dir);
  for (auto metric : {PlotMetric::DirectComparison, PlotMetric::PerfectRate}) {
    auto files = emit_plot(outcome.reports, metric, config.output_dir);
    outcome.written.insert(outcome.written.end(), files.begin(), files.end());
  }

  json puzzles = json::array();
  for (const auto& p : outcome.puzzles) {
    puzzles.push_back({{"source_id", p.source_id}, {"rows", p.rows}, {"cols", p.cols}, {"level", p.level},
                       {"seed", p.seed}});
  }
  json skipped = json::array();
  for (const auto& s : outcome.skipped) skipped.push_back({{"path", s.path}, {"reason", s.reason}});
  json outputs = json::array();
  for (const auto& f : outcome.written) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64_file(f)));
    outputs.push_back({{"file", f.filename().string()}, {"fnv1a64", hex}});
  }
  const json cfg = to_json(config);
  char cfg_hash[17];
  std::snprintf(cfg_hash, sizeof cfg_hash, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.dump())));
  const json manifest = {{"software_version", kSoftwareVersion},
                         {"config", cfg},
                         {"config_hash", cfg_hash},
                         {"threads", outcome.threads},
                         {"puzzles", puzzles},
                         {"skipped", skipped},
                         {"skipped_count", outcome.skipped.size()},
                         {"timing", {{"total_s", outcome.total_seconds}}},
                         {"outputs", outputs}};
  const auto manifest_path = config.output_dir / "run_manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  outcome.written.push_back(manifest_path);
  return outcome;
}

std::string results_csv(std::span<const PuzzleResult> results) {
  std::ostringstream out;
  out << kResultsHeader << "\n";
  for (const auto& r : results) {
    out << csv_field(r.solver) << ',' << csv_field(r.source_id) << ',' << r.rows << ',' << r.cols << ','
        << csv_field(r.corruption_type) << ',' << format_number(r.level) << ',' << r.seed << ','
        << (r.direct_comparison ? format_number(*r.direct_comparison) : std::string()) << ','
        << (r.perfect ? 1 : 0) << ',' << format_number(r.wall_time_s) << "\n";
  }
  return out.str();
}

std::string summary_csv(std::span<const ExperimentReport> reports) {
  std::ostringstream out;
  out << kSummaryHeader << "\n";
  for (const auto& r : reports) {
    out << csv_field(r.solver) << ',' << r.rows << ',' << r.cols << ',' << csv_field(r.corruption_type) << ','
        << format_number(r.level) << ',' << r.n << ',' << format_number(r.mean_direct_comparison) << ','
        << format_number(r.perfect_rate) << "\n";
  }
  return out.str();
}

std::vector<ExperimentReport> parse_summary_csv(std::string_view text) {
  std::vector<ExperimentReport> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) throw DataError("summary.csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw DataError("summary.csv: expected 8 fields in '" + line + "'");
    out.push_back({f[0], parse_field<int>(f[1], "rows"), parse_field<int>(f[2], "cols"), f[3],
                   parse_field<double>(f[4], "level"), parse_field<int>(f[5], "n"),
                   parse_field<double>(f[6], "mean_direct_comparison"), parse_field<double>(f[7], "perfect_rate")});
  }
  return out;
}

std::vector<std::filesystem::path> emit_csv(std::span<const PuzzleResult> results,
                                            std::span<const ExperimentReport> reports,
                                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto results_path = dir / "results.csv";
  const auto summary_path = dir / "summary.csv";
  write_text(results_path, results_csv(results));
  write_text(summary_path, summary_csv(reports));
  return {results_path, summary_path};
}

std::string_view to_string(PlotMetric metric) {
  return metric == PlotMetric::DirectComparison ? "direct_comparison" : "perfect_rate";
}

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string solver_color(const std::string& solver) {
  if (solver == "gallagher") return "#1f77b4";
  if (solver == "paikin-tal") return "#ff7f0e";
  if (solver == "yu-lp") return "#2ca02c";
  return "#7f7f7f";
}

}  // namespace

std::string plot_svg(std::span<const ExperimentReport> reports, PlotMetric metric) {
  constexpr double width = 640, height = 420, left = 64, right = 150, top = 40, bottom = 56;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  std::set<double> levels;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::string title;
  for (const auto& r : reports) {
    levels.insert(r.level);
    series[r.solver].emplace_back(r.level, metric == PlotMetric::DirectComparison ? r.mean_direct_comparison
                                                                                  : r.perfect_rate);
    title = r.corruption_type + " " + std::to_string(r.rows) + "x" + std::to_string(r.cols);
  }
  const double lo = levels.empty() ? 0.0 : *levels.begin();
  const double hi = levels.empty() ? 1.0 : *levels.rbegin();
  auto sx = [&](double level) { return hi > lo ? left + (level - lo) / (hi - lo) * plot_w : left + plot_w / 2; };
  auto sy = [&](double value) { return top + (100.0 - value) / 100.0 * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
      << " - " << to_string(metric) << "</text>\n";
  for (int v = 0; v <= 100; v += 20) {
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(sy(v)) << "\" x2=\"" << fixed(left + plot_w)
        << "\" y2=\"" << fixed(sy(v)) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(v) + 4) << "\" text-anchor=\"end\">" << v
        << "</text>\n";
  }
  for (double level : levels) {
    svg << "<line x1=\"" << fixed(sx(level)) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(sx(level))
        << "\" y2=\"" << fixed(top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(sx(level)) << "\" y=\"" << fixed(top + plot_h + 20) << "\" text-anchor=\"middle\">"
        << format_number(level) << "</text>\n";
  }
  svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(left + plot_w)
      << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
      << fixed(top + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 12)
      << "\" text-anchor=\"middle\">corruption level (%)</text>\n";
  svg << "<text x=\"16\" y=\"" << fixed(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fixed(top + plot_h / 2) << ")\">" << to_string(metric) << " (%)</text>\n";
  int row = 0;
  for (auto& [solver, points] : series) {
    std::sort(points.begin(), points.end());
    const auto color = solver_color(solver);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      svg << (i ? " " : "") << fixed(sx(points[i].first)) << ',' << fixed(sy(points[i].second));
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : points) {
      svg << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    const double ly = top + 10 + 20 * row++;
    svg << "<line x1=\"" << fixed(width - right + 16) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(width - right + 40) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(width - right + 46) << "\" y=\"" << fixed(ly + 4) << "\">" << solver << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plot(std::span<const ExperimentReport> reports, PlotMetric metric,
                                             const std::filesystem::path& dir) {
  std::map<std::tuple<std::string, int, int>, std::vector<ExperimentReport>> groups;
  for (const auto& r : reports) groups[{r.corruption_type, r.rows, r.cols}].push_back(r);
  std::vector<std::filesystem::path> written;
  for (const auto& [key, members] : groups) {
    const auto& [type, rows, cols] = key;
    const auto path = dir / (type + "_" + std::to_string(rows) + "x" + std::to_string(cols) + "_" +
                             std::string(to_string(metric)) + ".svg");
    write_text(path, plot_svg(members, metric));
    written.push_back(path);
  }
  return written;
}

}  // namespace fragmenta
