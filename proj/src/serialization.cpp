#include "fragmenta/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fragmenta/error.hpp"

namespace fragmenta {

using nlohmann::json;

namespace {

std::string_view to_string(PieceStatus s) {
  switch (s) {
    case PieceStatus::Present: return "present";
    case PieceStatus::Missing: return "missing";
    case PieceStatus::BlackSubstitute: return "black_substitute";
  }
  return "?";
}

PieceStatus parse_status(const std::string& s) {
  if (s == "present") return PieceStatus::Present;
  if (s == "missing") return PieceStatus::Missing;
  if (s == "black_substitute") return PieceStatus::BlackSubstitute;
  throw DataError("unknown piece status '" + s + "'");
}

json effects_to_json(const std::vector<EffectSeverity>& effects) {
  json arr = json::array();
  for (const auto& e : effects) arr.push_back({{"effect", to_string(e.effect)}, {"severity", e.severity}});
  return arr;
}

std::vector<EffectSeverity> effects_from_json(const json& arr) {
  std::vector<EffectSeverity> out;
  for (const auto& e : arr) {
    auto effect = parse_content_effect(e.at("effect").get<std::string>());
    if (!effect) throw DataError("unknown content effect " + e.at("effect").dump());
    out.push_back({*effect, e.at("severity").get<int>()});
  }
  return out;
}

json sides_to_json(const std::vector<EdgeSide>& sides) {
  json arr = json::array();
  for (auto s : sides) arr.push_back(to_string(s));
  return arr;
}

std::vector<EdgeSide> sides_from_json(const json& arr) {
  std::vector<EdgeSide> out;
  for (const auto& s : arr) {
    auto side = parse_edge_side(s.get<std::string>());
    if (!side) throw DataError("unknown edge side " + s.dump());
    out.push_back(*side);
  }
  return out;
}

}  // namespace

json to_json(const PuzzleSpec& spec) {
  return {{"rows", spec.rows}, {"cols", spec.cols}, {"piece_size", spec.piece_size}};
}

PuzzleSpec spec_from_json(const json& j) {
  PuzzleSpec spec{j.at("rows").get<int>(), j.at("cols").get<int>(), j.value("piece_size", 32)};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return spec;
}

json to_json(const CorruptionSpec& spec, const CorruptionRecord& record) {
  json edges = json::array();
  for (const auto& [id, sides] : record.eroded_edges) edges.push_back({{"id", id}, {"sides", sides_to_json(sides)}});
  json contents = json::array();
  for (const auto& [id, effects] : record.content_effects) {
    contents.push_back({{"id", id}, {"effects", effects_to_json(effects)}});
  }
  return {{"type", to_string(spec.type)},
          {"amount", spec.amount},
          {"seed", spec.seed},
          {"removed_ids", record.removed_ids},
          {"eroded_edges", edges},
          {"content_effects", contents}};
}

std::pair<CorruptionSpec, CorruptionRecord> corruption_from_json(const json& j) {
  auto type = parse_corruption_type(j.at("type").get<std::string>());
  if (!type) throw DataError("unknown corruption type " + j.at("type").dump());
  CorruptionSpec spec{*type, j.at("amount").get<double>(), j.at("seed").get<std::uint64_t>()};
  CorruptionRecord record;
  record.removed_ids = j.value("removed_ids", std::vector<PieceId>{});
  for (const auto& e : j.value("eroded_edges", json::array())) {
    record.eroded_edges[e.at("id").get<PieceId>()] = sides_from_json(e.at("sides"));
  }
  for (const auto& e : j.value("content_effects", json::array())) {
    record.content_effects[e.at("id").get<PieceId>()] = effects_from_json(e.at("effects"));
  }
  return {spec, record};
}

json to_json(const Assembly& assembly) {
  json placements = json::array();
  for (const auto& [id, cell] : assembly.placements()) {
    placements.push_back({{"id", id}, {"row", cell.row}, {"col", cell.col}});
  }
  return {{"spec", to_json(assembly.spec())}, {"placements", placements}};
}

Assembly assembly_from_json(const json& j) {
  try {
    Assembly a(spec_from_json(j.at("spec")));
    for (const auto& p : j.at("placements")) {
      a.place(p.at("id").get<PieceId>(), {p.at("row").get<int>(), p.at("col").get<int>()});
    }
    return a;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed assembly: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid assembly: ") + e.what());
  }
}

json puzzle_manifest(const Puzzle& puzzle) {
  json order = json::array();
  json pieces = json::array();
  std::vector<const Piece*> by_id;
  for (const auto& p : puzzle.pieces) {
    order.push_back(p.id);
    by_id.push_back(&p);
  }
  std::sort(by_id.begin(), by_id.end(), [](const Piece* a, const Piece* b) { return a->id < b->id; });
  for (const Piece* p : by_id) {
    std::vector<EdgeSide> sides;
    for (auto s : kAllSides) {
      if (p->eroded_sides[static_cast<std::size_t>(s)]) sides.push_back(s);
    }
    json file = p->status == PieceStatus::Missing ? json(nullptr) : json("piece_" + std::to_string(p->id) + ".png");
    pieces.push_back({{"id", p->id},
                      {"status", to_string(p->status)},
                      {"file", file},
                      {"eroded_sides", sides_to_json(sides)},
                      {"effects", effects_to_json(p->effects)}});
  }
  json truth = json::array();
  for (std::size_t id = 0; id < puzzle.ground_truth.size(); ++id) {
    truth.push_back({{"id", id}, {"row", puzzle.ground_truth[id].row}, {"col", puzzle.ground_truth[id].col}});
  }
  return {{"format", "fragmenta-puzzle/1"},
          {"spec", to_json(puzzle.spec)},
          {"source_id", puzzle.source_id},
          {"seed", puzzle.seed},
          {"source", puzzle.source.valid() ? json("source.png") : json(nullptr)},
          {"order", order},
          {"ground_truth", truth},
          {"pieces", pieces},
          {"corruption", puzzle.corruption ? to_json(*puzzle.corruption, puzzle.record) : json(nullptr)}};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void export_puzzle(const Puzzle& puzzle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& p : puzzle.pieces) {
    if (p.status != PieceStatus::Missing) write_png(p.pixels, dir / ("piece_" + std::to_string(p.id) + ".png"));
  }
  if (puzzle.source.valid()) write_png(puzzle.source, dir / "source.png");
  write_text(dir / "manifest.json", puzzle_manifest(puzzle).dump(2) + "\n");
}

Puzzle import_puzzle(const std::filesystem::path& manifest_or_dir) {
  const auto manifest_path = std::filesystem::is_directory(manifest_or_dir) ? manifest_or_dir / "manifest.json"
                                                                             : manifest_or_dir;
  const auto dir = manifest_path.parent_path();
  const json m = read_json(manifest_path);
  try {
    Puzzle puzzle;
    puzzle.spec = spec_from_json(m.at("spec"));
    puzzle.source_id = m.value("source_id", std::string{});
    puzzle.seed = m.value("seed", std::uint64_t{0});
    const int s = puzzle.spec.piece_size;
    const auto n = static_cast<std::size_t>(puzzle.spec.piece_count());
    puzzle.ground_truth.assign(n, {});
    std::vector<bool> seen(n, false);
    for (const auto& g : m.at("ground_truth")) {
      const auto id = g.at("id").get<std::size_t>();
      if (id >= n || seen[id]) throw DataError("ground truth ids must be 0..N-1 without repeats");
      seen[id] = true;
      puzzle.ground_truth[id] = {g.at("row").get<int>(), g.at("col").get<int>()};
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw DataError("ground truth incomplete");
    std::map<PieceId, Piece> pieces;
    for (const auto& pj : m.at("pieces")) {
      Piece p;
      p.id = pj.at("id").get<PieceId>();
      p.status = parse_status(pj.at("status").get<std::string>());
      for (auto side : sides_from_json(pj.value("eroded_sides", json::array()))) {
        p.eroded_sides[static_cast<std::size_t>(side)] = true;
      }
      p.effects = effects_from_json(pj.value("effects", json::array()));
      if (p.status == PieceStatus::Missing || pj.at("file").is_null()) {
        p.pixels = PixelBuffer(s, s, 0);
      } else {
        p.pixels = read_image(dir / pj.at("file").get<std::string>());
        if (p.pixels.width != s || p.pixels.height != s) {
          throw DataError("piece " + std::to_string(p.id) + " is not " + std::to_string(s) + "x" + std::to_string(s));
        }
      }
      pieces.emplace(p.id, std::move(p));
    }
    for (const auto& id : m.at("order")) {
      auto it = pieces.find(id.get<PieceId>());
      if (it == pieces.end()) throw DataError("order lists unknown piece " + id.dump());
      puzzle.pieces.push_back(std::move(it->second));
      pieces.erase(it);
    }
    if (!pieces.empty() || puzzle.pieces.size() != n) throw DataError("order must list every piece exactly once");
    if (m.contains("source") && !m.at("source").is_null()) {
      puzzle.source = read_image(dir / m.at("source").get<std::string>());
    }
    if (m.contains("corruption") && !m.at("corruption").is_null()) {
      auto [spec, record] = corruption_from_json(m.at("corruption"));
      puzzle.corruption = spec;
      puzzle.record = std::move(record);
    }
    return puzzle;
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
}

}  // namespace fragmenta
