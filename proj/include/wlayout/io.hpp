#pragma once

// File formats (space, layout, Pareto set), ASCII rendering, manual layout
// import and manual-vs-front comparison. All files are JSON; coordinates are
// [row, col], zero-based, row 0 at the top.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wlayout/constraints.hpp"
#include "wlayout/refine.hpp"
#include "wlayout/scoring.hpp"
#include "wlayout/search.hpp"

namespace wlayout {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

constexpr char to_char(CellKind kind) {
  switch (kind) {
    case CellKind::Wall: return 'W';
    case CellKind::DoorConnection: return 'D';
    case CellKind::Pillar: return 'P';
    case CellKind::Reserved: return 'R';
    case CellKind::Storage: return 'S';
    case CellKind::Aisle: return '.';
    case CellKind::PickFace: return 'F';
  }
  return '?';
}

inline CellKind kind_from_char(char ch, Coord where) {
  switch (ch) {
    case 'W': return CellKind::Wall;
    case 'D': return CellKind::DoorConnection;
    case 'P': return CellKind::Pillar;
    case 'R': return CellKind::Reserved;
    case 'S': return CellKind::Storage;
    case '.': return CellKind::Aisle;
    case 'F': return CellKind::PickFace;
    default: break;
  }
  throw Error(ErrorCode::ParseError,
              std::string("unknown cell character '") + ch + "' at " + SpaceSpec::format(where));
}

// One line per row, no trailing newline.
inline std::string render_ascii(const Layout& layout) {
  std::string out;
  out.reserve(static_cast<std::size_t>(layout.height()) * (layout.width() + 1));
  for (int r = 0; r < layout.height(); ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < layout.width(); ++c) out.push_back(to_char(layout.at(r, c)));
  }
  return out;
}

inline std::vector<std::string> grid_rows(const Layout& layout) {
  std::vector<std::string> rows;
  std::istringstream in(render_ascii(layout));
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

// Splits ASCII grid text into rows, ignoring a trailing newline and CRs.
inline std::vector<std::string> parse_ascii(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(line);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  return rows;
}

// ---------------------------------------------------------------------------
// Space files

struct SweepOverrides {
  std::optional<std::size_t> beam_size;
  std::optional<int> max_depth;
  std::optional<std::vector<SweepPoint>> grid;
};

struct SpaceFile {
  SpacePtr space;
  SweepOverrides sweep;
  std::vector<Refiner> refiners;
};

namespace detail {

inline Json coords_to_json(const std::vector<Coord>& cells) {
  Json out = Json::array();
  for (const Coord& c : cells) out.push_back({c.row, c.col});
  return out;
}

inline std::vector<Coord> coords_from_json(const Json& j, const char* field) {
  std::vector<Coord> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(field) + " must be an array");
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError, std::string(field) + " entries must be [row, col]");
    }
    out.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }
  return out;
}

template <class T>
T required(const Json& j, const char* field) {
  if (!j.contains(field)) throw Error(ErrorCode::ParseError, std::string("missing field '") + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field '") + field + "': " + e.what());
  }
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

}  // namespace detail

inline Json space_to_json(const SpaceSpec& spec) {
  return Json{{"format_version", kFormatVersion},
              {"width", spec.width()},
              {"height", spec.height()},
              {"aisle_width", spec.aisle_width()},
              {"walls", detail::coords_to_json(spec.walls())},
              {"door_connections", detail::coords_to_json(spec.door_connections())},
              {"pillars", detail::coords_to_json(spec.pillars())},
              {"reserved", detail::coords_to_json(spec.reserved())}};
}

inline SpaceSpec space_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "space must be a JSON object");
  const int version = j.contains("format_version") ? detail::required<int>(j, "format_version") : kFormatVersion;
  if (version != kFormatVersion) {
    throw Error(ErrorCode::ParseError, "unsupported format_version " + std::to_string(version));
  }
  auto field = [&](const char* name) { return j.contains(name) ? j.at(name) : Json(); };
  return SpaceSpec(detail::required<int>(j, "width"), detail::required<int>(j, "height"),
                   detail::required<int>(j, "aisle_width"),
                   detail::coords_from_json(field("walls"), "walls"),
                   detail::coords_from_json(field("door_connections"), "door_connections"),
                   detail::coords_from_json(field("pillars"), "pillars"),
                   detail::coords_from_json(field("reserved"), "reserved"));
}

// Stable identifier of a space: FNV-1a over its canonical JSON.
inline std::string space_digest(const SpaceSpec& spec) {
  const std::string text = space_to_json(spec).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hash_hex(h);
}

inline Json refiner_to_json(const Refiner& r) {
  Json j{{"id", r.id}, {"kind", std::string(to_string(r.kind))}};
  if (r.kind == RefinerKind::PillarAccess) j["pillars"] = detail::coords_to_json(r.pillars);
  if (r.kind == RefinerKind::External) {
    // Sorted keys keep the output stable.
    Json verdicts = Json::object();
    for (const auto& [hash, ok] : r.verdicts) verdicts[hash_hex(hash)] = ok;
    j["verdicts"] = verdicts;
  }
  return j;
}

inline Refiner refiner_from_json(const Json& j, const SpaceSpec& spec) {
  Refiner r;
  r.id = detail::required<std::string>(j, "id");
  r.kind = refiner_kind_from_string(detail::required<std::string>(j, "kind"));
  if (r.kind == RefinerKind::PillarAccess) {
    r.pillars = detail::coords_from_json(j.contains("pillars") ? j.at("pillars") : Json(), "pillars");
    for (const Coord& p : r.pillars) {
      if (!spec.in_bounds(p) || spec.fixed_kind(p) != CellKind::Pillar) {
        throw Error(ErrorCode::InvariantViolation,
                    "refiner '" + r.id + "' names " + SpaceSpec::format(p) + " which is not a pillar");
      }
    }
  }
  if (r.kind == RefinerKind::External && j.contains("verdicts")) {
    for (const auto& [key, value] : j.at("verdicts").items()) {
      std::uint64_t hash = 0;
      try {
        hash = std::stoull(key, nullptr, 16);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad layout hash '" + key + "'");
      }
      r.verdicts[hash] = value.get<bool>();
    }
  }
  return r;
}

inline std::vector<Refiner> refiners_from_json(const Json& j, const SpaceSpec& spec) {
  std::vector<Refiner> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "refiners must be an array");
  for (const Json& item : j) out.push_back(refiner_from_json(item, spec));
  check_pipeline(out);
  return out;
}

inline Json space_file_to_json(const SpaceFile& file) {
  Json j = space_to_json(*file.space);
  Json sweep = Json::object();
  if (file.sweep.beam_size) sweep["beam_size"] = *file.sweep.beam_size;
  if (file.sweep.max_depth) sweep["max_depth"] = *file.sweep.max_depth;
  if (file.sweep.grid) {
    Json grid = Json::array();
    for (const SweepPoint& p : *file.sweep.grid) grid.push_back({p.alpha, p.theta});
    sweep["grid"] = grid;
  }
  if (!sweep.empty()) j["sweep"] = sweep;
  if (!file.refiners.empty()) {
    Json refiners = Json::array();
    for (const Refiner& r : file.refiners) refiners.push_back(refiner_to_json(r));
    j["refiners"] = refiners;
  }
  return j;
}

inline SpaceFile space_file_from_json(const Json& j) {
  SpaceFile file;
  file.space = make_space(space_from_json(j));
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    try {
      if (s.contains("beam_size")) file.sweep.beam_size = s.at("beam_size").get<std::size_t>();
      if (s.contains("max_depth") && !s.at("max_depth").is_null()) {
        file.sweep.max_depth = s.at("max_depth").get<int>();
      }
      if (s.contains("grid")) {
        std::vector<SweepPoint> grid;
        for (const Json& p : s.at("grid")) grid.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        file.sweep.grid = std::move(grid);
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("sweep: ") + e.what());
    }
  }
  if (j.contains("refiners")) file.refiners = refiners_from_json(j.at("refiners"), *file.space);
  return file;
}

inline SpaceFile parse_space_file(const std::string& text) {
  return space_file_from_json(detail::parse_json(text));
}

inline SpaceFile load_space_file(const std::filesystem::path& path) {
  return parse_space_file(detail::read_file(path));
}

inline SpacePtr load_space(const std::filesystem::path& path) { return load_space_file(path).space; }

inline void save_space(const std::filesystem::path& path, const SpaceFile& file) {
  detail::write_file(path, space_file_to_json(file).dump(2) + "\n");
}

inline void save_space(const std::filesystem::path& path, const SpaceSpec& spec) {
  save_space(path, SpaceFile{make_space(spec), {}, {}});
}

// ---------------------------------------------------------------------------
// Layout files

inline Json params_to_json(const ScoringParams& p) {
  return Json{{"alpha", p.alpha()}, {"theta", p.theta()}, {"beta", p.beta()},
              {"c1", ScoringParams::c1}, {"c2", ScoringParams::c2}};
}

inline Json breakdown_to_json(const ScoreBreakdown& b) {
  return Json{{"t_s", b.t_s},   {"t_pf", b.t_pf}, {"t_o", b.t_o},
              {"p_a", b.p_a},   {"n_s", b.n_s},   {"n_pf", b.n_pf},
              {"open_area", b.open_area}, {"score", b.score}};
}

inline Json connectivity_to_json(const std::optional<ConnectivityReport>& c) {
  if (!c) return Json();
  Json j{{"score", c->score}, {"pair_count", c->pair_count}, {"disconnected_pairs", c->disconnected_pairs}};
  if (c->per_pair) {
    Json pairs = Json::array();
    for (const PairDistance& p : *c->per_pair) {
      pairs.push_back({{"i", p.i}, {"j", p.j}, {"shortest", p.shortest},
                       {"manhattan", p.manhattan}, {"ratio", p.ratio}});
    }
    j["per_pair"] = pairs;
  }
  return j;
}

inline Json validation_to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"id", std::string(to_string(v.id))},
                          {"message", v.message},
                          {"cells", detail::coords_to_json(v.cells)}});
  }
  return Json{{"valid", report.valid}, {"violations", violations}};
}

inline Json history_to_json(const std::vector<CarveAction>& history) {
  Json out = Json::array();
  for (const CarveAction& a : history) {
    out.push_back({{"block_store", a.block_store_id},
                   {"orientation", a.orientation == Orientation::Horizontal ? "H" : "V"},
                   {"offset", a.offset}});
  }
  return out;
}

inline std::vector<CarveAction> history_from_json(const Json& j) {
  std::vector<CarveAction> out;
  if (j.is_null()) return out;
  for (const Json& a : j) {
    const std::string o = detail::required<std::string>(a, "orientation");
    if (o != "H" && o != "V") throw Error(ErrorCode::ParseError, "orientation must be H or V");
    out.push_back({detail::required<int>(a, "block_store"),
                   o == "H" ? Orientation::Horizontal : Orientation::Vertical,
                   detail::required<int>(a, "offset")});
  }
  return out;
}

inline Json stats_to_json(const SearchStats& s) {
  return Json{{"nodes_expanded", s.nodes_expanded}, {"children_generated", s.children_generated},
              {"children_valid", s.children_valid}, {"depth_reached", s.depth_reached},
              {"wall_seconds", s.wall_seconds}};
}

// A layout file carries the grid plus everything needed to re-verify it:
// score terms under `params`, connectivity and the validation report.
inline Json layout_to_json(const Layout& layout, const std::optional<ScoringParams>& params,
                           const std::optional<SearchStats>& stats = std::nullopt) {
  const BlockStoreMap map = map_block_stores(layout);
  Json j{{"format_version", kFormatVersion},
         {"space_digest", space_digest(layout.spec())},
         {"width", layout.width()},
         {"height", layout.height()},
         {"layout_hash", hash_hex(canonical_hash(layout))},
         {"grid", grid_rows(layout)},
         {"carve_history", history_to_json(layout.carve_history())},
         {"imported", layout.imported()},
         {"validation", validation_to_json(validate(layout, map))}};
  std::optional<ConnectivityReport> conn;
  if (layout.n_pick_faces() > 0) conn = connectivity(layout);
  j["connectivity"] = connectivity_to_json(conn);
  if (params) {
    j["params"] = params_to_json(*params);
    j["score"] = breakdown_to_json(score(layout, map.stores, *params));
  } else {
    j["params"] = Json();
    j["score"] = Json();
  }
  if (stats) j["stats"] = stats_to_json(*stats);
  return j;
}

inline Json result_to_json(const SearchResult& r, bool with_stats = true) {
  Json j{{"format_version", kFormatVersion},
         {"space_digest", space_digest(r.optimal.spec())},
         {"width", r.optimal.width()},
         {"height", r.optimal.height()},
         {"layout_hash", hash_hex(canonical_hash(r.optimal))},
         {"grid", grid_rows(r.optimal)},
         {"carve_history", history_to_json(r.optimal.carve_history())},
         {"imported", r.optimal.imported()},
         {"validation", validation_to_json(r.validation)},
         {"connectivity", connectivity_to_json(r.connectivity)},
         {"params", params_to_json(r.params)},
         {"score", breakdown_to_json(r.breakdown)}};
  if (with_stats) j["stats"] = stats_to_json(r.stats);
  return j;
}

namespace detail {

inline std::vector<CellKind> cells_from_rows(const SpaceSpec& spec, const std::vector<std::string>& rows) {
  if (static_cast<int>(rows.size()) != spec.height()) {
    throw Error(ErrorCode::DimensionMismatch, "grid has " + std::to_string(rows.size()) +
                                                  " rows, space has " + std::to_string(spec.height()));
  }
  std::vector<CellKind> cells;
  cells.reserve(static_cast<std::size_t>(spec.cell_count()));
  for (int r = 0; r < spec.height(); ++r) {
    const std::string& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != spec.width()) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(r) + " has " +
                                                    std::to_string(row.size()) + " cells, space has " +
                                                    std::to_string(spec.width()));
    }
    for (int c = 0; c < spec.width(); ++c) {
      const Coord at{r, c};
      const CellKind kind = kind_from_char(row[static_cast<std::size_t>(c)], at);
      const CellKind fixed = spec.fixed_kind(at);
      const bool ok = fixed == CellKind::Storage
                          ? (is_storage(kind) || kind == CellKind::Aisle)
                          : kind == fixed;
      if (!ok) {
        throw Error(ErrorCode::MaskConflict, std::string("cell ") + SpaceSpec::format(at) + " is '" +
                                                 to_char(kind) + "' but the space marks it '" +
                                                 to_char(fixed) + "'");
      }
      cells.push_back(kind);
    }
  }
  return cells;
}

}  // namespace detail

struct ImportedLayout {
  Layout layout;
  std::vector<std::string> warnings;
};

// Accepts either a layout file (JSON) or a bare ASCII grid. Pick faces are
// always recomputed; differing labels in the input produce a warning.
inline ImportedLayout import_layout_text(const std::string& text, const SpacePtr& spec) {
  std::vector<std::string> rows;
  std::vector<std::string> warnings;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Json j = detail::parse_json(text);
    if (j.contains("space_digest") && j.at("space_digest").is_string() &&
        j.at("space_digest").get<std::string>() != space_digest(*spec)) {
      throw Error(ErrorCode::MaskConflict, "layout was produced for a different space");
    }
    rows = detail::required<std::vector<std::string>>(j, "grid");
  } else {
    rows = parse_ascii(text);
  }
  Layout raw = Layout::unchecked(spec, detail::cells_from_rows(*spec, rows), {}, true);
  Layout layout = derive_pick_faces(raw);
  if (!layout.same_cells(raw)) {
    int differing = 0;
    for (std::size_t i = 0; i < raw.cells().size(); ++i) differing += raw.cells()[i] != layout.cells()[i];
    warnings.push_back("recomputed pick faces differ from the imported labels at " +
                       std::to_string(differing) + " cells");
  }
  return {std::move(layout), std::move(warnings)};
}

inline ImportedLayout import_layout(const std::filesystem::path& path, const SpacePtr& spec) {
  return import_layout_text(detail::read_file(path), spec);
}

// Rebuilds a search result from a layout file, recomputing every derived
// value from the grid and params.
inline SearchResult result_from_json(const Json& j, const SpacePtr& spec) {
  if (j.contains("space_digest") && j.at("space_digest").get<std::string>() != space_digest(*spec)) {
    throw Error(ErrorCode::MaskConflict, "layout was produced for a different space");
  }
  const auto rows = detail::required<std::vector<std::string>>(j, "grid");
  const bool imported = j.contains("imported") && j.at("imported").get<bool>();
  Layout layout = Layout::from_cells(spec, detail::cells_from_rows(*spec, rows),
                                     history_from_json(j.contains("carve_history") ? j.at("carve_history") : Json()),
                                     imported);
  if (!j.contains("params") || j.at("params").is_null()) {
    throw Error(ErrorCode::ParseError, "layout file has no scoring params");
  }
  const Json& p = j.at("params");
  ScoringParams params(detail::required<double>(p, "alpha"), detail::required<double>(p, "theta"));
  const BlockStoreMap map = map_block_stores(layout);
  SearchResult r{layout, score(layout, map.stores, params), std::nullopt, params, validate(layout, map), {}, {}};
  if (layout.n_pick_faces() > 0) r.connectivity = connectivity(layout);
  if (j.contains("stats")) {
    const Json& s = j.at("stats");
    r.stats.nodes_expanded = s.value("nodes_expanded", 0LL);
    r.stats.children_generated = s.value("children_generated", 0LL);
    r.stats.children_valid = s.value("children_valid", 0LL);
    r.stats.depth_reached = s.value("depth_reached", 0);
    r.stats.wall_seconds = s.value("wall_seconds", 0.0);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pareto set files

inline Json pareto_to_json(const ParetoSet& set, const std::optional<RefineOutcome>& refinement = std::nullopt) {
  std::vector<bool> on_front(set.candidates.size(), false);
  for (std::size_t i : set.front) on_front[i] = true;
  Json candidates = Json::array();
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const SearchResult& r = set.candidates[i];
    candidates.push_back({{"index", i},
                          {"alpha", r.params.alpha()},
                          {"theta", r.params.theta()},
                          {"n_pf", r.breakdown.n_pf},
                          {"n_s", r.breakdown.n_s},
                          {"score", breakdown_to_json(r.breakdown)},
                          {"connectivity", connectivity_to_json(r.connectivity)},
                          {"valid", r.validation.valid},
                          {"layout_hash", hash_hex(canonical_hash(r.optimal))},
                          {"front", static_cast<bool>(on_front[i])},
                          {"carve_history", history_to_json(r.optimal.carve_history())},
                          {"grid", grid_rows(r.optimal)}});
  }
  Json config{{"beam_size", set.config.beam_size},
              {"max_depth", set.config.max_depth ? Json(*set.config.max_depth) : Json()}};
  Json j{{"format_version", kFormatVersion},
         {"space_digest", space_digest(*set.space)},
         {"space", space_to_json(*set.space)},
         {"config", config},
         {"candidates", candidates},
         {"front", set.front}};
  if (refinement) {
    Json rejected = Json::array();
    for (const Rejection& r : refinement->rejected) {
      rejected.push_back({{"index", r.index}, {"refiner_id", r.refiner_id}});
    }
    j["refinement"] = {{"passed", refinement->passed}, {"rejected", rejected}};
  }
  return j;
}

inline ParetoSet pareto_from_json(const Json& j) {
  ParetoSet set;
  set.space = make_space(space_from_json(detail::required<Json>(j, "space")));
  if (j.contains("space_digest") && j.at("space_digest").get<std::string>() != space_digest(*set.space)) {
    throw Error(ErrorCode::MaskConflict, "space digest does not match the embedded space");
  }
  if (j.contains("config")) {
    const Json& c = j.at("config");
    set.config.beam_size = c.value("beam_size", std::size_t{1});
    if (c.contains("max_depth") && !c.at("max_depth").is_null()) set.config.max_depth = c.at("max_depth").get<int>();
  }
  for (const Json& item : detail::required<Json>(j, "candidates")) {
    Json layout_json{{"grid", item.at("grid")},
                     {"carve_history", item.contains("carve_history") ? item.at("carve_history") : Json()},
                     {"params", {{"alpha", item.at("alpha")}, {"theta", item.at("theta")}}}};
    SearchResult r = result_from_json(layout_json, set.space);
    set.grid.push_back({r.params.alpha(), r.params.theta()});
    set.candidates.push_back(std::move(r));
  }
  std::vector<ParetoPoint> points;
  for (const SearchResult& r : set.candidates) points.push_back(pareto_point(r));
  set.front = pareto_front_indices(points);
  return set;
}

// Plot-ready table: one row per candidate.
inline std::string pareto_table(const ParetoSet& set) {
  std::vector<bool> on_front(set.candidates.size(), false);
  for (std::size_t i : set.front) on_front[i] = true;
  std::ostringstream out;
  out << "index\talpha\ttheta\tn_pf\tn_s\tscore\tconnectivity\tfront\n";
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const SearchResult& r = set.candidates[i];
    out << i << '\t' << r.params.alpha() << '\t' << r.params.theta() << '\t' << r.breakdown.n_pf << '\t'
        << r.breakdown.n_s << '\t' << r.breakdown.score << '\t'
        << (r.connectivity ? std::to_string(r.connectivity->score) : std::string("-")) << '\t'
        << (on_front[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Manual layout comparison

struct FrontDelta {
  std::size_t index = 0;  // candidate index in the Pareto set
  int delta_n_s = 0;      // member minus manual
  int delta_n_pf = 0;
  bool dominates_manual = false;
};

struct ComparisonReport {
  int manual_n_s = 0;
  int manual_n_pf = 0;
  bool dominated = false;
  std::vector<FrontDelta> deltas;  // front order
};

inline ComparisonReport compare(const Layout& manual, const ParetoSet& pareto) {
  ComparisonReport report{manual.n_storage(), manual.n_pick_faces(), false, {}};
  const ParetoPoint m{manual.n_pick_faces(), manual.n_storage(), -1.0, 0};
  for (std::size_t i : pareto.front) {
    const SearchResult& r = pareto.candidates[i];
    const ParetoPoint p = pareto_point(r);
    FrontDelta d{i, p.n_s - m.n_s, p.n_pf - m.n_pf, dominates(p, m)};
    report.dominated |= d.dominates_manual;
    report.deltas.push_back(d);
  }
  return report;
}

inline Json comparison_to_json(const ComparisonReport& c) {
  Json deltas = Json::array();
  for (const FrontDelta& d : c.deltas) {
    deltas.push_back({{"index", d.index}, {"delta_n_s", d.delta_n_s}, {"delta_n_pf", d.delta_n_pf},
                      {"dominates_manual", d.dominates_manual}});
  }
  return Json{{"manual", {{"n_s", c.manual_n_s}, {"n_pf", c.manual_n_pf}}},
              {"status", c.dominated ? "dominated" : "non-dominated"},
              {"deltas", deltas}};
}

}  // namespace wlayout
