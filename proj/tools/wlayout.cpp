// wlayout: command-line front end for the layout engine.
//
// Exit codes: 0 success, 1 validation failure, 2 input error, 3 internal error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlayout/service.hpp"
#include "wlayout/wlayout.hpp"

namespace fs = std::filesystem;
using namespace wlayout;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvariantViolation:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::MaskConflict:
    case ErrorCode::DegenerateSpace:
    case ErrorCode::UnknownRefinerId:
    case ErrorCode::OffsetOutOfRange:
    case ErrorCode::UnknownBlockStore:
      return kInputError;
    default:
      return kInternalError;
  }
}

void emit(const std::optional<fs::path>& out, const std::string& text) {
  if (out) {
    detail::write_file(*out, text);
  } else {
    std::cout << text;
  }
}

SearchConfig config_from(const SpaceFile& file, std::optional<std::size_t> beam, std::optional<int> max_depth) {
  SearchConfig config;
  if (file.sweep.beam_size) config.beam_size = *file.sweep.beam_size;
  config.max_depth = file.sweep.max_depth;
  if (beam) config.beam_size = *beam;
  if (max_depth) config.max_depth = *max_depth;
  return config;
}

std::optional<RefineOutcome> refine(const ParetoSet& set, const std::vector<Refiner>& pipeline) {
  if (pipeline.empty()) return std::nullopt;
  return apply_refiners(set.candidates, pipeline);
}

struct SolveArgs {
  std::string space;
  double alpha = 0.5;
  double theta = 0.1;
  std::optional<std::size_t> beam;
  std::optional<int> max_depth;
  std::optional<fs::path> out;
};

int run_solve(const SolveArgs& a) {
  const SpaceFile file = load_space_file(a.space);
  const SearchResult r = generate(file.space, ScoringParams(a.alpha, a.theta), config_from(file, a.beam, a.max_depth));
  emit(a.out, result_to_json(r).dump(2) + "\n");
  std::cerr << "score " << r.breakdown.score << "  N_s " << r.breakdown.n_s << "  N_pf " << r.breakdown.n_pf
            << "  (" << r.stats.nodes_expanded << " nodes, " << r.stats.wall_seconds << " s)\n";
  return kOk;
}

struct SweepArgs {
  std::string space;
  std::optional<std::size_t> beam;
  std::optional<int> max_depth;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<fs::path> out;
};

int run_sweep(const SweepArgs& a) {
  SpaceFile file = load_space_file(a.space);
  const SearchConfig config = config_from(file, a.beam, a.max_depth);
  SweepOptions options;
  options.workers = a.jobs;
  if (file.sweep.grid) options.grid = *file.sweep.grid;
  options.on_progress = [](std::size_t done, std::size_t total) {
    std::cerr << "\rsweep " << done << "/" << total << std::flush;
  };
  const ParetoSet set = pareto_sweep(file.space, config, options);
  std::cerr << "\n";
  const std::string pareto = pareto_to_json(set, refine(set, file.refiners)).dump(2) + "\n";
  if (!a.out) {
    std::cout << pareto;
    return kOk;
  }
  fs::create_directories(*a.out);
  file.sweep.beam_size = config.beam_size;
  file.sweep.max_depth = config.max_depth;
  save_space(*a.out / "space.json", file);
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%02zu.json", i);
    detail::write_file(*a.out / name, result_to_json(set.candidates[i]).dump(2) + "\n");
  }
  detail::write_file(*a.out / "pareto.json", pareto);
  std::cout << pareto_table(set);
  return kOk;
}

int run_pareto(const fs::path& in, const std::optional<fs::path>& out) {
  const SpaceFile file = load_space_file(in / "space.json");
  std::vector<fs::path> runs;
  for (const auto& entry : fs::directory_iterator(in)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run_", 0) == 0 && entry.path().extension() == ".json") runs.push_back(entry.path());
  }
  std::sort(runs.begin(), runs.end());
  if (runs.empty()) throw Error(ErrorCode::ParseError, "no run_*.json files in " + in.string());

  ParetoSet set{file.space, config_from(file, std::nullopt, std::nullopt), {}, {}, {}};
  for (const fs::path& run : runs) {
    SearchResult r = result_from_json(detail::parse_json(detail::read_file(run)), file.space);
    set.grid.push_back({r.params.alpha(), r.params.theta()});
    set.candidates.push_back(std::move(r));
  }
  std::vector<ParetoPoint> points;
  for (const SearchResult& r : set.candidates) points.push_back(pareto_point(r));
  set.front = pareto_front_indices(points);
  emit(out, pareto_to_json(set, refine(set, file.refiners)).dump(2) + "\n");
  std::cout << pareto_table(set);
  return kOk;
}

int run_validate(const fs::path& space, const fs::path& layout) {
  const SpacePtr spec = load_space(space);
  const ImportedLayout imported = import_layout(layout, spec);
  for (const std::string& w : imported.warnings) std::cerr << "warning: " << w << "\n";
  const ValidationReport report = validate(imported.layout);
  std::cout << validation_to_json(report).dump(2) << "\n";
  return report.valid ? kOk : kInvalid;
}

int run_render(const fs::path& layout) {
  const std::string text = detail::read_file(layout);
  std::vector<std::string> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    rows = detail::required<std::vector<std::string>>(detail::parse_json(text), "grid");
  } else {
    rows = parse_ascii(text);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      kind_from_char(rows[r][c], {static_cast<int>(r), static_cast<int>(c)});
    }
    std::cout << rows[r] << "\n";
  }
  return kOk;
}

int run_compare(const fs::path& manual, const fs::path& pareto_file) {
  const ParetoSet set = pareto_from_json(detail::parse_json(detail::read_file(pareto_file)));
  const ImportedLayout imported = import_layout(manual, set.space);
  for (const std::string& w : imported.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << comparison_to_json(compare(imported.layout, set)).dump(2) << "\n";
  return kOk;
}

int run_serve(int port, unsigned jobs, const std::optional<fs::path>& data_dir) {
  Service service(ServiceOptions{jobs, data_dir});
  httplib::Server server;
  service.mount(server);
  std::cerr << "listening on 0.0.0.0:" << port << "\n";
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "cannot bind port " << port << "\n";
    return kInternalError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warehouse layout synthesis by constrained beam search"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Search the best layout for one (alpha, theta)");
  solve_cmd->add_option("--space", solve.space, "Space file")->required();
  solve_cmd->add_option("--alpha", solve.alpha, "Storage weight in (0, 1]")->required();
  solve_cmd->add_option("--theta", solve.theta, "Accessibility penalty weight")->required();
  solve_cmd->add_option("--beam", solve.beam, "Beam size");
  solve_cmd->add_option("--max-depth", solve.max_depth, "Depth cap");
  solve_cmd->add_option("--out", solve.out, "Layout file to write (default stdout)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every (alpha, theta) of the sweep grid");
  sweep_cmd->add_option("--space", sweep.space, "Space file")->required();
  sweep_cmd->add_option("--beam", sweep.beam, "Beam size");
  sweep_cmd->add_option("--max-depth", sweep.max_depth, "Depth cap");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent workers");
  sweep_cmd->add_option("--out", sweep.out, "Output directory (default: Pareto set on stdout)");

  fs::path pareto_in;
  std::optional<fs::path> pareto_out;
  auto* pareto_cmd = app.add_subcommand("pareto", "Build the Pareto set from a sweep directory");
  pareto_cmd->add_option("--in", pareto_in, "Sweep output directory")->required();
  pareto_cmd->add_option("--out", pareto_out, "Pareto file to write");

  fs::path validate_space;
  fs::path validate_layout;
  auto* validate_cmd = app.add_subcommand("validate", "Check a layout against every constraint");
  validate_cmd->add_option("--space", validate_space, "Space file")->required();
  validate_cmd->add_option("--layout", validate_layout, "Layout file or ASCII grid")->required();

  fs::path render_layout;
  auto* render_cmd = app.add_subcommand("render", "Print a layout as ASCII");
  render_cmd->add_option("--layout", render_layout, "Layout file")->required();

  fs::path compare_manual;
  fs::path compare_pareto;
  auto* compare_cmd = app.add_subcommand("compare", "Compare a manual layout with a Pareto front");
  compare_cmd->add_option("--manual", compare_manual, "Manual layout (file or ASCII grid)")->required();
  compare_cmd->add_option("--pareto", compare_pareto, "Pareto file")->required();

  int port = 8080;
  unsigned serve_jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<fs::path> data_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port, "Listen port");
  serve_cmd->add_option("--jobs", serve_jobs, "Sweep workers");
  serve_cmd->add_option("--data-dir", data_dir, "Directory for finished results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*pareto_cmd) return run_pareto(pareto_in, pareto_out);
    if (*validate_cmd) return run_validate(validate_space, validate_layout);
    if (*render_cmd) return run_render(render_layout);
    if (*compare_cmd) return run_compare(compare_manual, compare_pareto);
    if (*serve_cmd) return run_serve(port, serve_jobs, data_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
