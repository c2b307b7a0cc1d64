#include "fuseplan/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuseplan/analysis.hpp"
#include "fuseplan/app_model.hpp"
#include "fuseplan/error.hpp"
#include "fuseplan/fusion.hpp"
#include "fuseplan/platform_sim.hpp"
#include "fuseplan/pricing.hpp"
#include "fuseplan/results_io.hpp"
#include "fuseplan/svg_plot.hpp"
#include "fuseplan/workload.hpp"

namespace fuseplan::cli {

namespace {

struct Options {
  std::string app;
  std::string platform;
  std::string pricing = "traditional";
  std::string levels;
  std::string out;
  std::string results;
  std::string trace;
  std::string start;
  std::string normalize = "full";
  std::size_t alpha_steps = 10001;
  unsigned jobs = 1;
  std::int64_t seed = 0;  // reserved; accepted for forward compatibility
  double alpha = 0.5;
  bool list = false;
  bool with_path = false;
  std::uint32_t exponent = 3;
  std::uint32_t reps = 5;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

AppGraph load_app(const Options& o) {
  if (o.app.empty()) throw ValidationError("--app is required");
  constexpr std::string_view kBuiltin = "builtin:";
  AppGraph app = o.app.rfind(kBuiltin, 0) == 0 ? builtin_app(parse_builtin_name(o.app.substr(kBuiltin.size())))
                                               : parse_app(read_file(o.app));
  if (!o.trace.empty()) app = apply_measured_work(app, ingest_trace(read_file(o.trace), app));
  return app;
}

PlatformModel load_platform(const Options& o) {
  return o.platform.empty() ? PlatformModel{} : parse_platform(read_file(o.platform));
}

PricingConfig load_pricing(const Options& o) {
  if (o.pricing == "traditional" || o.pricing == "instance_based") {
    PricingConfig config;
    config.kind = parse_pricing_kind(o.pricing);
    return config;
  }
  return parse_pricing_config(read_file(o.pricing));
}

std::vector<ResourceConfig> load_levels(const Options& o) {
  const std::vector<ResourceConfig> defaults = default_levels();
  if (o.levels.empty()) return defaults;
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(o.levels.data(), o.levels.data() + o.levels.size(), n);
  if (ec == std::errc() && ptr == o.levels.data() + o.levels.size()) {
    if (n == 0 || n > defaults.size()) {
      throw ValidationError("--levels count must be between 1 and " + std::to_string(defaults.size()));
    }
    return {defaults.begin(), defaults.begin() + static_cast<std::ptrdiff_t>(n)};
  }
  std::vector<ResourceConfig> levels;
  try {
    for (const auto& entry : nlohmann::json::parse(read_file(o.levels))) {
      levels.push_back({entry.at("cpu").get<double>(), entry.at("memory_mb").get<std::int64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed levels file: ") + e.what());
  }
  if (levels.empty()) throw ValidationError("empty level list");
  for (const auto& level : levels) {
    if (!(level.cpu > 0.0) || level.memory_mb <= 0) throw ValidationError("levels need positive cpu and memory_mb");
  }
  return levels;
}

std::vector<ResultRow> load_results(const Options& o) {
  if (o.results.empty()) throw ValidationError("--results is required");
  return parse_results_csv(read_file(o.results));
}

std::string pct(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", value);
  return buf;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const AppGraph app = load_app(o);
  const SetupSpace space(app, load_levels(o));
  out << space.size() << '\n';
  if (o.list) {
    for (std::size_t i = 0; i < space.size(); ++i) out << setup_string(space.at(i)) << '\n';
  }
  return kOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  const AppGraph app = load_app(o);
  const SetupSpace space(app, load_levels(o));
  const auto rows = evaluate_space(app, space, load_platform(o), load_pricing(o), o.jobs);
  const std::string csv = format_results_csv(rows);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file(o.out, csv);
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, bool color) {
  const auto rows = load_results(o);
  const PricingKind kind = load_pricing(o).kind;
  const auto metrics = metrics_from_rows(rows, kind);
  const SweepReport report = alpha_sweep(metrics, AlphaGrid(o.alpha_steps), pricing_id(kind), o.jobs);

  const char* bold = color ? "\033[1m" : "";
  const char* reset = color ? "\033[0m" : "";
  out << bold << std::left << std::setw(24) << "partition" << std::right << std::setw(10) << "coverage"
      << std::setw(12) << "points" << reset << '\n';
  for (const auto& [partition, count] : report.partition_counts) {
    out << std::left << std::setw(24) << partition << std::right << std::setw(10)
        << pct(report.partition_coverage_pct(partition)) << std::setw(12) << count << '\n';
  }
  const std::string json = sweep_report_json(report);
  if (o.out.empty()) {
    out << json;
  } else {
    write_file(o.out, json);
  }
  return kOk;
}

int cmd_pareto(const Options& o, std::ostream& out) {
  const auto rows = load_results(o);
  const auto metrics = metrics_from_rows(rows, load_pricing(o).kind);
  if (metrics.empty()) throw ValidationError("no data");
  std::string csv = "setup,latency_ms,cost_pmi_usd\n";
  for (const auto& m : pareto_front(metrics)) {
    csv += "\"" + m.setup_name + "\"," + format_double(m.latency_ms) + "," + format_double(m.cost_pmi_usd) + "\n";
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file(o.out, csv);
  }
  return kOk;
}

PlotPath build_path(const Options& o, std::span<const SetupMetrics> full_set) {
  const AppGraph app = load_app(o);
  const auto levels = load_levels(o);
  const PlatformModel platform = load_platform(o);
  const PricingModel pricing = load_pricing(o).model();
  const FusionSetup start = parse_setup_string(app, o.start.empty() ? baseline_setup_string(app) : o.start, levels);

  PlotPath path;
  GreedyOptions options;
  options.alpha = o.alpha;
  options.full_set = full_set;
  path.steps = greedy_optimize_path(app, platform, pricing, levels, start, options);
  std::vector<std::string> names{setup_string(start)};
  for (const auto& step : path.steps) names.push_back(step.to_setup);
  for (const auto& name : names) {
    path.vertices.push_back(metrics_for(app, parse_setup_string(app, name, levels), pricing, platform));
  }
  return path;
}

int cmd_plot(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ValidationError("--out is required");
  const auto rows = load_results(o);
  const PricingKind kind = load_pricing(o).kind;
  const auto metrics = metrics_from_rows(rows, kind);
  if (metrics.empty()) throw ValidationError("no data");

  std::optional<PlotPath> path;
  if (o.with_path) path = build_path(o, metrics);
  const std::string title = (rows.front().app + " (" + std::string(pricing_id(kind)) + " pricing)");
  write_file(o.out, render_scatter_svg(metrics, title, path ? &*path : nullptr));
  out << "wrote " << metrics.size() << " points to " << o.out << '\n';
  return kOk;
}

int cmd_heuristic(const Options& o, std::ostream& out) {
  out << sync_fuse_heuristic(load_app(o)).name() << '\n';
  return kOk;
}

int cmd_path(const Options& o, std::ostream& out) {
  const AppGraph app = load_app(o);
  const auto levels = load_levels(o);
  const PlatformModel platform = load_platform(o);
  const PricingConfig pricing = load_pricing(o);

  std::vector<SetupMetrics> full_set;
  if (o.normalize == "full") {
    const auto rows = evaluate_space(app, SetupSpace(app, levels), platform, pricing, o.jobs);
    full_set = metrics_from_rows(rows, pricing.kind);
  } else if (o.normalize != "visited") {
    throw ValidationError("--normalize must be 'full' or 'visited'");
  }
  const FusionSetup start = parse_setup_string(app, o.start.empty() ? baseline_setup_string(app) : o.start, levels);
  GreedyOptions options;
  options.alpha = o.alpha;
  options.full_set = full_set;
  const auto steps = greedy_optimize_path(app, platform, pricing.model(), levels, start, options);

  out << "start " << setup_string(start) << '\n';
  for (const auto& step : steps) {
    char scores[64];
    std::snprintf(scores, sizeof scores, "%.6f -> %.6f", step.score_before, step.score_after);
    out << std::left << std::setw(9) << to_string(step.kind) << step.from_setup << " -> " << step.to_setup
        << "  score " << scores << '\n';
  }
  out << "final " << (steps.empty() ? setup_string(start) : steps.back().to_setup) << '\n';
  return kOk;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  const Calibration c = calibrate_workload(o.exponent, o.reps);
  out << "exponent " << c.prime_exponent << ": 2^" << c.prime_exponent << "-1 is "
      << (c.mersenne_prime ? "prime" : "composite") << '\n';
  out << "ms_per_run " << format_double(c.ms_per_run) << " (median of " << c.repetitions << ")\n";
  return kOk;
}

int cmd_apps_list(std::ostream& out) {
  for (BuiltinApp app : all_builtins()) {
    const AppGraph g = builtin_app(app);
    out << builtin_name(app) << "\t" << g.task_count() << " tasks, " << g.edges().size() << " edges\n";
  }
  return kOk;
}

}  // namespace

bool color_enabled_for_stdout() { return std::getenv("FUSEPLAN_NO_COLOR") == nullptr && ::isatty(1) == 1; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  Options o;
  CLI::App app{"Exhaustive serverless function-fusion planner"};
  app.require_subcommand(1);

  auto add_app = [&](CLI::App* cmd) { cmd->add_option("--app", o.app, "builtin:NAME or descriptor path")->required(); };
  auto add_trace = [&](CLI::App* cmd) { cmd->add_option("--trace", o.trace, "measured durations CSV"); };
  auto add_platform = [&](CLI::App* cmd) { cmd->add_option("--platform", o.platform, "platform model JSON"); };
  auto add_pricing = [&](CLI::App* cmd) {
    cmd->add_option("--pricing", o.pricing, "traditional | instance_based | config path");
  };
  auto add_levels = [&](CLI::App* cmd) { cmd->add_option("--levels", o.levels, "level count or levels JSON"); };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "reserved");
  };

  auto* enumerate = app.add_subcommand("enumerate", "count (and list) fusion setups");
  add_app(enumerate);
  add_trace(enumerate);
  add_levels(enumerate);
  enumerate->add_flag("--list", o.list, "print every canonical setup string");
  add_common(enumerate);

  auto* run_cmd = app.add_subcommand("run", "simulate and price every setup, write results CSV");
  add_app(run_cmd);
  add_trace(run_cmd);
  add_platform(run_cmd);
  add_pricing(run_cmd);
  add_levels(run_cmd);
  run_cmd->add_option("--out", o.out, "results CSV path (stdout if omitted)");
  add_common(run_cmd);

  auto* sweep = app.add_subcommand("sweep", "alpha sweep over a results CSV");
  sweep->add_option("--results", o.results, "results CSV")->required();
  add_pricing(sweep);
  sweep->add_option("--alpha-steps", o.alpha_steps, "grid size")->check(CLI::Range(std::size_t{2}, SIZE_MAX));
  sweep->add_option("--out", o.out, "report JSON path");
  add_common(sweep);

  auto* pareto = app.add_subcommand("pareto", "Pareto front of a results CSV");
  pareto->add_option("--results", o.results, "results CSV")->required();
  add_pricing(pareto);
  pareto->add_option("--out", o.out, "front CSV path");
  add_common(pareto);

  auto* plot = app.add_subcommand("plot", "SVG scatter of normalized latency over normalized cost");
  plot->add_option("--results", o.results, "results CSV")->required();
  add_pricing(plot);
  plot->add_option("--out", o.out, "SVG path")->required();
  plot->add_flag("--path", o.with_path, "overlay a greedy optimization path (needs --app)");
  plot->add_option("--app", o.app, "builtin:NAME or descriptor path");
  add_trace(plot);
  add_platform(plot);
  add_levels(plot);
  plot->add_option("--alpha", o.alpha, "score weight for the path")->check(CLI::Range(0.0, 1.0));
  plot->add_option("--start", o.start, "path start setup (default: singleton at lowest level)");
  add_common(plot);

  auto* heuristic = app.add_subcommand("heuristic", "sync-fuse heuristic partition");
  add_app(heuristic);
  add_common(heuristic);

  auto* path = app.add_subcommand("path", "greedy optimization path");
  add_app(path);
  add_trace(path);
  add_platform(path);
  add_pricing(path);
  add_levels(path);
  path->add_option("--alpha", o.alpha, "score weight")->check(CLI::Range(0.0, 1.0));
  path->add_option("--start", o.start, "start setup (default: singleton at lowest level)");
  path->add_option("--normalize", o.normalize, "full | visited");
  add_common(path);

  auto* calibrate = app.add_subcommand("calibrate", "time the Lucas-Lehmer workload");
  calibrate->add_option("--exponent", o.exponent, "odd prime exponent")->required();
  calibrate->add_option("--reps", o.reps, "repetitions");
  add_common(calibrate);

  auto* apps = app.add_subcommand("apps", "built-in applications");
  auto* apps_list = apps->add_subcommand("list", "list built-in applications");
  apps->require_subcommand(1);

  const char* red = color ? "\033[31m" : "";
  const char* reset = color ? "\033[0m" : "";
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << red << "error: " << reset << e.what() << '\n';
    return kValidation;
  }

  try {
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (run_cmd->parsed()) return cmd_run(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out, color);
    if (pareto->parsed()) return cmd_pareto(o, out);
    if (plot->parsed()) return cmd_plot(o, out);
    if (heuristic->parsed()) return cmd_heuristic(o, out);
    if (path->parsed()) return cmd_path(o, out);
    if (calibrate->parsed()) return cmd_calibrate(o, out);
    if (apps_list->parsed()) return cmd_apps_list(out);
  } catch (const IoError& e) {
    err << red << "error: " << reset << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << red << "error: " << reset << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace fuseplan::cli
