#include "cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

#include "mobman/error.hpp"
#include "mobman/grid_map.hpp"
#include "mobman/planning.hpp"
#include "mobman/render.hpp"
#include "mobman/scenario.hpp"
#include "mobman/sim.hpp"

namespace mobman::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Point2 parse_xy(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw UsageError(std::string(what) + " must be X,Y");
  }
  auto num = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw UsageError(std::string(what) + " must be X,Y");
    }
    return v;
  };
  const std::string_view sv(text);
  return {num(sv.substr(0, comma)), num(sv.substr(comma + 1))};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path);
  }
  out << text;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

SimLogLevel level_from_env() {
  const char* env = std::getenv("SIM_LOG_LEVEL");
  const std::string v = env ? env : "quiet";
  if (v == "info") {
    return SimLogLevel::Info;
  }
  if (v == "trace") {
    return SimLogLevel::Trace;
  }
  return SimLogLevel::Quiet;
}

struct PlanArgs {
  std::string map;
  std::string start;
  std::string goal;
  double k = AStarParams{}.k;
  double clearance = AStarParams{}.clearance;
  std::string open_list = "heap";
  std::string out = "plan.pgm";
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
  const GridMap map = read_map_file(a.map);
  AStarParams params;
  params.k = a.k;
  params.clearance = a.clearance;
  params.open_list = a.open_list == "linear" ? OpenList::Linear : OpenList::Heap;

  const auto start = map.world_to_cell(parse_xy(a.start, "--start"));
  const auto goal = map.world_to_cell(parse_xy(a.goal, "--goal"));
  if (!start || !goal) {
    throw InvalidEndpoint("start or goal lies outside the map");
  }
  const DistanceField field = distance_field(map);
  const PlanResult r = astar(map, field, *start, *goal, params);
  out << "cost=" << fixed(r.total_cost) << " length=" << fixed(r.path_length(map.resolution()))
      << " cells=" << r.cells.size() << " expanded=" << r.expanded
      << " waypoints=" << r.waypoints.size() << '\n';
  for (const auto& w : r.waypoints) {
    out << "waypoint " << fixed(w.x) << ',' << fixed(w.y) << '\n';
  }
  write_text(a.out, render(map, {}, r.cells));
  return 0;
}

struct SimArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "sim_out";
};

int cmd_sim(const SimArgs& a, std::ostream& out) {
  Scenario sc = load_scenario_file(a.scenario);
  if (a.seed) {
    sc.seed = *a.seed;
  }
  SimOptions opts;
  opts.level = level_from_env();
  opts.record_decisions = false;
  auto logger = std::make_shared<spdlog::logger>(
      "sim", std::make_shared<spdlog::sinks::stderr_sink_st>());
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::trace);
  opts.sink = [&](SimLogLevel level, const std::string& msg) {
    logger->log(level == SimLogLevel::Trace ? spdlog::level::trace : spdlog::level::info, msg);
  };

  const SimResult r = run_sim(sc, opts);
  write_sim_outputs(r, a.out);
  out << r.metrics.to_text();
  if (!r.metrics.done) {
    throw Error("mission did not reach Done within " + fixed(sc.max_sim_time) + " s");
  }
  return 0;
}

struct BenchArgs {
  std::string sizes = "100,250,500";
  int trials = 10;
  double density = 0.2;
  double k = 0.0;
  std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<int> sizes;
  std::string_view rest(a.sizes);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || n < 2) {
      throw UsageError("--sizes must be a comma-separated list of integers >= 2");
    }
    sizes.push_back(n);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (a.trials < 1) {
    throw UsageError("--trials must be >= 1");
  }

  AStarParams params;
  params.k = a.k;
  params.clearance = 0.0;
  for (const int n : sizes) {
    const GridMap map = random_obstacle_map(n, n, 0.05, a.density, a.seed + static_cast<unsigned>(n));
    const BenchReport rep = compare_open_lists(map, {0, 0}, {n - 1, n - 1}, a.trials, params);
    for (const auto& e : rep.entries) {
      out << e.to_line() << '\n';
    }
    const double heap = rep.median_micros(OpenList::Heap);
    const double linear = rep.median_micros(OpenList::Linear);
    out << "summary map=" << n << 'x' << n << " heap_median_us=" << fixed(heap)
        << " linear_median_us=" << fixed(linear)
        << " linear_over_heap=" << fixed(heap > 0.0 ? linear / heap : 0.0)
        << " costs_equal=" << rep.costs_equal << " expansions_equal=" << rep.expansions_equal
        << " paths_equal=" << rep.paths_equal << '\n';
  }
  return 0;
}

int cmd_map_render(const std::string& map_path, const std::string& out_path) {
  write_text(out_path, render(read_map_file(map_path)));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Mobile manipulator planning and simulation", "mobman");
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a path on a map file");
  plan_cmd->add_option("--map", plan.map, "P_GRID map file")->required();
  plan_cmd->add_option("--start", plan.start, "start X,Y in meters")->required();
  plan_cmd->add_option("--goal", plan.goal, "goal X,Y in meters")->required();
  plan_cmd->add_option("--k", plan.k, "safety cost weight")->check(CLI::NonNegativeNumber);
  plan_cmd->add_option("--clearance", plan.clearance, "minimum wall distance, m")
      ->check(CLI::NonNegativeNumber);
  plan_cmd->add_option("--open-list", plan.open_list, "heap or linear")
      ->check(CLI::IsMember({"heap", "linear"}));
  plan_cmd->add_option("--out", plan.out, "render output (PGM)");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Run a scenario");
  sim_cmd->add_option("--scenario", sim.scenario, "scenario file")->required();
  sim_cmd->add_option("--seed", sim.seed, "override the scenario seed");
  sim_cmd->add_option("--out", sim.out, "output directory");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare heap and linear open lists");
  bench_cmd->add_option("--sizes", bench.sizes, "square map sizes, e.g. 100,250,500");
  bench_cmd->add_option("--trials", bench.trials, "trials per size");
  bench_cmd->add_option("--density", bench.density, "obstacle density")
      ->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--k", bench.k, "safety cost weight")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", bench.seed, "map seed");

  std::string render_map;
  std::string render_out;
  auto* render_cmd = app.add_subcommand("map-render", "Render a map file as PGM");
  render_cmd->add_option("--map", render_map, "P_GRID map file")->required();
  render_cmd->add_option("--out", render_out, "PGM output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (plan_cmd->parsed()) {
      return cmd_plan(plan, out);
    }
    if (sim_cmd->parsed()) {
      return cmd_sim(sim, out);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(bench, out);
    }
    return cmd_map_render(render_map, render_out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mobman::cli
