#include "mobman/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mobman/error.hpp"
#include "mobman/grid_map.hpp"

namespace mobman {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) {
      return out;
    }
    pos = next + 1;
  }
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void operator()(const std::string& what) const {
    throw ScenarioError("scenario line " + std::to_string(line_) + ": " + what);
  }

 private:
  int line_;
};

double to_double(std::string_view tok, const LineError& fail) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail("invalid number '" + std::string(tok) + "'");
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view tok, const LineError& fail) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail("invalid integer '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<double> to_doubles(std::string_view value, std::size_t n, const LineError& fail) {
  const auto parts = split(value, ',');
  if (parts.size() != n) {
    fail("expected " + std::to_string(n) + " comma-separated numbers");
  }
  std::vector<double> out;
  for (const auto p : parts) {
    out.push_back(to_double(p, fail));
  }
  return out;
}

ObjectBag to_bag(std::string_view value, const LineError& fail) {
  ObjectBag bag;
  if (value.empty()) {
    return bag;
  }
  for (const auto p : split(value, ',')) {
    if (p.empty() || p.find_first_of(" \t#=") != std::string_view::npos) {
      fail("invalid object kind '" + std::string(p) + "'");
    }
    bag.emplace(p);
  }
  return bag;
}

PidGains to_gains(std::string_view value, const LineError& fail) {
  const auto v = to_doubles(value, 5, fail);
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string join(std::initializer_list<double> values) {
  std::string out;
  for (const double v : values) {
    if (!out.empty()) {
      out += ',';
    }
    out += format_double(v);
  }
  return out;
}

std::string join(const ObjectBag& bag) {
  std::string out;
  for (const auto& k : bag) {
    if (!out.empty()) {
      out += ',';
    }
    out += k;
  }
  return out;
}

std::string gains_text(const PidGains& g) {
  return join({g.kp, g.ki, g.kd, g.i_limit, g.out_limit});
}

}  // namespace

const char* to_string(PoseSource p) {
  return p == PoseSource::DeadReckoning ? "dead_reckoning" : "ground_truth";
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw ScenarioError("invalid scenario: " + what); };
  if (map.empty()) {
    fail("map is required");
  }
  if (!(dt > 0.0 && dt <= 0.1)) {
    fail("dt must lie in (0, 0.1]");
  }
  if (!(max_sim_time > 0.0)) {
    fail("max_sim_time must be > 0");
  }
  if (capacity < 1) {
    fail("capacity must be >= 1");
  }
  if (!(planner.k >= 0.0) || !(planner.clearance >= 0.0)) {
    fail("planner.k and planner.clearance must be >= 0");
  }
  try {
    gains_xy.validate();
    gains_theta.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (!(noise.encoder >= 0.0 && noise.gyro >= 0.0 && noise.lidar >= 0.0 && noise.depth >= 0.0)) {
    fail("noise levels must be >= 0");
  }
  if (!(stop_distance >= 0.0)) {
    fail("stop_distance must be >= 0");
  }
  if (lidar_beams < 4 || !(lidar_range > 0.0) || lidar_period < 1) {
    fail("lidar needs beams >= 4, range > 0 and period >= 1");
  }
  std::set<int> ids;
  for (const auto& s : stations) {
    if (!ids.insert(s.id).second) {
      fail("duplicate station id " + std::to_string(s.id));
    }
  }
  for (const auto& r : obstacles) {
    if (!(r.min.x <= r.max.x && r.min.y <= r.max.y)) {
      fail("obstacle min must not exceed max");
    }
  }
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.map == b.map && a.start == b.start && a.dt == b.dt && a.max_sim_time == b.max_sim_time &&
         a.seed == b.seed && a.capacity == b.capacity && a.planner == b.planner &&
         a.gains_xy == b.gains_xy && a.gains_theta == b.gains_theta &&
         a.pose_source == b.pose_source && a.noise == b.noise &&
         a.stop_distance == b.stop_distance && a.table_height == b.table_height &&
         a.lidar_beams == b.lidar_beams && a.lidar_range == b.lidar_range &&
         a.lidar_period == b.lidar_period && a.obstacles == b.obstacles &&
         a.virtual_walls == b.virtual_walls && a.stations == b.stations;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  StationSpec* station = nullptr;
  std::set<std::string> seen;

  using Handler = std::function<void(std::string_view, const LineError&)>;
  auto number = [](double& field) {
    return Handler([&field](std::string_view v, const LineError& f) { field = to_double(v, f); });
  };
  const std::map<std::string, Handler, std::less<>> global = {
      {"map", [&](std::string_view v, const LineError& f) {
         if (v.empty()) {
           f("map path is empty");
         }
         sc.map = std::string(v);
       }},
      {"start", [&](std::string_view v, const LineError& f) {
         const auto p = to_doubles(v, 3, f);
         sc.start = Pose2D(p[0], p[1], p[2]);
       }},
      {"dt", number(sc.dt)},
      {"max_sim_time", number(sc.max_sim_time)},
      {"seed", [&](std::string_view v, const LineError& f) { sc.seed = to_int<std::uint64_t>(v, f); }},
      {"capacity", [&](std::string_view v, const LineError& f) { sc.capacity = to_int<int>(v, f); }},
      {"planner.k", number(sc.planner.k)},
      {"planner.clearance", number(sc.planner.clearance)},
      {"planner.open_list", [&](std::string_view v, const LineError& f) {
         if (v == "heap") {
           sc.planner.open_list = OpenList::Heap;
         } else if (v == "linear") {
           sc.planner.open_list = OpenList::Linear;
         } else {
           f("planner.open_list must be heap or linear");
         }
       }},
      {"planner.safety", [&](std::string_view v, const LineError& f) {
         if (v == "accumulated") {
           sc.planner.safety = SafetyMode::Accumulated;
         } else if (v == "node_local") {
           sc.planner.safety = SafetyMode::NodeLocal;
         } else {
           f("planner.safety must be accumulated or node_local");
         }
       }},
      {"gains.xy", [&](std::string_view v, const LineError& f) { sc.gains_xy = to_gains(v, f); }},
      {"gains.theta",
       [&](std::string_view v, const LineError& f) { sc.gains_theta = to_gains(v, f); }},
      {"pose_source", [&](std::string_view v, const LineError& f) {
         if (v == "dead_reckoning") {
           sc.pose_source = PoseSource::DeadReckoning;
         } else if (v == "ground_truth") {
           sc.pose_source = PoseSource::GroundTruth;
         } else {
           f("pose_source must be dead_reckoning or ground_truth");
         }
       }},
      {"noise.encoder", number(sc.noise.encoder)},
      {"noise.gyro", number(sc.noise.gyro)},
      {"noise.lidar", number(sc.noise.lidar)},
      {"noise.depth", number(sc.noise.depth)},
      {"stop_distance", number(sc.stop_distance)},
      {"table_height", number(sc.table_height)},
      {"lidar.beams",
       [&](std::string_view v, const LineError& f) { sc.lidar_beams = to_int<int>(v, f); }},
      {"lidar.range", number(sc.lidar_range)},
      {"lidar.period",
       [&](std::string_view v, const LineError& f) { sc.lidar_period = to_int<int>(v, f); }},
  };
  const std::set<std::string, std::less<>> block_keys = {"location", "approach", "present",
                                                         "desired"};
  std::set<std::string> block_seen;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const LineError fail(line_no);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail("expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail("missing key");
    }

    if (const auto it = global.find(key); it != global.end()) {
      if (!seen.insert(std::string(key)).second) {
        fail("duplicate key '" + std::string(key) + "'");
      }
      it->second(value, fail);
    } else if (key == "obstacle") {
      const auto v = to_doubles(value, 4, fail);
      sc.obstacles.push_back({{v[0], v[1]}, {v[2], v[3]}});
    } else if (key == "virtual_wall") {
      const auto v = to_doubles(value, 4, fail);
      sc.virtual_walls.push_back({{v[0], v[1]}, {v[2], v[3]}});
    } else if (key == "station") {
      sc.stations.push_back({});
      station = &sc.stations.back();
      station->id = to_int<int>(value, fail);
      block_seen.clear();
    } else if (block_keys.contains(key)) {
      if (station == nullptr) {
        fail("'" + std::string(key) + "' outside a station block");
      }
      if (!block_seen.insert(std::string(key)).second) {
        fail("duplicate key '" + std::string(key) + "' in station block");
      }
      if (key == "location" || key == "approach") {
        const auto v = to_doubles(value, 2, fail);
        (key == "location" ? station->location : station->approach) = {v[0], v[1]};
      } else {
        (key == "present" ? station->present : station->desired) = to_bag(value, fail);
      }
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
  sc.validate();
  return sc;
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "map = " << s.map << '\n';
  out << "start = " << join({s.start.x, s.start.y, s.start.theta}) << '\n';
  out << "dt = " << format_double(s.dt) << '\n';
  out << "max_sim_time = " << format_double(s.max_sim_time) << '\n';
  out << "seed = " << s.seed << '\n';
  out << "capacity = " << s.capacity << '\n';
  out << "planner.k = " << format_double(s.planner.k) << '\n';
  out << "planner.clearance = " << format_double(s.planner.clearance) << '\n';
  out << "planner.open_list = " << to_string(s.planner.open_list) << '\n';
  out << "planner.safety = "
      << (s.planner.safety == SafetyMode::Accumulated ? "accumulated" : "node_local") << '\n';
  out << "gains.xy = " << gains_text(s.gains_xy) << '\n';
  out << "gains.theta = " << gains_text(s.gains_theta) << '\n';
  out << "pose_source = " << to_string(s.pose_source) << '\n';
  out << "noise.encoder = " << format_double(s.noise.encoder) << '\n';
  out << "noise.gyro = " << format_double(s.noise.gyro) << '\n';
  out << "noise.lidar = " << format_double(s.noise.lidar) << '\n';
  out << "noise.depth = " << format_double(s.noise.depth) << '\n';
  out << "stop_distance = " << format_double(s.stop_distance) << '\n';
  out << "table_height = " << format_double(s.table_height) << '\n';
  out << "lidar.beams = " << s.lidar_beams << '\n';
  out << "lidar.range = " << format_double(s.lidar_range) << '\n';
  out << "lidar.period = " << s.lidar_period << '\n';
  for (const auto& r : s.obstacles) {
    out << "obstacle = " << join({r.min.x, r.min.y, r.max.x, r.max.y}) << '\n';
  }
  for (const auto& w : s.virtual_walls) {
    out << "virtual_wall = " << join({w.a.x, w.a.y, w.b.x, w.b.y}) << '\n';
  }
  for (const auto& st : s.stations) {
    out << "\nstation = " << st.id << '\n';
    out << "location = " << join({st.location.x, st.location.y}) << '\n';
    out << "approach = " << join({st.approach.x, st.approach.y}) << '\n';
    out << (st.present.empty() ? "present =" : "present = ") << join(st.present) << '\n';
    out << (st.desired.empty() ? "desired =" : "desired = ") << join(st.desired) << '\n';
  }
  return out.str();
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError("scenario not found " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str());
  sc.base_dir = path.parent_path();
  return sc;
}

}  // namespace mobman
