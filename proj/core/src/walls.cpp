#include <algorithm>
#include <iterator>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mobman/perception.hpp"
#include "mobman/random.hpp"

namespace mobman {

namespace {

constexpr std::size_t kMaxHypotheses = 400;

struct Line {
  Point2 point;
  Point2 dir;  // unit

  double distance(Point2 p) const {
    const Point2 d = p - point;
    return std::abs(d.x * dir.y - d.y * dir.x);
  }
};

std::vector<std::size_t> inliers_of(const Line& line, const std::vector<Point2>& pts,
                                    const std::vector<std::size_t>& candidates, double tol) {
  std::vector<std::size_t> out;
  for (const std::size_t i : candidates) {
    if (line.distance(pts[i]) < tol) {
      out.push_back(i);
    }
  }
  return out;
}

// Total least squares line through the given points.
Line fit_line(const std::vector<Point2>& pts, const std::vector<std::size_t>& idx) {
  Point2 mean;
  for (const std::size_t i : idx) {
    mean = mean + pts[i];
  }
  mean = (1.0 / static_cast<double>(idx.size())) * mean;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const std::size_t i : idx) {
    const Point2 d = pts[i] - mean;
    sxx += d.x * d.x;
    syy += d.y * d.y;
    sxy += d.x * d.y;
  }
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return {mean, {std::cos(angle), std::sin(angle)}};
}

}  // namespace

double distance_to_line(const WallSegment& seg, Point2 p) {
  return Line{seg.line_point, seg.line_direction}.distance(p);
}

std::vector<WallSegment> detect_virtual_walls(const std::vector<Point2>& points, double dist_tol,
                                              int min_support, std::uint64_t seed) {
  if (!(dist_tol > 0.0)) {
    throw std::invalid_argument("detect_virtual_walls: dist_tol must be > 0");
  }
  if (min_support < 2) {
    throw std::invalid_argument("detect_virtual_walls: min_support must be >= 2");
  }
  Rng rng(seed);
  std::vector<std::size_t> remaining(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    remaining[i] = i;
  }

  std::vector<WallSegment> walls;
  while (remaining.size() >= static_cast<std::size_t>(min_support)) {
    const std::size_t m = remaining.size();
    const std::size_t pairs = m * (m - 1) / 2;

    std::optional<Line> best_line;
    std::vector<std::size_t> best;
    auto consider = [&](std::size_t a, std::size_t b) {
      const Point2 pa = points[remaining[a]];
      const Point2 pb = points[remaining[b]];
      const double len = distance(pa, pb);
      if (len < 1e-12) {
        return;
      }
      const Line line{pa, (1.0 / len) * (pb - pa)};
      auto in = inliers_of(line, points, remaining, dist_tol);
      if (in.size() > best.size()) {
        best = std::move(in);
        best_line = line;
      }
    };
    if (pairs <= kMaxHypotheses) {
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
          consider(a, b);
        }
      }
    } else {
      for (std::size_t k = 0; k < kMaxHypotheses; ++k) {
        const std::size_t a = uniform_index(rng, m);
        std::size_t b = uniform_index(rng, m - 1);
        if (b >= a) {
          ++b;
        }
        consider(a, b);
      }
    }
    if (!best_line || best.size() < static_cast<std::size_t>(min_support)) {
      break;
    }

    Line line = *best_line;
    const Line refined = fit_line(points, best);
    auto refined_in = inliers_of(refined, points, remaining, dist_tol);
    if (refined_in.size() >= best.size()) {
      line = refined;
      best = std::move(refined_in);
    }

    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -t_min;
    for (const std::size_t i : best) {
      const double t = dot(points[i] - line.point, line.dir);
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
    }
    if (!(t_max > t_min)) {
      break;
    }

    WallSegment seg;
    seg.p1 = line.point + t_min * line.dir;
    seg.p2 = line.point + t_max * line.dir;
    seg.inlier_count = static_cast<int>(best.size());
    seg.line_point = line.point;
    seg.line_direction = line.dir;
    for (const std::size_t i : best) {
      seg.inliers.push_back(points[i]);
    }
    walls.push_back(std::move(seg));

    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - best.size());
    std::set_difference(remaining.begin(), remaining.end(), best.begin(), best.end(),
                        std::back_inserter(rest));
    remaining = std::move(rest);
  }
  return walls;
}

}  // namespace mobman
