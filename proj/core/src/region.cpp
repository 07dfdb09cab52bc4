#include "twjscc/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twjscc {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double seg_dist(const Point2& a, const Point2& b, const Point2& p) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  double px = a.x + t * dx - p.x, py = a.y + t * dy - p.y;
  return std::sqrt(px * px + py * py);
}

double dist_to_hull(const std::vector<Point2>& hull, Point2 p) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull_contains(hull, p, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    best = std::min(best, seg_dist(a, b, p));
  }
  return best;
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;

  std::vector<Point2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

RegionBoundary make_rate_region(std::vector<Point2> pts) {
  RegionBoundary region;
  region.orientation = RegionOrientation::kTowardOrigin;
  region.points = pts;
  double xmax = 0, ymax = 0;
  for (const Point2& p : pts) {
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  pts.push_back({0.0, 0.0});
  pts.push_back({xmax, 0.0});
  pts.push_back({0.0, ymax});
  region.hull = convex_hull(std::move(pts));
  return region;
}

RegionBoundary make_distortion_region(std::vector<Point2> pts) {
  RegionBoundary region;
  region.orientation = RegionOrientation::kTowardInfinity;
  region.points = pts;
  if (!pts.empty()) {
    double xmax = -std::numeric_limits<double>::infinity(), ymax = xmax;
    for (const Point2& p : pts) {
      xmax = std::max(xmax, p.x);
      ymax = std::max(ymax, p.y);
    }
    pts.push_back({xmax, ymax});
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    for (const Point2& p : region.points) {
      xmin = std::min(xmin, p.x);
      ymin = std::min(ymin, p.y);
    }
    pts.push_back({xmin, ymax});
    pts.push_back({xmax, ymin});
  }
  region.hull = convex_hull(std::move(pts));
  return region;
}

bool hull_contains(const std::vector<Point2>& hull, Point2 p, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) {
    return std::hypot(hull[0].x - p.x, hull[0].y - p.y) <= tol;
  }
  if (hull.size() == 2) return seg_dist(hull[0], hull[1], p) <= tol;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len <= 0.0) continue;
    // Signed distance to the edge line; negative = outside a CCW polygon.
    if (cross(a, b, p) / len < -tol) return false;
  }
  return true;
}

bool region_contains(const RegionBoundary& region, Point2 p, double tol) {
  if (region.hull.empty()) return false;
  if (region.orientation == RegionOrientation::kTowardInfinity) {
    double xmax = -std::numeric_limits<double>::infinity(), ymax = xmax;
    for (const Point2& v : region.hull) {
      xmax = std::max(xmax, v.x);
      ymax = std::max(ymax, v.y);
    }
    p.x = std::min(p.x, xmax);
    p.y = std::min(p.y, ymax);
  }
  return hull_contains(region.hull, p, tol);
}

double hausdorff_gap(const std::vector<Point2>& hull_a,
                     const std::vector<Point2>& hull_b) {
  if (hull_a.empty() || hull_b.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  double gap = 0;
  for (const Point2& p : hull_a) gap = std::max(gap, dist_to_hull(hull_b, p));
  for (const Point2& p : hull_b) gap = std::max(gap, dist_to_hull(hull_a, p));
  return gap;
}

}  // namespace twjscc
