#pragma once

#include <vector>

namespace twjscc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Which way a region is comprehensive: rate regions extend toward the
// origin, distortion regions toward larger coordinates.
enum class RegionOrientation { kTowardOrigin, kTowardInfinity };

// A finite 2-D point set together with its convex closure.  For rate regions
// the closure includes the axis projections and the origin; for distortion
// regions the upper-right corner of the sampled bounding box.
struct RegionBoundary {
  std::vector<Point2> points;
  std::vector<Point2> hull;  // counterclockwise, extreme vertices only
  RegionOrientation orientation = RegionOrientation::kTowardOrigin;
};

// Monotone-chain convex hull; collinear points dropped.  Returns the input
// (deduplicated) when fewer than 3 extreme points exist.
std::vector<Point2> convex_hull(std::vector<Point2> pts);

// Closure helpers per orientation (see RegionBoundary).
RegionBoundary make_rate_region(std::vector<Point2> pts);
RegionBoundary make_distortion_region(std::vector<Point2> pts);

// Point-in-convex-polygon with tolerance; degenerate hulls (< 3 vertices)
// fall back to distance-to-segment checks.
bool hull_contains(const std::vector<Point2>& hull, Point2 p, double tol);

// Membership that honors the comprehensive direction: coordinates beyond the
// sampled bounding box are clamped toward it before the hull test.
bool region_contains(const RegionBoundary& region, Point2 p, double tol);

// Two-sided Hausdorff distance between the filled convex hulls.
double hausdorff_gap(const std::vector<Point2>& hull_a,
                     const std::vector<Point2>& hull_b);

}  // namespace twjscc
