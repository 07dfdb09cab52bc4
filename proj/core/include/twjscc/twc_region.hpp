#pragma once

#include <cstdint>
#include <vector>

#include "twjscc/prob.hpp"
#include "twjscc/region.hpp"

namespace twjscc {

struct RatePair {
  double r1 = 0.0;  // transmission rate, terminal 1 -> 2, bits/use
  double r2 = 0.0;  // terminal 2 -> 1
};

// Probability vectors on the standard simplex with `resolution` points per
// edge (resolution >= 2), i.e. masses quantized to multiples of
// 1/(resolution-1).
std::vector<std::vector<double>> simplex_grid(std::size_t dim,
                                              std::size_t resolution);

// (I(X1;Y2|X2), I(X2;Y1|X1)) under independent inputs p1, p2.
RatePair inner_rate_point(const TwoWayChannel& ch, const ProbVec& p1,
                          const ProbVec& p2);

// Same pair under an arbitrary joint input law (row-major over (x1, x2)).
RatePair joint_rate_point(const TwoWayChannel& ch,
                          std::span<const double> input_joint);

// Capacity inner bound: hull over a product grid of the two input simplexes.
RegionBoundary inner_region(const TwoWayChannel& ch,
                            std::size_t grid_resolution = 17);

// Capacity outer bound: hull over joint input laws; exhaustive grid when the
// joint simplex has at most 4 cells, always refined by seeded hill climbing
// of lambda * r1 + (1 - lambda) * r2 over a 33-point lambda grid.
RegionBoundary outer_region(const TwoWayChannel& ch,
                            std::size_t grid_resolution = 17,
                            int restarts = 8, std::uint64_t seed = 1);

struct CoincidenceReport {
  bool coincide = false;
  double gap = 0.0;  // two-sided Hausdorff distance between the hulls
};

CoincidenceReport regions_coincide(const TwoWayChannel& ch, double tol,
                                   std::size_t grid_resolution = 17,
                                   int restarts = 8, std::uint64_t seed = 1);

}  // namespace twjscc
