#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "twjscc/prob.hpp"

namespace twjscc {

// One sampled point of a rate-distortion function, tagged with the Lagrange
// slope (<= 0) that produced it.
struct RDPoint {
  double distortion = 0.0;
  double rate = 0.0;
  double slope = 0.0;
};

// Samples of a convex nonincreasing R(D), ordered by increasing distortion.
struct RDCurve {
  std::vector<RDPoint> points;
};

// Picks which source axis of a JointSourcePMF is compressed; the other axis
// is the side information.
enum class SourceSelect { kFirst, kSecond };

// Blahut-Arimoto iteration failed to reach `tol` within max_iter; carries the
// last iterate so callers can inspect how close it got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, RDPoint last)
      : std::runtime_error(what), last_iterate(last) {}
  RDPoint last_iterate;
};

// Blahut-Arimoto at a fixed slope.  Returns a point on the lower convex
// envelope of R(D); the fixed-point residual max log2 c(s_hat) is driven
// below tol.  slope = 0 returns the zero-rate endpoint exactly.
RDPoint ba_rd(const ProbVec& source, const DistortionMatrix& d, double slope,
              double tol = 1e-9, int max_iter = 10000);

// R(D) at a target distortion: slope bisection on [-50, 0], 60 steps, value
// taken as the max of the supporting lines of the sampled envelope points.
double rd_at_distortion(const ProbVec& source, const DistortionMatrix& d,
                        double target_d);

// Largest finite distortion of interest: the best constant-reconstruction
// level (standard), or its side-information-aware version (conditional).
double rd_max_distortion(const ProbVec& source, const DistortionMatrix& d);
double conditional_rd_max_distortion(const JointSourcePMF& joint,
                                     const DistortionMatrix& d,
                                     SourceSelect which = SourceSelect::kFirst);

// rd_at_distortion plus the achieving test channel (rows P(s_hat | s)) from
// the final bisection slope; point holds that channel's exact (D, R), with
// D <= target_d.
struct RDSolution {
  RDPoint point;
  CondPMF test_channel;
};
RDSolution rd_solve_at_distortion(const ProbVec& source,
                                  const DistortionMatrix& d, double target_d);

// Conditional RD: min over per-conditional allocations of the averaged rate,
// solved by running every conditional source at a common slope and bisecting
// that slope to meet the averaged distortion target.  Zero-mass conditioning
// symbols are skipped.
double conditional_rd(const JointSourcePMF& joint, const DistortionMatrix& d,
                      double target_d,
                      SourceSelect which = SourceSelect::kFirst);

// Curve sampling over a sorted distortion grid (entries within [0, D_max]).
RDCurve rd_curve(const ProbVec& source, const DistortionMatrix& d,
                 std::span<const double> grid);
RDCurve conditional_rd_curve(const JointSourcePMF& joint,
                             const DistortionMatrix& d,
                             std::span<const double> grid,
                             SourceSelect which = SourceSelect::kFirst);

// Smallest distortion on the piecewise-linear interpolation of `curve` whose
// rate is <= rate; clamps to the curve ends.
double rd_inverse(const RDCurve& curve, double rate);

}  // namespace twjscc
