#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "twjscc/prob.hpp"
#include "twjscc/rd.hpp"
#include "twjscc/region.hpp"
#include "twjscc/twc_region.hpp"

namespace twjscc {

// Code rate as the exact rational k source symbols per n channel uses.
struct RateRatio {
  int k = 1;
  int n = 1;

  double ratio() const { return static_cast<double>(k) / n; }
};

// Genie-aided outer bound on the achievable distortion pairs: (D1, D2) is
// allowed iff the rate pair ((k/n) R_{S1|S2}(D1), (k/n) R_{S2|S1}(D2)) lies
// in the capacity outer region (shared joint input law).  The boundary is
// sampled through the conditional RD curves and closed toward larger
// distortions.
RegionBoundary outer_distortion_region(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate,
                                       std::size_t grid_resolution = 33);

// Achievable-by-construction inner region: Wyner-Ziv rate estimates against
// the capacity inner region (independent inputs).  WZ rates are upper
// estimates, so this region can only under-cover the truth.
RegionBoundary sscc_inner_distortion_region(const JointSourcePMF& src,
                                            const TwoWayChannel& ch,
                                            const DistortionMatrix& d1,
                                            const DistortionMatrix& d2,
                                            RateRatio rate,
                                            std::size_t grid_resolution = 33,
                                            int wz_restarts = 8,
                                            std::uint64_t seed = 1);

enum class Membership { kInside, kBoundary, kOutside };

// Exact membership queries (per-point solver calls, no curve sampling).
// Points within `tol` of the region boundary are labeled kBoundary.
Membership outer_distortion_membership(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate,
                                       std::pair<double, double> target,
                                       double tol = 1e-9);
Membership sscc_inner_membership(const JointSourcePMF& src,
                                 const TwoWayChannel& ch,
                                 const DistortionMatrix& d1,
                                 const DistortionMatrix& d2, RateRatio rate,
                                 std::pair<double, double> target,
                                 double tol = 1e-9, int wz_restarts = 8,
                                 std::uint64_t seed = 1);

struct HypothesisFlags {
  bool wz_equals_cond1 = false;  // max_D (R_WZ - R_cond) <= tol, direction 1
  bool wz_equals_cond2 = false;
  bool bounds_coincide = false;  // capacity inner/outer Hausdorff gap <= tol
  double gap_wz1 = 0, gap_wz2 = 0, gap_bounds = 0;

  bool all() const { return wz_equals_cond1 && wz_equals_cond2 && bounds_coincide; }
};

struct DistortionRegionReport {
  RegionBoundary outer;
  RegionBoundary inner_sscc;
  // Present only when every hypothesis holds within tol; then the inner and
  // outer regions pinch together and the region is exact.
  std::optional<RegionBoundary> exact;
  HypothesisFlags flags;
};

// Measures the two hypotheses (side-information rate loss vanishes in both
// directions; capacity bounds coincide) on a distortion grid, then reports
// the inner/outer sandwich, pinched to an exact region when both hold.
DistortionRegionReport theorem3_region(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate, double tol_hyp = 5e-3,
                                       std::size_t grid_resolution = 33,
                                       int wz_restarts = 8,
                                       std::uint64_t seed = 1);

}  // namespace twjscc
