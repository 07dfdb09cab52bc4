#include "twjscc/converse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "twjscc/wyner_ziv.hpp"

namespace twjscc {

namespace {

void check_rate(RateRatio rate) {
  if (rate.k < 1 || rate.n < 1)
    throw std::invalid_argument("RateRatio: k and n must be >= 1");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

// Running minimum from the left: keeps each point a valid upper estimate
// while restoring the nonincreasing shape rd_inverse relies on.
void enforce_nonincreasing(RDCurve& c) {
  for (std::size_t i = 1; i < c.points.size(); ++i)
    c.points[i].rate = std::min(c.points[i].rate, c.points[i - 1].rate);
}

RDCurve wz_curve(const JointSourcePMF& src, const DistortionMatrix& d,
                 std::span<const double> grid, SourceSelect which,
                 int restarts, std::uint64_t seed) {
  RDCurve c;
  c.points.reserve(grid.size());
  for (double target : grid) {
    const WZResult r = wz_rd(src, d, target, restarts, seed, which);
    c.points.push_back({target, r.rate, 0.0});
  }
  enforce_nonincreasing(c);
  return c;
}

// Maps every vertex and interpolated edge point of the rate hull through the
// inverse curves; the downward closure in rate space becomes closure toward
// larger distortions.
RegionBoundary map_rates_to_distortions(const RegionBoundary& rate_region,
                                        const RDCurve& c1, const RDCurve& c2,
                                        double n_over_k) {
  constexpr std::size_t kEdgeSamples = 8;
  std::vector<Point2> pts;
  const auto& hull = rate_region.hull;
  auto map_point = [&](double r1, double r2) {
    pts.push_back(
        {rd_inverse(c1, n_over_k * r1), rd_inverse(c2, n_over_k * r2)});
  };
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    map_point(a.x, a.y);
    for (std::size_t t = 1; t < kEdgeSamples; ++t) {
      const double f = static_cast<double>(t) / kEdgeSamples;
      map_point(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y));
    }
  }
  if (pts.empty()) pts.push_back({rd_inverse(c1, 0), rd_inverse(c2, 0)});
  return make_distortion_region(std::move(pts));
}

Membership classify(const RegionBoundary& region, Point2 p, double tol) {
  if (region_contains(region, p, -tol)) return Membership::kInside;
  if (region_contains(region, p, tol)) return Membership::kBoundary;
  return Membership::kOutside;
}

}  // namespace

RegionBoundary outer_distortion_region(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate,
                                       std::size_t grid_resolution) {
  check_rate(rate);
  const double dm1 = conditional_rd_max_distortion(src, d1, SourceSelect::kFirst);
  const double dm2 =
      conditional_rd_max_distortion(src, d2, SourceSelect::kSecond);
  const auto g1 = linspace(0, dm1, grid_resolution);
  const auto g2 = linspace(0, dm2, grid_resolution);
  RDCurve c1 = conditional_rd_curve(src, d1, g1, SourceSelect::kFirst);
  RDCurve c2 = conditional_rd_curve(src, d2, g2, SourceSelect::kSecond);
  enforce_nonincreasing(c1);
  enforce_nonincreasing(c2);
  const RegionBoundary rates = outer_region(ch);
  return map_rates_to_distortions(rates, c1, c2,
                                  static_cast<double>(rate.n) / rate.k);
}

RegionBoundary sscc_inner_distortion_region(const JointSourcePMF& src,
                                            const TwoWayChannel& ch,
                                            const DistortionMatrix& d1,
                                            const DistortionMatrix& d2,
                                            RateRatio rate,
                                            std::size_t grid_resolution,
                                            int wz_restarts,
                                            std::uint64_t seed) {
  check_rate(rate);
  const double dm1 = conditional_rd_max_distortion(src, d1, SourceSelect::kFirst);
  const double dm2 =
      conditional_rd_max_distortion(src, d2, SourceSelect::kSecond);
  const RDCurve c1 = wz_curve(src, d1, linspace(0, dm1, grid_resolution),
                              SourceSelect::kFirst, wz_restarts, seed);
  const RDCurve c2 = wz_curve(src, d2, linspace(0, dm2, grid_resolution),
                              SourceSelect::kSecond, wz_restarts, seed + 1);
  const RegionBoundary rates = inner_region(ch);
  return map_rates_to_distortions(rates, c1, c2,
                                  static_cast<double>(rate.n) / rate.k);
}

Membership outer_distortion_membership(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate,
                                       std::pair<double, double> target,
                                       double tol) {
  check_rate(rate);
  const double kn = rate.ratio();
  const Point2 p{kn * conditional_rd(src, d1, target.first, SourceSelect::kFirst),
                 kn * conditional_rd(src, d2, target.second,
                                     SourceSelect::kSecond)};
  return classify(outer_region(ch), p, tol);
}

Membership sscc_inner_membership(const JointSourcePMF& src,
                                 const TwoWayChannel& ch,
                                 const DistortionMatrix& d1,
                                 const DistortionMatrix& d2, RateRatio rate,
                                 std::pair<double, double> target, double tol,
                                 int wz_restarts, std::uint64_t seed) {
  check_rate(rate);
  const double kn = rate.ratio();
  const Point2 p{
      kn * wz_rd(src, d1, target.first, wz_restarts, seed, SourceSelect::kFirst)
               .rate,
      kn * wz_rd(src, d2, target.second, wz_restarts, seed + 1,
                 SourceSelect::kSecond)
               .rate};
  return classify(inner_region(ch), p, tol);
}

DistortionRegionReport theorem3_region(const JointSourcePMF& src,
                                       const TwoWayChannel& ch,
                                       const DistortionMatrix& d1,
                                       const DistortionMatrix& d2,
                                       RateRatio rate, double tol_hyp,
                                       std::size_t grid_resolution,
                                       int wz_restarts, std::uint64_t seed) {
  check_rate(rate);
  if (tol_hyp <= 0)
    throw std::invalid_argument("theorem3_region: tol_hyp must be > 0");

  DistortionRegionReport rep;
  const double dm1 = conditional_rd_max_distortion(src, d1, SourceSelect::kFirst);
  const double dm2 =
      conditional_rd_max_distortion(src, d2, SourceSelect::kSecond);
  const auto g1 = linspace(0, dm1, grid_resolution);
  const auto g2 = linspace(0, dm2, grid_resolution);

  RDCurve cond1 = conditional_rd_curve(src, d1, g1, SourceSelect::kFirst);
  RDCurve cond2 = conditional_rd_curve(src, d2, g2, SourceSelect::kSecond);
  enforce_nonincreasing(cond1);
  enforce_nonincreasing(cond2);
  const RDCurve wz1 =
      wz_curve(src, d1, g1, SourceSelect::kFirst, wz_restarts, seed);
  const RDCurve wz2 =
      wz_curve(src, d2, g2, SourceSelect::kSecond, wz_restarts, seed + 1);

  for (std::size_t i = 0; i < g1.size(); ++i)
    rep.flags.gap_wz1 = std::max(
        rep.flags.gap_wz1, wz1.points[i].rate - cond1.points[i].rate);
  for (std::size_t i = 0; i < g2.size(); ++i)
    rep.flags.gap_wz2 = std::max(
        rep.flags.gap_wz2, wz2.points[i].rate - cond2.points[i].rate);
  rep.flags.wz_equals_cond1 = rep.flags.gap_wz1 <= tol_hyp;
  rep.flags.wz_equals_cond2 = rep.flags.gap_wz2 <= tol_hyp;

  const CoincidenceReport cr = regions_coincide(ch, tol_hyp);
  rep.flags.bounds_coincide = cr.coincide;
  rep.flags.gap_bounds = cr.gap;

  const double n_over_k = static_cast<double>(rate.n) / rate.k;
  rep.outer = map_rates_to_distortions(outer_region(ch), cond1, cond2,
                                       n_over_k);
  rep.inner_sscc =
      map_rates_to_distortions(inner_region(ch), wz1, wz2, n_over_k);
  if (rep.flags.all()) rep.exact = rep.inner_sscc;
  return rep;
}

}  // namespace twjscc
