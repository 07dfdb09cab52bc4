#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "support/models.hpp"
#include "twjscc/info.hpp"
#include "twjscc/region.hpp"
#include "twjscc/twc_region.hpp"

using namespace twjscc;

TEST_SUITE("region") {

TEST_CASE("hull keeps extreme vertices only") {
  std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1},   {0, 1},
                             {0.5, 0.5}, {0.5, 0}, {1, 0}};
  std::vector<Point2> hull = convex_hull(pts);
  REQUIRE(hull.size() == 4);
  // Counterclockwise orientation: positive signed area.
  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  CHECK(area2 == doctest::Approx(2.0));
}

TEST_CASE("degenerate hulls are deduplicated endpoints") {
  std::vector<Point2> point = convex_hull({{0.3, 0.7}, {0.3, 0.7}});
  REQUIRE(point.size() == 1);
  std::vector<Point2> seg = convex_hull({{0, 0}, {0.5, 0.5}, {1, 1}});
  CHECK(seg.size() == 2);
}

TEST_CASE("membership respects the tolerance") {
  std::vector<Point2> hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(hull_contains(hull, {0.5, 0.5}, 0.0));
  CHECK(hull_contains(hull, {1.0, 1.0}, 1e-12));
  CHECK(hull_contains(hull, {1.005, 0.5}, 1e-2));
  CHECK_FALSE(hull_contains(hull, {1.05, 0.5}, 1e-2));
  std::vector<Point2> seg = convex_hull({{0, 0}, {1, 1}});
  CHECK(hull_contains(seg, {0.5, 0.5}, 1e-9));
  CHECK_FALSE(hull_contains(seg, {0.5, 0.6}, 1e-3));
}

TEST_CASE("rate closure reaches the origin and the axes") {
  RegionBoundary r = make_rate_region({{1.0, 0.5}});
  CHECK(r.orientation == RegionOrientation::kTowardOrigin);
  CHECK(region_contains(r, {0.0, 0.0}, 1e-12));
  CHECK(region_contains(r, {1.0, 0.0}, 1e-12));
  CHECK(region_contains(r, {0.0, 0.5}, 1e-12));
  CHECK(region_contains(r, {0.999, 0.499}, 1e-12));
  CHECK_FALSE(region_contains(r, {1.001, 0.5}, 1e-6));
  // Membership is pure polygon geometry: negative coordinates sit outside
  // the closure, callers clamp before querying when they mean to.
  CHECK_FALSE(region_contains(r, {-0.5, 0.25}, 1e-12));
}

TEST_CASE("distortion closure reaches larger coordinates") {
  RegionBoundary d = make_distortion_region({{0.1, 0.4}, {0.3, 0.05}});
  CHECK(d.orientation == RegionOrientation::kTowardInfinity);
  CHECK(region_contains(d, {0.3, 0.4}, 1e-12));
  CHECK(region_contains(d, {5.0, 5.0}, 1e-12));
  CHECK(region_contains(d, {0.2, 0.25}, 1e-9));
  CHECK_FALSE(region_contains(d, {0.05, 0.05}, 1e-6));
}

TEST_CASE("hausdorff distance measures the worst excursion") {
  std::vector<Point2> unit = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  std::vector<Point2> wide = convex_hull({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  std::vector<Point2> small = convex_hull({{0, 0}, {0.5, 0}, {0.5, 0.5},
                                           {0, 0.5}});
  CHECK(hausdorff_gap(unit, unit) == doctest::Approx(0.0));
  CHECK(hausdorff_gap(unit, wide) == doctest::Approx(1.0));
  CHECK(hausdorff_gap(wide, unit) == doctest::Approx(1.0));
  CHECK(hausdorff_gap(unit, small) == doctest::Approx(std::sqrt(0.5)));
}

}  // TEST_SUITE

TEST_SUITE("twc_region") {

TEST_CASE("simplex grids quantize to the advertised step") {
  auto g2 = simplex_grid(2, 5);
  REQUIRE(g2.size() == 5);
  for (const auto& p : g2) {
    CHECK(p.size() == 2);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p[0] * 4.0 - std::round(p[0] * 4.0)) < 1e-12);
  }
  auto g3 = simplex_grid(3, 3);
  CHECK(g3.size() == 6);
  for (const auto& p : g3)
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noiseless crossed wires carry one bit each way") {
  TwoWayChannel ch = fixtures::crossover_channel();
  RatePair r = inner_rate_point(ch, ProbVec::uniform(2), ProbVec::uniform(2));
  CHECK(r.r1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shared additive noise costs the same in both directions") {
  TwoWayChannel ch = fixtures::additive_noise_channel(0.05);
  RatePair r = inner_rate_point(ch, ProbVec::uniform(2), ProbVec::uniform(2));
  const double want = 1.0 - binary_entropy(0.05);
  CHECK(r.r1 == doctest::Approx(want).epsilon(1e-9));
  CHECK(r.r2 == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("asymmetric link laws give asymmetric rates") {
  TwoWayChannel ch = fixtures::xor_and_channel(0.05);
  RatePair r = inner_rate_point(ch, ProbVec::uniform(2), ProbVec::uniform(2));
  // Multiplicative reading: half the time the other input blanks the link.
  CHECK(r.r1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.r2 == doctest::Approx(1.0 - binary_entropy(0.05)).epsilon(1e-9));
}

TEST_CASE("product joint laws agree with independent inputs") {
  TwoWayChannel ch = fixtures::xor_and_channel(0.05);
  ProbVec p1({0.3, 0.7});
  ProbVec p2({0.8, 0.2});
  std::vector<double> joint(4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) joint[a * 2 + b] = p1[a] * p2[b];
  RatePair pi = inner_rate_point(ch, p1, p2);
  RatePair pj = joint_rate_point(ch, joint);
  CHECK(pi.r1 == doctest::Approx(pj.r1).epsilon(1e-12));
  CHECK(pi.r2 == doctest::Approx(pj.r2).epsilon(1e-12));
}

TEST_CASE("channels that ignore their inputs support no rate") {
  for (const TwoWayChannel& ch :
       {fixtures::useless_channel(), fixtures::constant_channel()}) {
    RegionBoundary inner = inner_region(ch, 9);
    for (const Point2& v : inner.hull) {
      CHECK(v.x == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(v.y == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("refining the grid never shrinks the sampled region") {
  TwoWayChannel ch = fixtures::xor_and_channel(0.05);
  RegionBoundary coarse = inner_region(ch, 9);
  RegionBoundary fine = inner_region(ch, 17);
  for (const Point2& v : coarse.hull) CHECK(region_contains(fine, v, 1e-12));
}

TEST_CASE("joint input laws cover every independent-input point") {
  for (const TwoWayChannel& ch :
       {fixtures::crossover_channel(), fixtures::xor_and_channel(0.05),
        fixtures::additive_noise_channel(0.05)}) {
    RegionBoundary inner = inner_region(ch, 17);
    RegionBoundary outer = outer_region(ch, 17, 4, 1);
    for (const Point2& v : inner.hull) CHECK(region_contains(outer, v, 1e-9));
  }
}

TEST_CASE("containment holds on randomized channels") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TwoWayChannel ch = fixtures::random_channel(seed);
    RegionBoundary inner = inner_region(ch, 9);
    RegionBoundary outer = outer_region(ch, 9, 4, seed);
    for (const Point2& v : inner.hull) CHECK(region_contains(outer, v, 1e-9));
  }
}

TEST_CASE("noiseless and additive channels have matching bounds") {
  CoincidenceReport cross = regions_coincide(fixtures::crossover_channel(),
                                             1e-6, 17, 4, 1);
  CHECK(cross.coincide);
  CHECK(cross.gap <= 1e-6);
  CoincidenceReport add =
      regions_coincide(fixtures::additive_noise_channel(0.05), 1e-2, 17, 4, 1);
  CHECK(add.coincide);
  CoincidenceReport mixed =
      regions_coincide(fixtures::xor_and_channel(0.05), 1e-2, 17, 4, 1);
  CHECK(mixed.coincide);
  CHECK(mixed.gap < 5e-3);
}

TEST_CASE("grid parameters below two are rejected") {
  CHECK_THROWS_AS(simplex_grid(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(inner_region(fixtures::crossover_channel(), 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
