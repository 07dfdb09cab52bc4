#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "support/models.hpp"
#include "twjscc/converse.hpp"
#include "twjscc/info.hpp"
#include "twjscc/rd.hpp"

using namespace twjscc;

namespace {

DistortionMatrix ham() { return DistortionMatrix::hamming(2); }

}  // namespace

TEST_SUITE("converse") {

TEST_CASE("operating points of working schemes clear the genie bound") {
  JointSourcePMF src = fixtures::example1_source();
  TwoWayChannel ch = fixtures::xor_and_channel();
  const RateRatio one{1, 1};
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), one,
                                    {0.0, 1.0 / 30}, 1e-6) ==
        Membership::kInside);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), one,
                                    {1.0 / 6, 0.0}, 1e-6) ==
        Membership::kInside);
}

TEST_CASE("lossless both ways on the worked example is impossible") {
  JointSourcePMF src = fixtures::example1_source();
  TwoWayChannel ch = fixtures::xor_and_channel();
  // Perfection needs 2/3 of a bit per direction, but no joint input law
  // supports that rate pair on this channel.
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), {1, 1}, {0.0, 0.0},
                                    1e-6) == Membership::kOutside);
}

TEST_CASE("symmetric links put the threshold exactly at the noise level") {
  JointSourcePMF src = fixtures::product_uniform();
  TwoWayChannel ch = fixtures::additive_noise_channel(0.05);
  const RateRatio one{1, 1};
  // Required rate 1 - h(D) meets capacity 1 - h(0.05) exactly at D = 0.05.
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), one, {0.05, 0.05},
                                    1e-6) == Membership::kBoundary);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), one, {0.07, 0.07},
                                    1e-6) == Membership::kInside);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), one, {0.03, 0.03},
                                    1e-6) == Membership::kOutside);
}

TEST_CASE("constructive membership agrees away from the boundary") {
  JointSourcePMF src = fixtures::product_uniform();
  TwoWayChannel ch = fixtures::additive_noise_channel(0.05);
  const RateRatio one{1, 1};
  CHECK(sscc_inner_membership(src, ch, ham(), ham(), one, {0.07, 0.07},
                              1e-6) == Membership::kInside);
  CHECK(sscc_inner_membership(src, ch, ham(), ham(), one, {0.03, 0.03},
                              1e-6) == Membership::kOutside);
}

TEST_CASE("spending more channel uses per symbol can only help") {
  JointSourcePMF src = fixtures::product_uniform();
  TwoWayChannel ch = fixtures::additive_noise_channel(0.05);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), {2, 1},
                                    {0.05, 0.05}, 1e-6) ==
        Membership::kOutside);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), {1, 2},
                                    {0.02, 0.02}, 1e-6) == Membership::kInside);

  RegionBoundary tight = outer_distortion_region(src, ch, ham(), ham(), {1, 1});
  RegionBoundary roomy = outer_distortion_region(src, ch, ham(), ham(), {1, 2});
  for (const Point2& v : tight.hull) CHECK(region_contains(roomy, v, 1e-9));
}

TEST_CASE("channels that carry nothing allow only the free point") {
  JointSourcePMF src = fixtures::dsbs(0.2);
  TwoWayChannel ch = fixtures::useless_channel();
  const double dm1 = conditional_rd_max_distortion(src, ham());
  const double dm2 =
      conditional_rd_max_distortion(src, ham(), SourceSelect::kSecond);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), {1, 1},
                                    {0.9 * dm1, 0.9 * dm2},
                                    1e-6) == Membership::kOutside);
  CHECK(outer_distortion_membership(src, ch, ham(), ham(), {1, 1}, {dm1, dm2},
                                    1e-6) != Membership::kOutside);
}

TEST_CASE("sampled construction stays inside the sampled bound") {
  JointSourcePMF src = fixtures::example1_source();
  TwoWayChannel ch = fixtures::xor_and_channel();
  RegionBoundary outer =
      outer_distortion_region(src, ch, ham(), ham(), {1, 1}, 17);
  RegionBoundary inner =
      sscc_inner_distortion_region(src, ch, ham(), ham(), {1, 1}, 17, 4, 1);
  for (const Point2& v : inner.hull) CHECK(region_contains(outer, v, 1e-6));
}

TEST_CASE("hypothesis flags pass on the worked example") {
  JointSourcePMF src = fixtures::example1_source();
  TwoWayChannel ch = fixtures::xor_and_channel();
  DistortionRegionReport rep =
      theorem3_region(src, ch, ham(), ham(), {1, 1}, 5e-3, 17, 4, 1);
  CHECK(rep.flags.wz_equals_cond1);
  CHECK(rep.flags.wz_equals_cond2);
  CHECK(rep.flags.bounds_coincide);
  CHECK(rep.flags.all());
  REQUIRE(rep.exact.has_value());
  CHECK(rep.flags.gap_bounds < 5e-3);
  CHECK(rep.flags.gap_wz1 <= 5e-3);
  CHECK(rep.flags.gap_wz2 <= 5e-3);
  // The pinched region is the constructive one.
  REQUIRE(rep.exact->hull.size() == rep.inner_sscc.hull.size());
  for (std::size_t i = 0; i < rep.exact->hull.size(); ++i) {
    CHECK(rep.exact->hull[i].x == rep.inner_sscc.hull[i].x);
    CHECK(rep.exact->hull[i].y == rep.inner_sscc.hull[i].y);
  }
}

TEST_CASE("a strict side-information penalty defeats the pinch") {
  JointSourcePMF src = fixtures::dsbs(0.25);
  TwoWayChannel ch = fixtures::additive_noise_channel(0.05);
  DistortionRegionReport rep =
      theorem3_region(src, ch, ham(), ham(), {1, 1}, 5e-3, 17, 4, 1);
  CHECK_FALSE(rep.flags.wz_equals_cond1);
  CHECK(rep.flags.gap_wz1 > 5e-3);
  CHECK(rep.flags.bounds_coincide);
  CHECK_FALSE(rep.exact.has_value());
}

TEST_CASE("malformed parameters are rejected") {
  JointSourcePMF src = fixtures::dsbs(0.2);
  TwoWayChannel ch = fixtures::useless_channel();
  CHECK_THROWS_AS(outer_distortion_membership(src, ch, ham(), ham(), {0, 1},
                                              {0.1, 0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      theorem3_region(src, ch, ham(), ham(), {1, 1}, 0.0),
      std::invalid_argument);
}

}  // TEST_SUITE
