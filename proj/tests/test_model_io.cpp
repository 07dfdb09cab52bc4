#include <cstdio>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "support/models.hpp"
#include "twjscc/hybrid.hpp"
#include "twjscc/model_io.hpp"

using namespace twjscc;

namespace {

Model example_model() {
  return Model{fixtures::example1_source(), fixtures::xor_and_channel(),
               DistortionMatrix::hamming(2), DistortionMatrix::hamming(2)};
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("model json round trips exactly") {
  Model m = example_model();
  const std::string text = model_to_json(m);
  Model back = parse_model(text);
  CHECK(back.source.n1() == m.source.n1());
  CHECK(back.source.n2() == m.source.n2());
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      CHECK(back.source.at(a, b) == m.source.at(a, b));
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t y1 = 0; y1 < 2; ++y1)
        for (std::size_t y2 = 0; y2 < 2; ++y2)
          CHECK(back.channel.at(x1, x2, y1, y2) ==
                m.channel.at(x1, x2, y1, y2));
  CHECK(back.distortion1.is_hamming());
  CHECK(back.distortion2.is_hamming());
  // Serialization is canonical: a second pass gives identical bytes.
  CHECK(model_to_json(back) == text);
}

TEST_CASE("scheme json round trips exactly") {
  HybridScheme sch = fixtures::example1_mixed_scheme();
  const std::string text = scheme_to_json(sch);
  HybridScheme back = parse_scheme(text);
  CHECK(back.u1_size() == sch.u1_size());
  CHECK(back.u2_size() == sch.u2_size());
  CHECK(back.f1 == sch.f1);
  CHECK(back.f2 == sch.f2);
  CHECK(back.g1 == sch.g1);
  CHECK(back.g2 == sch.g2);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t u = 0; u < sch.u2_size(); ++u)
      CHECK(back.pu2_s2.at(s, u) == sch.pu2_s2.at(s, u));
  CHECK(scheme_to_json(back) == text);
}

TEST_CASE("undefined conditional rows survive the round trip") {
  HybridScheme sch = fixtures::example1_mixed_scheme();
  sch.pu1_s1.mark_undefined(1);
  HybridScheme back = parse_scheme(scheme_to_json(sch));
  CHECK(back.pu1_s1.row_defined(0));
  CHECK_FALSE(back.pu1_s1.row_defined(1));
}

TEST_CASE("missing and malformed fields carry the field name") {
  CHECK_THROWS_WITH_AS(parse_model("{}"), doctest::Contains("source"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_model("not json"), std::runtime_error);
  // Masses that sum to 0.9 violate the source invariant.
  const std::string broken = R"({
    "source": [[0.4, 0.1], [0.1, 0.3]],
    "channel": [[[[1,0],[0,0]],[[1,0],[0,0]]],[[[1,0],[0,0]],[[1,0],[0,0]]]],
    "distortion1": [[0,1],[1,0]],
    "distortion2": [[0,1],[1,0]]})";
  CHECK_THROWS_AS(parse_model(broken), std::exception);

  const std::string scheme_text = scheme_to_json(
      fixtures::example1_mixed_scheme());
  std::string chopped = scheme_text;
  const auto gpos = chopped.find("\"PU1_S1\"");
  REQUIRE(gpos != std::string::npos);
  chopped.replace(gpos, 8, "\"PU1_SX\"");
  CHECK_THROWS_WITH_AS(parse_scheme(chopped), doctest::Contains("PU1_S1"),
                       std::runtime_error);
}

TEST_CASE("doubles format to shortest round-trip form") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3) == std::string("0.33333333333333331"));
  const double v = 0.05;
  double back = 0.0;
  std::sscanf(format_double(v).c_str(), "%lf", &back);
  CHECK(back == v);
}

TEST_CASE("curves and regions export stable csv") {
  RDCurve c;
  c.points.push_back({0.0, 1.0, -3.5});
  c.points.push_back({0.25, 0.5, -1.0});
  const std::string csv = curve_to_csv(c);
  CHECK(csv.find("D,R,slope\n") == 0);
  CHECK(csv.find("0.25,0.5,-1\n") != std::string::npos);

  RegionBoundary region = make_rate_region({{0.5, 0.25}});
  const std::string rcsv = region_to_csv(region);
  CHECK(rcsv.find("kind,x,y\n") == 0);
  CHECK(rcsv.find("point,0.5,0.25\n") != std::string::npos);
  CHECK(rcsv.find("hull,") != std::string::npos);
}

TEST_CASE("file helpers write and read back") {
  const std::string path = "/tmp/twjscc_io_test.json";
  write_file(path, "payload\n");
  CHECK(read_file(path) == "payload\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("/tmp/twjscc_does_not_exist_479.json"),
                  std::runtime_error);
}

}  // TEST_SUITE
