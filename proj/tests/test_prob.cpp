#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support/models.hpp"
#include "twjscc/prob.hpp"

using namespace twjscc;

TEST_SUITE("prob") {

TEST_CASE("alphabet validates size and label uniqueness") {
  CHECK(Alphabet(3).size() == 3);
  CHECK_THROWS_AS(Alphabet(0), std::invalid_argument);
  Alphabet labeled(2, {"a", "b"});
  CHECK(labeled.label(1) == "b");
  CHECK_THROWS_AS(Alphabet(2, {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet(2, {"a", "a"}), std::invalid_argument);
}

TEST_CASE("prob vec validates, renormalizes, and provides factories") {
  ProbVec p(std::vector<double>{0.5, 0.5});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(ProbVec(std::vector<double>{-0.1, 1.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProbVec(std::vector<double>{0.6, 0.6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProbVec(std::vector<double>{}), std::invalid_argument);

  // Inside tolerance the mass is renormalized to an exact total of 1.
  ProbVec q(std::vector<double>{0.5 + 4e-13, 0.5});
  double total = 0;
  for (std::size_t i = 0; i < q.size(); ++i) total += q[i];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(ProbVec::uniform(4)[2] == doctest::Approx(0.25));
  CHECK(ProbVec::point_mass(3, 1)[1] == 1.0);
  CHECK(ProbVec::point_mass(3, 1)[0] == 0.0);
}

TEST_CASE("joint source pmf marginals and conditionals") {
  JointSourcePMF src = fixtures::example1_source();
  CHECK(src.at(1, 0) == 0.0);
  CHECK(src.marginal1()[1] == doctest::Approx(1.0 / 3));
  CHECK(src.marginal2()[1] == doctest::Approx(2.0 / 3));

  auto row = src.row_conditional(1);  // P(S2 | S1 = 1)
  CHECK(row[1] == doctest::Approx(1.0));
  auto col = src.col_conditional(0);  // P(S1 | S2 = 0)
  CHECK(col[0] == doctest::Approx(1.0));

  JointSourcePMF t = src.transposed();
  CHECK(t.at(0, 1) == doctest::Approx(src.at(1, 0)));
  CHECK(t.at(1, 0) == doctest::Approx(src.at(0, 1)));

  // A zero marginal is rejected unless explicitly allowed.
  CHECK_THROWS_AS(JointSourcePMF(2, 2, {0.5, 0.5, 0.0, 0.0}),
                  std::invalid_argument);
  JointSourcePMF degen(2, 2, {0.5, 0.5, 0.0, 0.0}, true);
  CHECK(degen.marginal1()[1] == 0.0);
  CHECK_THROWS_AS(degen.row_conditional(1), std::logic_error);
}

TEST_CASE("cond pmf guards undefined rows") {
  CondPMF c(2, 3);
  c.set_row(0, std::vector<double>{0.2, 0.3, 0.5});
  c.mark_undefined(1);
  CHECK(c.row_defined(0));
  CHECK(!c.row_defined(1));
  CHECK(c.at(0, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(c.row(1), std::logic_error);

  CHECK(CondPMF::identity(3).at(2, 2) == 1.0);
  CHECK(CondPMF::identity(3).at(2, 0) == 0.0);
  CHECK(CondPMF::constant_output(2, 4, 3).at(1, 3) == 1.0);
  CondPMF r = CondPMF::rows_equal(2, ProbVec(std::vector<double>{0.7, 0.3}));
  CHECK(r.at(0, 0) == doctest::Approx(0.7));
  CHECK(r.at(1, 0) == doctest::Approx(0.7));
}

TEST_CASE("two way channel validates slices and marginalizes") {
  TwoWayChannel ch = fixtures::xor_and_channel();
  CHECK(ch.at(0, 0, 0, 0) == doctest::Approx(0.95));
  CHECK(ch.marginal_y1(0, 0, 1) == doctest::Approx(0.05));
  CHECK(ch.marginal_y2(1, 1, 1) == doctest::Approx(1.0));

  std::vector<double> bad(16, 0.0);
  bad[0] = 0.9;  // slice (0,0) sums to 0.9
  for (std::size_t s = 1; s < 4; ++s) bad[s * 4] = 1.0;
  CHECK_THROWS_AS(TwoWayChannel(2, 2, 2, 2, std::move(bad)),
                  std::invalid_argument);
}

TEST_CASE("distortion matrix enforces a zero per row unless relaxed") {
  DistortionMatrix h = DistortionMatrix::hamming(2);
  CHECK(h.at(0, 0) == 0.0);
  CHECK(h.at(0, 1) == 1.0);
  CHECK(h.is_hamming());
  CHECK(h.max_value() == 1.0);

  CHECK_THROWS_AS(DistortionMatrix(1, 2, {0.5, 1.0}), std::invalid_argument);
  DistortionMatrix relaxed(1, 2, {0.5, 1.0}, false);
  CHECK(relaxed.at(0, 0) == 0.5);
  CHECK(!relaxed.is_hamming());
  CHECK_THROWS_AS(DistortionMatrix(1, 1, {-1.0}), std::invalid_argument);
}

}  // TEST_SUITE
