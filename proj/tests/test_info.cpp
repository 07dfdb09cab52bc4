#include <cmath>
#include <vector>

#include "doctest.h"
#include "support/models.hpp"
#include "twjscc/info.hpp"
#include "twjscc/rng.hpp"
#include "twjscc/tensor.hpp"

using namespace twjscc;

namespace {

Pmf random_pmf(std::vector<std::size_t> dims, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  Pmf p(std::move(dims));
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = 0.01 + rng.next_unit();
    total += p[i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] /= total;
  return p;
}

Pmf joint_as_pmf(const JointSourcePMF& j) {
  return Pmf({j.n1(), j.n2()}, j.mass());
}

}  // namespace

TEST_SUITE("info") {

TEST_CASE("entropy closed forms") {
  CHECK(entropy_bits(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(entropy_bits(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));
  CHECK(entropy_bits(std::vector<double>{0.05, 0.95}) ==
        doctest::Approx(0.28640).epsilon(1e-4));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(1.0 / 3) == doctest::Approx(0.9182958340544896));
}

TEST_CASE("conditional entropy of the worked example source is 2/3") {
  Pmf prod = joint_as_pmf(fixtures::product_uniform());
  CHECK(conditional_entropy(prod, {0}, {1}) == doctest::Approx(1.0));

  Pmf ex1 = joint_as_pmf(fixtures::example1_source());
  CHECK(conditional_entropy(ex1, {0}, {1}) ==
        doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(conditional_entropy(ex1, {1}, {0}) ==
        doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("mutual information closed forms") {
  CHECK(mutual_information(joint_as_pmf(fixtures::product_uniform()), {0},
                           {1}) == doctest::Approx(0.0).epsilon(1e-12));

  Pmf ident({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_information(ident, {0}, {1}) == doctest::Approx(1.0));

  Pmf ex1 = joint_as_pmf(fixtures::example1_source());
  CHECK(mutual_information(ex1, {0}, {1}) ==
        doctest::Approx(binary_entropy(1.0 / 3) - 2.0 / 3).epsilon(1e-9));
}

TEST_CASE("conditional mutual information closed forms") {
  // A and B independent given C by construction: B = C.
  Pmf markov({2, 2, 2});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t c = 0; c < 2; ++c) {
      const std::size_t idx[3] = {a, c, c};
      markov.at(idx) = 0.25;
    }
  CHECK(conditional_mutual_information(markov, {0}, {1}, {2}) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Constant C reduces to plain mutual information.
  Pmf corr({2, 2, 1}, {0.4, 0.1, 0.1, 0.4});
  Pmf corr2 = corr.marginal({0, 1});
  CHECK(conditional_mutual_information(corr, {0}, {1}, {2}) ==
        doctest::Approx(mutual_information(corr2, {0}, {1})).epsilon(1e-12));

  // Uniform (A,B) with C = A xor B: given C, A determines B.
  Pmf x({2, 2, 2});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const std::size_t idx[3] = {a, b, a ^ b};
      x.at(idx) = 0.25;
    }
  CHECK(conditional_mutual_information(x, {0}, {1}, {2}) ==
        doctest::Approx(1.0));
  // Without the conditioning the inputs are independent.
  CHECK(mutual_information(x, {0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("chain rule and bounds on random pmfs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Pmf p = random_pmf({3, 4}, seed);
    const double ha = entropy_of(p, {0});
    const double hb = entropy_of(p, {1});
    const double hab = entropy_of(p, {0, 1});
    const double hba = conditional_entropy(p, {1}, {0});
    CHECK(hab == doctest::Approx(ha + hba).epsilon(1e-10));

    const double mi = mutual_information(p, {0}, {1});
    CHECK(mi >= 0.0);
    CHECK(mi <= std::min(ha, hb) + 1e-10);
  }
}

TEST_CASE("conditional mutual information identity on random pmfs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Pmf p = random_pmf({2, 3, 2}, seed * 31);
    const double cmi = conditional_mutual_information(p, {0}, {1}, {2});
    const double byH = conditional_entropy(p, {0}, {2}) -
                       conditional_entropy(p, {0}, {1, 2});
    CHECK(cmi == doctest::Approx(byH).epsilon(1e-10));
    CHECK(cmi >= 0.0);
  }
}

TEST_CASE("negative results beyond cancellation tolerance throw") {
  CHECK_THROWS_AS(binary_entropy(-0.2), std::invalid_argument);
}

}  // TEST_SUITE
