#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "twjscc/hybrid.hpp"
#include "twjscc/model_io.hpp"
#include "twjscc/prob.hpp"
#include "twjscc/rng.hpp"

namespace twjscc::fixtures {

// Binary worked example: source mass 1/3 at (0,0), (0,1), (1,1); terminal 1
// receives X1^X2^Z with P(Z=1)=0.05, terminal 2 receives X1*X2.
inline JointSourcePMF example1_source() {
  const double t = 1.0 / 3.0;
  return JointSourcePMF(2, 2, {t, t, 0.0, t});
}

inline TwoWayChannel xor_and_channel(double eps = 0.05) {
  std::vector<double> trans(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      const std::size_t y2 = x1 & x2;
      for (std::size_t z = 0; z < 2; ++z) {
        const std::size_t y1 = x1 ^ x2 ^ z;
        trans[((x1 * 2 + x2) * 2 + y1) * 2 + y2] += z ? eps : 1 - eps;
      }
    }
  }
  return TwoWayChannel(2, 2, 2, 2, std::move(trans));
}

inline Model example1_model() {
  return Model{example1_source(), xor_and_channel(),
               DistortionMatrix::hamming(2), DistortionMatrix::hamming(2)};
}

// Uncoded direction 1->2; direction 2->1 splits U2 = (V2, W2) with V2 the
// uniform independent channel input and W2 = S2 carried digitally.
inline HybridScheme example1_mixed_scheme() {
  HybridScheme sch;
  sch.pu1_s1 = CondPMF::constant_output(2, 1, 0);
  sch.pu2_s2 = CondPMF(2, 4);
  sch.pu2_s2.set_row(0, std::vector<double>{0.5, 0.0, 0.5, 0.0});
  sch.pu2_s2.set_row(1, std::vector<double>{0.0, 0.5, 0.0, 0.5});
  sch.f1 = {0, 1};
  sch.f2.resize(8);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t s2 = 0; s2 < 2; ++s2) sch.f2[u2 * 2 + s2] = u2 / 2;
  sch.g1.resize(16);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t k = 0; k < 4; ++k) sch.g1[u2 * 4 + k] = u2 % 2;
  sch.g2.resize(16);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t s2 = 0; s2 < 2; ++s2)
      for (std::size_t y2 = 0; y2 < 2; ++y2)
        sch.g2[(u2 * 2 + s2) * 2 + y2] = (u2 / 2 == 1) ? y2 : 0;
  return sch;
}

// Both terminals hear X1^X2^Z exactly (binary additive noise).
inline TwoWayChannel additive_noise_channel(double eps = 0.05) {
  std::vector<double> trans(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      for (std::size_t z = 0; z < 2; ++z) {
        const std::size_t y = x1 ^ x2 ^ z;
        trans[((x1 * 2 + x2) * 2 + y) * 2 + y] += z ? eps : 1 - eps;
      }
    }
  }
  return TwoWayChannel(2, 2, 2, 2, std::move(trans));
}

// Y1 = X2, Y2 = X1, noiseless.
inline TwoWayChannel crossover_channel() {
  std::vector<double> trans(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      trans[((x1 * 2 + x2) * 2 + x2) * 2 + x1] = 1.0;
  return TwoWayChannel(2, 2, 2, 2, std::move(trans));
}

// Outputs carry nothing: both uniform regardless of the inputs.
inline TwoWayChannel useless_channel() {
  return TwoWayChannel(2, 2, 2, 2, std::vector<double>(16, 0.25));
}

// Both outputs constant zero.
inline TwoWayChannel constant_channel() {
  std::vector<double> trans(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      trans[(x1 * 2 + x2) * 4 + 0] = 1.0;
  return TwoWayChannel(2, 2, 2, 2, std::move(trans));
}

// Doubly symmetric binary source: uniform S1, S2 = S1 ^ Bern(p).
inline JointSourcePMF dsbs(double p) {
  return JointSourcePMF(2, 2, {(1 - p) / 2, p / 2, p / 2, (1 - p) / 2});
}

// Uniform S1; S2 = S1 except that S1 = 1 flips to 0 with probability 0.3.
inline JointSourcePMF zchannel_source() {
  return JointSourcePMF(2, 2, {0.5, 0.0, 0.15, 0.35});
}

inline JointSourcePMF product_uniform() {
  return JointSourcePMF(2, 2, std::vector<double>(4, 0.25));
}

// Random joint source with strictly positive cells (for property tests).
inline JointSourcePMF random_joint(std::uint64_t seed, std::size_t n1 = 2,
                                   std::size_t n2 = 2) {
  CounterRng rng(seed, 0);
  std::vector<double> m(n1 * n2);
  double total = 0;
  for (double& v : m) {
    v = 0.02 + rng.next_unit();
    total += v;
  }
  for (double& v : m) v /= total;
  return JointSourcePMF(n1, n2, std::move(m));
}

// Random binary two-way channel with strictly positive transition cells.
inline TwoWayChannel random_channel(std::uint64_t seed) {
  CounterRng rng(seed, 1);
  std::vector<double> trans(16);
  for (std::size_t slice = 0; slice < 4; ++slice) {
    double total = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      trans[slice * 4 + k] = 0.02 + rng.next_unit();
      total += trans[slice * 4 + k];
    }
    for (std::size_t k = 0; k < 4; ++k) trans[slice * 4 + k] /= total;
  }
  return TwoWayChannel(2, 2, 2, 2, std::move(trans));
}

// Post-composes both outputs with a symbol erasure of probability q; the
// erasure symbol is appended to each output alphabet.
inline TwoWayChannel erase_outputs(const TwoWayChannel& ch, double q) {
  const std::size_t ny1 = ch.ny1() + 1, ny2 = ch.ny2() + 1;
  std::vector<double> trans(ch.nx1() * ch.nx2() * ny1 * ny2, 0.0);
  auto cell = [&](std::size_t x1, std::size_t x2, std::size_t y1,
                  std::size_t y2) -> double& {
    return trans[((x1 * ch.nx2() + x2) * ny1 + y1) * ny2 + y2];
  };
  for (std::size_t x1 = 0; x1 < ch.nx1(); ++x1) {
    for (std::size_t x2 = 0; x2 < ch.nx2(); ++x2) {
      for (std::size_t y1 = 0; y1 < ch.ny1(); ++y1) {
        for (std::size_t y2 = 0; y2 < ch.ny2(); ++y2) {
          const double p = ch.at(x1, x2, y1, y2);
          cell(x1, x2, y1, y2) += p * (1 - q) * (1 - q);
          cell(x1, x2, y1, ch.ny2()) += p * (1 - q) * q;
          cell(x1, x2, ch.ny1(), y2) += p * q * (1 - q);
          cell(x1, x2, ch.ny1(), ch.ny2()) += p * q * q;
        }
      }
    }
  }
  return TwoWayChannel(ch.nx1(), ch.nx2(), ny1, ny2, std::move(trans));
}

}  // namespace twjscc::fixtures
