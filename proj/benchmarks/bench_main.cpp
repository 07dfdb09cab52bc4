#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "twjscc/factor.hpp"
#include "twjscc/hybrid.hpp"
#include "twjscc/prob.hpp"
#include "twjscc/rd.hpp"
#include "twjscc/twc_region.hpp"

namespace {

using namespace twjscc;

JointSourcePMF skewed_source() {
  return JointSourcePMF(2, 2, {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3});
}

TwoWayChannel xor_and_channel(double eps = 0.05) {
  std::vector<double> t(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      const std::size_t y2 = x1 & x2;
      const std::size_t clean = x1 ^ x2;
      t[((x1 * 2 + x2) * 2 + clean) * 2 + y2] += 1.0 - eps;
      t[((x1 * 2 + x2) * 2 + (clean ^ 1)) * 2 + y2] += eps;
    }
  return TwoWayChannel(2, 2, 2, 2, t);
}

void BM_BlahutArimotoSlope(benchmark::State& state) {
  ProbVec src({0.2, 0.3, 0.1, 0.4});
  DistortionMatrix d = DistortionMatrix::hamming(4);
  const double slope = -0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ba_rd(src, d, slope));
  }
}
BENCHMARK(BM_BlahutArimotoSlope)->Arg(5)->Arg(20)->Arg(80);

void BM_ChannelLawThroughFactorGraph(benchmark::State& state) {
  JointSourcePMF src = skewed_source();
  TwoWayChannel ch = xor_and_channel();
  HybridScheme sch = make_uncoded(src, ch, DecoderRule::kMap,
                                  DistortionMatrix::hamming(2),
                                  DistortionMatrix::hamming(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_scheme(src, ch, sch,
                                             DistortionMatrix::hamming(2),
                                             DistortionMatrix::hamming(2)));
  }
}
BENCHMARK(BM_ChannelLawThroughFactorGraph);

void BM_CapacityInnerRegion(benchmark::State& state) {
  TwoWayChannel ch = xor_and_channel();
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_region(ch, res));
  }
}
BENCHMARK(BM_CapacityInnerRegion)->Arg(9)->Arg(17)->Arg(33);

}  // namespace

BENCHMARK_MAIN();
