#pragma once

#include <cstdint>
#include <vector>

#include "twjscc/hybrid.hpp"
#include "twjscc/prob.hpp"

namespace twjscc {

// Symbol-by-symbol decoder tables for uncoded transmission: terminal 1 maps
// (s1, y1) to an estimate of S2, terminal 2 maps (s2, y2) to an estimate of
// S1.  Cells with zero probability under the model decode to 0 and are
// flagged unreachable.
struct SymbolDecoders {
  std::vector<std::size_t> g1;  // [s1 * |Y1| + y1] -> s2_hat
  std::vector<std::size_t> g2;  // [s2 * |Y2| + y2] -> s1_hat
  std::vector<bool> reachable1;
  std::vector<bool> reachable2;
};

// Exact posterior decoders for symbol encoders x_j = enc_j[s_j].  MAP picks
// the posterior argmax (lowest index on ties); MMSE rounds the posterior
// mean of the symbol index to the nearest index.
SymbolDecoders derive_map_decoder(const JointSourcePMF& src,
                                  const TwoWayChannel& ch,
                                  const std::vector<std::size_t>& enc1,
                                  const std::vector<std::size_t>& enc2,
                                  DecoderRule rule);

// Exact expected distortions of a symbol-by-symbol scheme (singleton U's) by
// enumeration over (s1, s2, y1, y2).  Throws std::invalid_argument when an
// auxiliary alphabet is larger than 1.
std::pair<double, double> exact_distortion(const JointSourcePMF& src,
                                           const TwoWayChannel& ch,
                                           const HybridScheme& sch,
                                           const DistortionMatrix& d1,
                                           const DistortionMatrix& d2);

struct SimResult {
  double d1_hat = 0, d2_hat = 0;
  double stderr1 = 0, stderr2 = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool has_exact = false;
  double exact_d1 = 0, exact_d2 = 0;
  // |d_hat - exact| <= 5 * stderr (plus 1e-12 slack) in both directions;
  // meaningful only when has_exact.
  bool within_five_sigma = false;
};

// Monte Carlo estimate of the scheme distortions.  Sample i uses the
// substream CounterRng(seed, i), so the draw sequence is independent of the
// thread count; per-block partial sums are combined by fixed-order pairwise
// summation, making the result byte-identical for any `threads`.  When the
// scheme is symbol-by-symbol the exact values are filled in and checked.
// `tally`, when non-null, receives counts indexed ((s1*|S2|+s2)*|Y1|+y1)*|Y2|+y2.
SimResult monte_carlo(const JointSourcePMF& src, const TwoWayChannel& ch,
                      const HybridScheme& sch, const DistortionMatrix& d1,
                      const DistortionMatrix& d2, std::uint64_t samples,
                      std::uint64_t seed, std::size_t threads = 1,
                      std::vector<std::uint64_t>* tally = nullptr);

}  // namespace twjscc
