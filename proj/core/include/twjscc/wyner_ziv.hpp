#pragma once

#include <cstdint>
#include <vector>

#include "twjscc/prob.hpp"
#include "twjscc/rd.hpp"

namespace twjscc {

// Decoder-side side information scheme: a test channel P(W|S) whose output is
// decoded together with S'.  The Markov structure W - S - S' holds by
// construction because the test channel depends on S only.
struct WZScheme {
  CondPMF test_channel;              // rows over W, one per source symbol
  std::vector<std::size_t> decoder;  // [s' * |W| + w] -> reconstruction index

  std::size_t aux_size() const { return test_channel.n_out(); }
};

struct WZResult {
  double rate = 0.0;        // achieved I(S;W|S')
  double distortion = 0.0;  // achieved E[d]
  WZScheme scheme;
  // The alternating optimization is nonconvex; the returned rate is an upper
  // estimate of the true minimum, never to be treated as exact.
  bool upper_estimate = true;
};

// I(S;W|S'), the distortion-optimal decoder (ties to the lowest
// reconstruction index), and the resulting E[d] for a fixed test channel.
struct WZChannelValue {
  double rate = 0.0;
  double distortion = 0.0;
  std::vector<std::size_t> decoder;
};

WZChannelValue wz_evaluate_channel(const JointSourcePMF& joint,
                                   const DistortionMatrix& d,
                                   const CondPMF& test_channel,
                                   SourceSelect which = SourceSelect::kFirst);

// Upper estimate of the side-information RD function at target_d: alternating
// optimization of P(W|S) with |W| = |S|+1 and Lagrangian bisection for the
// distortion constraint.  Restart 0 starts near the identity embedding; later
// restarts use Dirichlet(1,..,1) rows drawn deterministically from
// (seed, restart index).  Throws std::domain_error when no feasible channel
// is found.
WZResult wz_rd(const JointSourcePMF& joint, const DistortionMatrix& d,
               double target_d, int restarts, std::uint64_t seed,
               SourceSelect which = SourceSelect::kFirst,
               std::size_t threads = 1);

// Exhaustive sweep over test channels whose rows live on the quantized
// simplex with step 1/grid_resolution (decoders optimal per channel),
// evaluated at target_d through the lower convex envelope of the achieved
// (D, R) pairs; time sharing between two grid channels achieves any chord,
// so the value stays an achievable rate.  The channel count is guarded at
// 10^7; beyond that the caller must coarsen.
double wz_bruteforce_oracle(const JointSourcePMF& joint,
                            const DistortionMatrix& d, double target_d,
                            std::size_t grid_resolution,
                            SourceSelect which = SourceSelect::kFirst);

}  // namespace twjscc
