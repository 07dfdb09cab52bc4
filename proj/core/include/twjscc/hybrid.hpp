#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "twjscc/prob.hpp"
#include "twjscc/rd.hpp"

namespace twjscc {

// One-shot hybrid digital/analog scheme: per-terminal auxiliary index U_j
// drawn from a test channel on the local source, deterministic symbol
// encoders, and deterministic decoders that see the exchanged indexes, the
// local source, and the local channel output.
struct HybridScheme {
  CondPMF pu1_s1{1, 1};  // P(U1 | S1), one row per s1
  CondPMF pu2_s2{1, 1};  // P(U2 | S2)
  // x_j = f_j[u_j * |S_j| + s_j]
  std::vector<std::size_t> f1;
  std::vector<std::size_t> f2;
  // Estimate of the far source: g1 runs at terminal 1 and outputs s2_hat,
  // indexed [((u2 * |U1| + u1) * |S1| + s1) * |Y1| + y1]; g2 symmetrically
  // outputs s1_hat, indexed [((u1 * |U2| + u2) * |S2| + s2) * |Y2| + y2].
  std::vector<std::size_t> g1;
  std::vector<std::size_t> g2;

  std::size_t u1_size() const { return pu1_s1.n_out(); }
  std::size_t u2_size() const { return pu2_s2.n_out(); }

  std::size_t g1_at(std::size_t u2, std::size_t u1, std::size_t s1,
                    std::size_t y1, std::size_t n_s1, std::size_t n_y1) const {
    return g1[((u2 * u1_size() + u1) * n_s1 + s1) * n_y1 + y1];
  }
  std::size_t g2_at(std::size_t u1, std::size_t u2, std::size_t s2,
                    std::size_t y2, std::size_t n_s2, std::size_t n_y2) const {
    return g2[((u1 * u2_size() + u2) * n_s2 + s2) * n_y2 + y2];
  }
};

// The four single-letter quantities of the achievability conditions, the
// expected distortions, and the feasibility decision.  A direction with no
// digital content (lhs ~ 0) is vacuously feasible; otherwise the strict test
// lhs < rhs - 1e-9 applies.  margin is min(rhs - lhs) over directions with
// active digital content, +infinity when neither is active.
struct AchievabilityReport {
  double lhs1 = 0, rhs1 = 0;  // I(S1;U1|S2,U2) vs I(U1;Y2|S2,U2)
  double lhs2 = 0, rhs2 = 0;  // I(S2;U2|S1,U1) vs I(U2;Y1|S1,U1)
  double d1 = 0, d2 = 0;      // E[d1(S1, S1_hat)], E[d2(S2, S2_hat)]
  bool feasible1 = false, feasible2 = false;
  double margin = std::numeric_limits<double>::infinity();

  bool feasible() const { return feasible1 && feasible2; }
};

inline constexpr double kFeasibilityEps = 1e-9;
inline constexpr double kVacuousLhs = 1e-12;

AchievabilityReport evaluate_scheme(const JointSourcePMF& src,
                                    const TwoWayChannel& ch,
                                    const HybridScheme& sch,
                                    const DistortionMatrix& d1,
                                    const DistortionMatrix& d2);

enum class DecoderRule { kMap, kMmse };

// Uncoded transmission: singleton indexes, identity encoders, posterior
// symbol decoders (argmax for MAP, index-rounded conditional mean for MMSE).
// Requires |X_j| = |S_j|.
HybridScheme make_uncoded(const JointSourcePMF& src, const TwoWayChannel& ch,
                          DecoderRule rule, const DistortionMatrix& d1,
                          const DistortionMatrix& d2);

// Classical single-letter conditions of a constructed scheme, stated on the
// solver outputs it embeds: lhs_j is the achieved source-coding rate, rhs_j
// the channel rate of the j -> j' direction under the chosen inputs.
struct ReducedConditions {
  double lhs1 = 0, rhs1 = 0;
  double lhs2 = 0, rhs2 = 0;
  bool feasible1 = false, feasible2 = false;
  double d1 = 0, d2 = 0;  // distortions achieved by the embedded solvers

  bool feasible() const { return feasible1 && feasible2; }
};

struct SchemeWithConditions {
  HybridScheme scheme;
  ReducedConditions conditions;
};

enum class SsccVariant { kIndependent, kWynerZiv };

// Separate source/channel coding: U_j = (V_j, W_j) with V_j ~ px_j drawn
// independently of the source, W_j the rate-distortion (or side-information)
// test-channel output at target_d, X_j = V_j.  Conditions compare the
// achieved coding rate against I(X_j; Y_j' | X_j') under px1 x px2.
SchemeWithConditions make_sscc(const JointSourcePMF& src,
                               const TwoWayChannel& ch,
                               std::pair<double, double> target_d,
                               SsccVariant variant, const ProbVec& px1,
                               const ProbVec& px2, const DistortionMatrix& d1,
                               const DistortionMatrix& d2, int wz_restarts = 8,
                               std::uint64_t seed = 1);

// Lossless-oriented scheme keeping the source correlation on the channel
// inputs: W_j = S_j, X_j = V_j ~ pv_j(.|s_j).  Hamming distortion only.
// Conditions: H(S_j|S_j') vs I(X_j; Y_j' | X_j', S_j').
SchemeWithConditions make_correlation_preserving(const JointSourcePMF& src,
                                                 const TwoWayChannel& ch,
                                                 const CondPMF& pv1_s1,
                                                 const CondPMF& pv2_s2,
                                                 const DistortionMatrix& d1,
                                                 const DistortionMatrix& d2);

// Cell-wise optimal decoder tables for given test channels and encoders:
// each (u', u, s, y) cell picks the reconstruction minimizing the expected
// distortion under the exact posterior; zero-probability cells decode to 0.
struct DecoderPair {
  std::vector<std::size_t> g1;
  std::vector<std::size_t> g2;
};
DecoderPair derive_optimal_decoders(const JointSourcePMF& src,
                                    const TwoWayChannel& ch,
                                    const CondPMF& pu1_s1,
                                    const CondPMF& pu2_s2,
                                    const std::vector<std::size_t>& f1,
                                    const std::vector<std::size_t>& f2,
                                    const DistortionMatrix& d1,
                                    const DistortionMatrix& d2);

struct SearchOutcome {
  bool feasible = false;  // best scheme meets conditions and target_d
  AchievabilityReport report;
  HybridScheme scheme;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
  std::uint64_t serial = 0;  // candidate id of the winner, for reproducibility
};

// Deterministic-given-seed search for a scheme meeting target_d: stage 1
// enumerates singleton-index deterministic encoders with optimal decoders
// (when the map space is at most 4096), stage 2 sweeps the special-case
// constructors over parameter grids, stage 3 runs random-restart coordinate
// ascent on the test channels.  Returns the best candidate, ranked feasible
// first, then by margin, then by serial number.
SearchOutcome search_hybrid(const JointSourcePMF& src, const TwoWayChannel& ch,
                            const DistortionMatrix& d1,
                            const DistortionMatrix& d2,
                            std::pair<double, double> target_d,
                            std::size_t budget, std::uint64_t seed,
                            std::size_t threads = 1);

}  // namespace twjscc
