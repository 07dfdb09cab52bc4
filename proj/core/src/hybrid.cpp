#include "twjscc/hybrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "twjscc/factor.hpp"
#include "twjscc/info.hpp"
#include "twjscc/parallel.hpp"
#include "twjscc/rng.hpp"
#include "twjscc/simulate.hpp"
#include "twjscc/twc_region.hpp"
#include "twjscc/wyner_ziv.hpp"

namespace twjscc {

namespace {

void validate_scheme(const JointSourcePMF& src, const TwoWayChannel& ch,
                     const HybridScheme& sch, const DistortionMatrix& d1,
                     const DistortionMatrix& d2) {
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t nu1 = sch.u1_size(), nu2 = sch.u2_size();
  if (sch.pu1_s1.n_given() != n1 || sch.pu2_s2.n_given() != n2)
    throw std::invalid_argument("hybrid: test channel rows do not match source");
  if (d1.n_src() != n1 || d2.n_src() != n2)
    throw std::invalid_argument("hybrid: distortion rows do not match source");
  if (sch.f1.size() != nu1 * n1 || sch.f2.size() != nu2 * n2)
    throw std::invalid_argument("hybrid: encoder table size mismatch");
  for (std::size_t v : sch.f1)
    if (v >= ch.nx1()) throw std::invalid_argument("hybrid: f1 out of range");
  for (std::size_t v : sch.f2)
    if (v >= ch.nx2()) throw std::invalid_argument("hybrid: f2 out of range");
  if (sch.g1.size() != nu2 * nu1 * n1 * ch.ny1() ||
      sch.g2.size() != nu1 * nu2 * n2 * ch.ny2())
    throw std::invalid_argument("hybrid: decoder table size mismatch");
  for (std::size_t v : sch.g1)
    if (v >= d2.n_rec()) throw std::invalid_argument("hybrid: g1 out of range");
  for (std::size_t v : sch.g2)
    if (v >= d1.n_rec()) throw std::invalid_argument("hybrid: g2 out of range");
}

// Conditional rows as a flat [given][out] table.  Undefined rows are legal
// only for zero-mass conditioning symbols; a uniform stub keeps the joint a
// pmf without affecting any marginal.
std::vector<double> cond_table(const CondPMF& c, const ProbVec& marg,
                               const char* what) {
  const std::size_t ng = c.n_given(), no = c.n_out();
  std::vector<double> t(ng * no);
  for (std::size_t g = 0; g < ng; ++g) {
    if (c.row_defined(g)) {
      auto row = c.row(g);
      std::copy(row.begin(), row.end(), t.begin() + g * no);
    } else if (marg[g] > 0) {
      throw std::logic_error(std::string(what) +
                             ": undefined row has positive probability");
    } else {
      std::fill_n(t.begin() + g * no, no, 1.0 / static_cast<double>(no));
    }
  }
  return t;
}

// Exact law of (S1, S2, U1, U2, Y1, Y2), axes in that order.  The channel
// enters as a conditional on the composite output pair, split afterwards.
Pmf joint6_of(const JointSourcePMF& src, const TwoWayChannel& ch,
              const CondPMF& pu1, const CondPMF& pu2,
              const std::vector<std::size_t>& f1,
              const std::vector<std::size_t>& f2) {
  const std::size_t ny1 = ch.ny1(), ny2 = ch.ny2();
  FactorSystem fs;
  const auto s1 = fs.add_variable("S1", src.n1());
  const auto s2 = fs.add_variable("S2", src.n2());
  const auto u1 = fs.add_variable("U1", pu1.n_out());
  const auto u2 = fs.add_variable("U2", pu2.n_out());
  const auto x1 = fs.add_variable("X1", ch.nx1());
  const auto x2 = fs.add_variable("X2", ch.nx2());
  const auto yy = fs.add_variable("YY", ny1 * ny2);
  const auto y1 = fs.add_variable("Y1", ny1);
  const auto y2 = fs.add_variable("Y2", ny2);

  fs.add_prior({s1, s2}, src.mass());
  fs.add_conditional(u1, {s1}, cond_table(pu1, src.marginal1(), "P(U1|S1)"));
  fs.add_conditional(u2, {s2}, cond_table(pu2, src.marginal2(), "P(U2|S2)"));
  fs.add_deterministic(x1, {u1, s1}, f1);
  fs.add_deterministic(x2, {u2, s2}, f2);
  fs.add_conditional(yy, {x1, x2}, ch.trans());
  std::vector<std::size_t> split1(ny1 * ny2), split2(ny1 * ny2);
  for (std::size_t k = 0; k < ny1 * ny2; ++k) {
    split1[k] = k / ny2;
    split2[k] = k % ny2;
  }
  fs.add_deterministic(y1, {yy}, std::move(split1));
  fs.add_deterministic(y2, {yy}, std::move(split2));
  return fs.joint({s1, s2, u1, u2, y1, y2});
}

CondPMF singleton_u(std::size_t n_given) {
  return CondPMF::constant_output(n_given, 1, 0);
}

}  // namespace

AchievabilityReport evaluate_scheme(const JointSourcePMF& src,
                                    const TwoWayChannel& ch,
                                    const HybridScheme& sch,
                                    const DistortionMatrix& d1,
                                    const DistortionMatrix& d2) {
  validate_scheme(src, ch, sch, d1, d2);
  const Pmf p6 = joint6_of(src, ch, sch.pu1_s1, sch.pu2_s2, sch.f1, sch.f2);

  AchievabilityReport rep;
  rep.lhs1 = conditional_mutual_information(p6, {0}, {2}, {1, 3});
  rep.rhs1 = conditional_mutual_information(p6, {2}, {5}, {1, 3});
  rep.lhs2 = conditional_mutual_information(p6, {1}, {3}, {0, 2});
  rep.rhs2 = conditional_mutual_information(p6, {3}, {4}, {0, 2});

  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t ny1 = ch.ny1(), ny2 = ch.ny2();
  std::array<std::size_t, 6> ix{};
  for (std::size_t flat = 0; flat < p6.size(); ++flat) {
    const double p = p6[flat];
    if (p == 0) continue;
    p6.unflatten(flat, ix);
    const auto [s1, s2, u1, u2, y1, y2] = ix;
    rep.d1 += p * d1.at(s1, sch.g2_at(u1, u2, s2, y2, n2, ny2));
    rep.d2 += p * d2.at(s2, sch.g1_at(u2, u1, s1, y1, n1, ny1));
  }

  rep.feasible1 =
      rep.lhs1 < rep.rhs1 - kFeasibilityEps || rep.lhs1 <= kVacuousLhs;
  rep.feasible2 =
      rep.lhs2 < rep.rhs2 - kFeasibilityEps || rep.lhs2 <= kVacuousLhs;
  rep.margin = std::numeric_limits<double>::infinity();
  if (rep.lhs1 > kVacuousLhs) rep.margin = rep.rhs1 - rep.lhs1;
  if (rep.lhs2 > kVacuousLhs)
    rep.margin = std::min(rep.margin, rep.rhs2 - rep.lhs2);
  return rep;
}

DecoderPair derive_optimal_decoders(const JointSourcePMF& src,
                                    const TwoWayChannel& ch,
                                    const CondPMF& pu1_s1,
                                    const CondPMF& pu2_s2,
                                    const std::vector<std::size_t>& f1,
                                    const std::vector<std::size_t>& f2,
                                    const DistortionMatrix& d1,
                                    const DistortionMatrix& d2) {
  const Pmf p6 = joint6_of(src, ch, pu1_s1, pu2_s2, f1, f2);
  const Pmf ma = p6.marginal({0, 1, 2, 3, 4});  // (S1,S2,U1,U2,Y1)
  const Pmf mb = p6.marginal({0, 1, 2, 3, 5});  // (S1,S2,U1,U2,Y2)
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t nu1 = pu1_s1.n_out(), nu2 = pu2_s2.n_out();
  const std::size_t ny1 = ch.ny1(), ny2 = ch.ny2();

  DecoderPair dec;
  dec.g1.assign(nu2 * nu1 * n1 * ny1, 0);
  dec.g2.assign(nu1 * nu2 * n2 * ny2, 0);

  std::vector<double> w(std::max(n1, n2));
  for (std::size_t u2 = 0; u2 < nu2; ++u2) {
    for (std::size_t u1 = 0; u1 < nu1; ++u1) {
      for (std::size_t s1 = 0; s1 < n1; ++s1) {
        for (std::size_t y1 = 0; y1 < ny1; ++y1) {
          double total = 0;
          for (std::size_t s2 = 0; s2 < n2; ++s2) {
            const std::size_t ix[5] = {s1, s2, u1, u2, y1};
            w[s2] = ma.at(ix);
            total += w[s2];
          }
          if (total == 0) continue;
          std::size_t best = 0;
          double best_cost = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < d2.n_rec(); ++c) {
            double cost = 0;
            for (std::size_t s2 = 0; s2 < n2; ++s2)
              cost += w[s2] * d2.at(s2, c);
            if (cost < best_cost) {
              best_cost = cost;
              best = c;
            }
          }
          dec.g1[((u2 * nu1 + u1) * n1 + s1) * ny1 + y1] = best;
        }
      }
    }
  }
  for (std::size_t u1 = 0; u1 < nu1; ++u1) {
    for (std::size_t u2 = 0; u2 < nu2; ++u2) {
      for (std::size_t s2 = 0; s2 < n2; ++s2) {
        for (std::size_t y2 = 0; y2 < ny2; ++y2) {
          double total = 0;
          for (std::size_t s1 = 0; s1 < n1; ++s1) {
            const std::size_t ix[5] = {s1, s2, u1, u2, y2};
            w[s1] = mb.at(ix);
            total += w[s1];
          }
          if (total == 0) continue;
          std::size_t best = 0;
          double best_cost = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < d1.n_rec(); ++c) {
            double cost = 0;
            for (std::size_t s1 = 0; s1 < n1; ++s1)
              cost += w[s1] * d1.at(s1, c);
            if (cost < best_cost) {
              best_cost = cost;
              best = c;
            }
          }
          dec.g2[((u1 * nu2 + u2) * n2 + s2) * ny2 + y2] = best;
        }
      }
    }
  }
  return dec;
}

HybridScheme make_uncoded(const JointSourcePMF& src, const TwoWayChannel& ch,
                          DecoderRule rule, const DistortionMatrix& d1,
                          const DistortionMatrix& d2) {
  const std::size_t n1 = src.n1(), n2 = src.n2();
  if (ch.nx1() != n1 || ch.nx2() != n2)
    throw std::invalid_argument(
        "make_uncoded: channel input alphabets must match the sources");
  if (d2.n_rec() < n2 || d1.n_rec() < n1)
    throw std::invalid_argument(
        "make_uncoded: reconstruction alphabets smaller than the sources");

  HybridScheme sch;
  sch.pu1_s1 = singleton_u(n1);
  sch.pu2_s2 = singleton_u(n2);
  sch.f1.resize(n1);
  sch.f2.resize(n2);
  for (std::size_t s = 0; s < n1; ++s) sch.f1[s] = s;
  for (std::size_t s = 0; s < n2; ++s) sch.f2[s] = s;
  const SymbolDecoders dec =
      derive_map_decoder(src, ch, sch.f1, sch.f2, rule);
  sch.g1 = dec.g1;  // singleton U's: layouts coincide
  sch.g2 = dec.g2;
  return sch;
}

SchemeWithConditions make_sscc(const JointSourcePMF& src,
                               const TwoWayChannel& ch,
                               std::pair<double, double> target_d,
                               SsccVariant variant, const ProbVec& px1,
                               const ProbVec& px2, const DistortionMatrix& d1,
                               const DistortionMatrix& d2, int wz_restarts,
                               std::uint64_t seed) {
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t nx1 = ch.nx1(), nx2 = ch.nx2();
  if (px1.size() != nx1 || px2.size() != nx2)
    throw std::invalid_argument("make_sscc: input distribution size mismatch");

  // Source-coding stage, one direction at a time: test channel on W_j, the
  // rate it spends, the distortion it secures, and its decoder.
  struct Stage {
    CondPMF cw{1, 1};
    std::vector<std::size_t> dec;  // WZ only: [side * |W| + w] -> recon
    double rate = 0, dist = 0;
  };
  auto solve = [&](SourceSelect which) {
    Stage st;
    const bool first = which == SourceSelect::kFirst;
    const auto& dm = first ? d1 : d2;
    const double target = first ? target_d.first : target_d.second;
    if (variant == SsccVariant::kIndependent) {
      const ProbVec marg = first ? src.marginal1() : src.marginal2();
      RDSolution sol = rd_solve_at_distortion(marg, dm, target);
      st.cw = sol.test_channel;
      st.rate = sol.point.rate;
      st.dist = sol.point.distortion;
    } else {
      WZResult wz = wz_rd(src, dm, target, wz_restarts,
                          first ? seed : seed + 1, which);
      st.cw = wz.scheme.test_channel;
      st.dec = wz.scheme.decoder;
      st.rate = wz.rate;
      st.dist = wz.distortion;
    }
    return st;
  };
  const Stage st1 = solve(SourceSelect::kFirst);
  const Stage st2 = solve(SourceSelect::kSecond);
  const std::size_t nw1 = st1.cw.n_out(), nw2 = st2.cw.n_out();

  // U_j = (V_j, W_j) packed as u = v * |W| + w; the encoder transmits V_j.
  auto pack = [](const ProbVec& px, const Stage& st, std::size_t n) {
    const std::size_t nw = st.cw.n_out();
    CondPMF pu(n, px.size() * nw);
    std::vector<double> row(px.size() * nw);
    for (std::size_t s = 0; s < n; ++s) {
      if (!st.cw.row_defined(s)) {
        pu.mark_undefined(s);
        continue;
      }
      for (std::size_t v = 0; v < px.size(); ++v)
        for (std::size_t w = 0; w < nw; ++w)
          row[v * nw + w] = px[v] * st.cw.at(s, w);
      pu.set_row(s, row);
    }
    return pu;
  };

  SchemeWithConditions out;
  out.scheme.pu1_s1 = pack(px1, st1, n1);
  out.scheme.pu2_s2 = pack(px2, st2, n2);
  const std::size_t nu1 = out.scheme.u1_size(), nu2 = out.scheme.u2_size();
  out.scheme.f1.resize(nu1 * n1);
  out.scheme.f2.resize(nu2 * n2);
  for (std::size_t u = 0; u < nu1; ++u)
    for (std::size_t s = 0; s < n1; ++s) out.scheme.f1[u * n1 + s] = u / nw1;
  for (std::size_t u = 0; u < nu2; ++u)
    for (std::size_t s = 0; s < n2; ++s) out.scheme.f2[u * n2 + s] = u / nw2;

  out.scheme.g1.resize(nu2 * nu1 * n1 * ch.ny1());
  for (std::size_t u2 = 0; u2 < nu2; ++u2) {
    for (std::size_t u1 = 0; u1 < nu1; ++u1) {
      for (std::size_t s1 = 0; s1 < n1; ++s1) {
        const std::size_t w2 = u2 % nw2;
        const std::size_t s2h = variant == SsccVariant::kIndependent
                                    ? w2
                                    : st2.dec[s1 * nw2 + w2];
        for (std::size_t y1 = 0; y1 < ch.ny1(); ++y1)
          out.scheme.g1[((u2 * nu1 + u1) * n1 + s1) * ch.ny1() + y1] = s2h;
      }
    }
  }
  out.scheme.g2.resize(nu1 * nu2 * n2 * ch.ny2());
  for (std::size_t u1 = 0; u1 < nu1; ++u1) {
    for (std::size_t u2 = 0; u2 < nu2; ++u2) {
      for (std::size_t s2 = 0; s2 < n2; ++s2) {
        const std::size_t w1 = u1 % nw1;
        const std::size_t s1h = variant == SsccVariant::kIndependent
                                    ? w1
                                    : st1.dec[s2 * nw1 + w1];
        for (std::size_t y2 = 0; y2 < ch.ny2(); ++y2)
          out.scheme.g2[((u1 * nu2 + u2) * n2 + s2) * ch.ny2() + y2] = s1h;
      }
    }
  }

  const RatePair rr = inner_rate_point(ch, px1, px2);
  out.conditions.lhs1 = st1.rate;
  out.conditions.rhs1 = rr.r1;
  out.conditions.lhs2 = st2.rate;
  out.conditions.rhs2 = rr.r2;
  out.conditions.d1 = st1.dist;
  out.conditions.d2 = st2.dist;
  out.conditions.feasible1 =
      st1.rate < rr.r1 - kFeasibilityEps || st1.rate <= kVacuousLhs;
  out.conditions.feasible2 =
      st2.rate < rr.r2 - kFeasibilityEps || st2.rate <= kVacuousLhs;
  return out;
}

SchemeWithConditions make_correlation_preserving(const JointSourcePMF& src,
                                                 const TwoWayChannel& ch,
                                                 const CondPMF& pv1_s1,
                                                 const CondPMF& pv2_s2,
                                                 const DistortionMatrix& d1,
                                                 const DistortionMatrix& d2) {
  const std::size_t n1 = src.n1(), n2 = src.n2();
  if (!d1.is_hamming() || !d2.is_hamming())
    throw std::invalid_argument(
        "make_correlation_preserving: Hamming distortion required");
  if (pv1_s1.n_given() != n1 || pv1_s1.n_out() != ch.nx1() ||
      pv2_s2.n_given() != n2 || pv2_s2.n_out() != ch.nx2())
    throw std::invalid_argument(
        "make_correlation_preserving: input channel shape mismatch");

  // U_j = (V_j, W_j) with W_j = S_j, packed u = v * |S_j| + s_j.
  auto pack = [](const CondPMF& pv, std::size_t n) {
    const std::size_t nv = pv.n_out();
    CondPMF pu(n, nv * n);
    std::vector<double> row(nv * n);
    for (std::size_t s = 0; s < n; ++s) {
      if (!pv.row_defined(s)) {
        pu.mark_undefined(s);
        continue;
      }
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t v = 0; v < nv; ++v) row[v * n + s] = pv.at(s, v);
      pu.set_row(s, row);
    }
    return pu;
  };

  SchemeWithConditions out;
  out.scheme.pu1_s1 = pack(pv1_s1, n1);
  out.scheme.pu2_s2 = pack(pv2_s2, n2);
  const std::size_t nu1 = out.scheme.u1_size(), nu2 = out.scheme.u2_size();
  out.scheme.f1.resize(nu1 * n1);
  out.scheme.f2.resize(nu2 * n2);
  for (std::size_t u = 0; u < nu1; ++u)
    for (std::size_t s = 0; s < n1; ++s) out.scheme.f1[u * n1 + s] = u / n1;
  for (std::size_t u = 0; u < nu2; ++u)
    for (std::size_t s = 0; s < n2; ++s) out.scheme.f2[u * n2 + s] = u / n2;
  out.scheme.g1.resize(nu2 * nu1 * n1 * ch.ny1());
  for (std::size_t u2 = 0; u2 < nu2; ++u2)
    for (std::size_t k = 0; k < nu1 * n1 * ch.ny1(); ++k)
      out.scheme.g1[u2 * nu1 * n1 * ch.ny1() + k] = u2 % n2;
  out.scheme.g2.resize(nu1 * nu2 * n2 * ch.ny2());
  for (std::size_t u1 = 0; u1 < nu1; ++u1)
    for (std::size_t k = 0; k < nu2 * n2 * ch.ny2(); ++k)
      out.scheme.g2[u1 * nu2 * n2 * ch.ny2() + k] = u1 % n1;

  // Conditions: H(S_j | S_j') against I(X_j; Y_j' | X_j', S_j') under the
  // induced joint (X_j drawn from pv_j given S_j).
  FactorSystem fs;
  const auto s1 = fs.add_variable("S1", n1);
  const auto s2 = fs.add_variable("S2", n2);
  const auto x1 = fs.add_variable("X1", ch.nx1());
  const auto x2 = fs.add_variable("X2", ch.nx2());
  const auto yy = fs.add_variable("YY", ch.ny1() * ch.ny2());
  const auto y1 = fs.add_variable("Y1", ch.ny1());
  const auto y2 = fs.add_variable("Y2", ch.ny2());
  fs.add_prior({s1, s2}, src.mass());
  fs.add_conditional(x1, {s1}, cond_table(pv1_s1, src.marginal1(), "P(X1|S1)"));
  fs.add_conditional(x2, {s2}, cond_table(pv2_s2, src.marginal2(), "P(X2|S2)"));
  fs.add_conditional(yy, {x1, x2}, ch.trans());
  std::vector<std::size_t> split1(ch.ny1() * ch.ny2()),
      split2(ch.ny1() * ch.ny2());
  for (std::size_t k = 0; k < split1.size(); ++k) {
    split1[k] = k / ch.ny2();
    split2[k] = k % ch.ny2();
  }
  fs.add_deterministic(y1, {yy}, std::move(split1));
  fs.add_deterministic(y2, {yy}, std::move(split2));
  const Pmf law = fs.joint({s1, s2, x1, x2, y1, y2});

  out.conditions.lhs1 =
      entropy_bits(src.mass()) - entropy_bits(src.marginal2().mass());
  out.conditions.lhs2 =
      entropy_bits(src.mass()) - entropy_bits(src.marginal1().mass());
  out.conditions.rhs1 = conditional_mutual_information(law, {2}, {5}, {3, 1});
  out.conditions.rhs2 = conditional_mutual_information(law, {3}, {4}, {2, 0});
  out.conditions.d1 = 0;
  out.conditions.d2 = 0;
  out.conditions.feasible1 =
      out.conditions.lhs1 < out.conditions.rhs1 - kFeasibilityEps ||
      out.conditions.lhs1 <= kVacuousLhs;
  out.conditions.feasible2 =
      out.conditions.lhs2 < out.conditions.rhs2 - kFeasibilityEps ||
      out.conditions.lhs2 <= kVacuousLhs;
  return out;
}

namespace {

constexpr std::size_t kStage1Cap = 4096;
constexpr std::size_t kCorrPresCap = 256;
constexpr std::size_t kInputGridRes = 5;
constexpr int kSearchWzRestarts = 4;
constexpr std::size_t kAscentIters = 24;
constexpr std::size_t kStage3Restarts = 64;

struct Candidate {
  HybridScheme sch;
  std::uint64_t serial = 0;
  bool needs_decoders = false;
};

struct Best {
  bool valid = false;
  bool hit = false;  // conditions feasible and target distortions met
  double score = -std::numeric_limits<double>::infinity();
  AchievabilityReport rep;
  HybridScheme sch;
  std::uint64_t serial = 0;
};

double candidate_score(const AchievabilityReport& rep,
                       std::pair<double, double> target) {
  const double excess = std::max(0.0, rep.d1 - target.first - 1e-9) +
                        std::max(0.0, rep.d2 - target.second - 1e-9);
  return std::min(rep.margin, 1e3) - 1e6 * excess;
}

bool target_met(const AchievabilityReport& rep,
                std::pair<double, double> target) {
  return rep.d1 <= target.first + 1e-9 && rep.d2 <= target.second + 1e-9;
}

void offer(Best& best, bool hit, double score, const AchievabilityReport& rep,
           const HybridScheme& sch, std::uint64_t serial) {
  const bool better = !best.valid || (hit != best.hit ? hit > best.hit
                                      : score != best.score
                                          ? score > best.score
                                          : serial < best.serial);
  if (!better) return;
  best.valid = true;
  best.hit = hit;
  best.score = score;
  best.rep = rep;
  best.sch = sch;
  best.serial = serial;
}

std::vector<double> dirichlet_row(CounterRng& rng, std::size_t k) {
  std::vector<double> row(k);
  double total = 0;
  for (auto& v : row) {
    v = -std::log(rng.next_unit_open());
    total += v;
  }
  if (total <= 0) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  for (auto& v : row) v /= total;
  return row;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

}  // namespace

SearchOutcome search_hybrid(const JointSourcePMF& src, const TwoWayChannel& ch,
                            const DistortionMatrix& d1,
                            const DistortionMatrix& d2,
                            std::pair<double, double> target_d,
                            std::size_t budget, std::uint64_t seed,
                            std::size_t threads) {
  if (budget == 0)
    throw std::invalid_argument("search_hybrid: budget must be >= 1");
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t nx1 = ch.nx1(), nx2 = ch.nx2();

  Best best;
  std::size_t used = 0;
  bool truncated = false;
  std::uint64_t serial = 0;

  auto consider = [&](std::vector<Candidate>& batch) {
    if (batch.empty()) return;
    if (used >= budget) {
      truncated = true;
      return;
    }
    if (batch.size() > budget - used) {
      batch.resize(budget - used);
      truncated = true;
    }
    std::vector<Best> local(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t i) {
      Candidate& c = batch[i];
      if (c.needs_decoders) {
        DecoderPair dec = derive_optimal_decoders(
            src, ch, c.sch.pu1_s1, c.sch.pu2_s2, c.sch.f1, c.sch.f2, d1, d2);
        c.sch.g1 = std::move(dec.g1);
        c.sch.g2 = std::move(dec.g2);
      }
      const AchievabilityReport rep = evaluate_scheme(src, ch, c.sch, d1, d2);
      offer(local[i], rep.feasible() && target_met(rep, target_d),
            candidate_score(rep, target_d), rep, c.sch, c.serial);
    });
    used += batch.size();
    for (const Best& b : local)
      if (b.valid) offer(best, b.hit, b.score, b.rep, b.sch, b.serial);
  };

  // Stage 1: every deterministic symbol-by-symbol encoder pair, decoders
  // cell-wise optimal (which dominates enumerating decoder tables).
  const std::size_t maps1 = ipow(nx1, n1), maps2 = ipow(nx2, n2);
  if (std::pow(static_cast<double>(nx1), static_cast<double>(n1)) *
          std::pow(static_cast<double>(nx2), static_cast<double>(n2)) <=
      static_cast<double>(kStage1Cap)) {
    std::vector<Candidate> batch;
    batch.reserve(maps1 * maps2);
    for (std::size_t m1 = 0; m1 < maps1; ++m1) {
      for (std::size_t m2 = 0; m2 < maps2; ++m2) {
        Candidate c;
        c.sch.pu1_s1 = singleton_u(n1);
        c.sch.pu2_s2 = singleton_u(n2);
        c.sch.f1.resize(n1);
        c.sch.f2.resize(n2);
        std::size_t r = m1;
        for (std::size_t s = 0; s < n1; ++s, r /= nx1) c.sch.f1[s] = r % nx1;
        r = m2;
        for (std::size_t s = 0; s < n2; ++s, r /= nx2) c.sch.f2[s] = r % nx2;
        c.needs_decoders = true;
        c.serial = serial++;
        batch.push_back(std::move(c));
      }
    }
    consider(batch);
  }

  // Stage 2: the special-case constructors over their free parameters.
  {
    std::vector<Candidate> batch;
    if (nx1 == n1 && nx2 == n2 && d1.n_rec() >= n1 && d2.n_rec() >= n2) {
      for (DecoderRule rule : {DecoderRule::kMap, DecoderRule::kMmse})
        batch.push_back({make_uncoded(src, ch, rule, d1, d2), serial++, false});
    }
    const auto grid1 = simplex_grid(nx1, kInputGridRes);
    const auto grid2 = simplex_grid(nx2, kInputGridRes);
    for (SsccVariant variant :
         {SsccVariant::kIndependent, SsccVariant::kWynerZiv}) {
      for (const auto& p1 : grid1) {
        for (const auto& p2 : grid2) {
          try {
            batch.push_back({make_sscc(src, ch, target_d, variant,
                                       ProbVec(p1), ProbVec(p2), d1, d2,
                                       kSearchWzRestarts, seed)
                                 .scheme,
                             serial++, false});
          } catch (const std::exception&) {
          }
        }
      }
    }
    if (d1.is_hamming() && d2.is_hamming() && maps1 * maps2 <= kCorrPresCap) {
      auto point_rows = [](std::size_t n, std::size_t nx, std::size_t code) {
        CondPMF pv(n, nx);
        std::vector<double> row(nx, 0.0);
        for (std::size_t s = 0; s < n; ++s, code /= nx) {
          std::fill(row.begin(), row.end(), 0.0);
          row[code % nx] = 1.0;
          pv.set_row(s, row);
        }
        return pv;
      };
      for (std::size_t m1 = 0; m1 < maps1; ++m1) {
        for (std::size_t m2 = 0; m2 < maps2; ++m2) {
          try {
            batch.push_back(
                {make_correlation_preserving(src, ch, point_rows(n1, nx1, m1),
                                             point_rows(n2, nx2, m2), d1, d2)
                     .scheme,
                 serial++, false});
          } catch (const std::exception&) {
          }
        }
      }
      try {
        batch.push_back(
            {make_correlation_preserving(
                 src, ch, CondPMF::rows_equal(n1, ProbVec::uniform(nx1)),
                 CondPMF::rows_equal(n2, ProbVec::uniform(nx2)), d1, d2)
                 .scheme,
             serial++, false});
      } catch (const std::exception&) {
      }
    }
    consider(batch);
  }

  // Stage 3: random-restart coordinate ascent on the test channels and
  // encoders, decoders kept optimal, score = margin with a distortion
  // penalty.  Restart r draws from the substream (seed, 1000003 + r), so the
  // schedule is independent of the thread count.
  if (used >= budget) {
    truncated = true;
  } else {
    const std::size_t nu1 = std::min<std::size_t>(n1 * nx1 + 2, 8);
    const std::size_t nu2 = std::min<std::size_t>(n2 * nx2 + 2, 8);
    const std::size_t cost = kAscentIters + 1;
    const std::size_t avail = budget - used;
    std::size_t restarts = std::min(kStage3Restarts, avail / cost);
    if (restarts < kStage3Restarts) truncated = true;
    std::vector<std::size_t> iters_of(restarts, kAscentIters);
    if (restarts == 0) {  // budget too tight for a full restart: shorten one
      restarts = 1;
      iters_of.assign(1, avail - 1);
    }
    const std::uint64_t base_serial = serial;
    std::vector<Best> local(restarts);
    parallel_for(restarts, threads, [&](std::size_t r) {
      CounterRng rng(seed, 1000003 + r);
      const std::size_t iters = iters_of[r];
      std::uint64_t cand_serial = base_serial + r * cost;

      CondPMF pu1(n1, nu1), pu2(n2, nu2);
      for (std::size_t s = 0; s < n1; ++s)
        pu1.set_row(s, dirichlet_row(rng, nu1));
      for (std::size_t s = 0; s < n2; ++s)
        pu2.set_row(s, dirichlet_row(rng, nu2));
      std::vector<std::size_t> f1(nu1 * n1), f2(nu2 * n2);
      for (auto& v : f1) v = rng.next_u64() % nx1;
      for (auto& v : f2) v = rng.next_u64() % nx2;

      auto assemble = [&](std::uint64_t sn) {
        HybridScheme sch;
        sch.pu1_s1 = pu1;
        sch.pu2_s2 = pu2;
        sch.f1 = f1;
        sch.f2 = f2;
        DecoderPair dec = derive_optimal_decoders(src, ch, pu1, pu2, f1, f2,
                                                  d1, d2);
        sch.g1 = std::move(dec.g1);
        sch.g2 = std::move(dec.g2);
        const AchievabilityReport rep =
            evaluate_scheme(src, ch, sch, d1, d2);
        offer(local[r], rep.feasible() && target_met(rep, target_d),
              candidate_score(rep, target_d), rep, sch, sn);
        return candidate_score(rep, target_d);
      };

      double cur = assemble(cand_serial++);
      for (std::size_t k = 0; k < iters; ++k) {
        const CondPMF save1 = pu1, save2 = pu2;
        const std::vector<std::size_t> sf1 = f1, sf2 = f2;
        const std::size_t move = rng.next_u64() % 3;
        if (move == 0) {
          const std::size_t s = rng.next_u64() % n1;
          auto mix = dirichlet_row(rng, nu1);
          auto row = pu1.row(s);
          for (std::size_t i = 0; i < nu1; ++i)
            mix[i] = 0.6 * row[i] + 0.4 * mix[i];
          pu1.set_row(s, mix);
        } else if (move == 1) {
          const std::size_t s = rng.next_u64() % n2;
          auto mix = dirichlet_row(rng, nu2);
          auto row = pu2.row(s);
          for (std::size_t i = 0; i < nu2; ++i)
            mix[i] = 0.6 * row[i] + 0.4 * mix[i];
          pu2.set_row(s, mix);
        } else {
          const std::size_t which = rng.next_u64() % (f1.size() + f2.size());
          if (which < f1.size())
            f1[which] = rng.next_u64() % nx1;
          else
            f2[which - f1.size()] = rng.next_u64() % nx2;
        }
        const double trial = assemble(cand_serial++);
        if (trial <= cur) {
          pu1 = save1;
          pu2 = save2;
          f1 = sf1;
          f2 = sf2;
        } else {
          cur = trial;
        }
      }
    });
    for (const Best& b : local)
      if (b.valid) offer(best, b.hit, b.score, b.rep, b.sch, b.serial);
    for (std::size_t it : iters_of) used += it + 1;
    serial = base_serial + restarts * cost;
  }

  if (!best.valid) {
    // Safety net (all stages skipped or thrown): the all-zero constant scheme.
    HybridScheme sch;
    sch.pu1_s1 = singleton_u(n1);
    sch.pu2_s2 = singleton_u(n2);
    sch.f1.assign(n1, 0);
    sch.f2.assign(n2, 0);
    DecoderPair dec = derive_optimal_decoders(src, ch, sch.pu1_s1, sch.pu2_s2,
                                              sch.f1, sch.f2, d1, d2);
    sch.g1 = std::move(dec.g1);
    sch.g2 = std::move(dec.g2);
    const AchievabilityReport rep = evaluate_scheme(src, ch, sch, d1, d2);
    offer(best, rep.feasible() && target_met(rep, target_d),
          candidate_score(rep, target_d), rep, sch, serial++);
    ++used;
  }

  SearchOutcome out;
  out.feasible = best.hit;
  out.report = best.rep;
  out.scheme = best.sch;
  out.evaluations = used;
  out.budget_exhausted = truncated;
  out.serial = best.serial;
  return out;
}

}  // namespace twjscc
