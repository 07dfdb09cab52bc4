#include "twjscc/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "twjscc/parallel.hpp"
#include "twjscc/rng.hpp"

namespace twjscc {

namespace {

// Decoder for one direction: the terminal holding `local` source coordinates
// observes (s_local, y_local) and estimates the far source.  `post_weight`
// supplies P(s_local, s_far) * P(y_local | x_local, x_far).
std::size_t decode_cell(const std::vector<double>& posterior,
                        DecoderRule rule, bool* reachable) {
  double total = 0;
  for (double p : posterior) total += p;
  if (total <= 0) {
    *reachable = false;
    return 0;
  }
  *reachable = true;
  if (rule == DecoderRule::kMap) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < posterior.size(); ++i)
      if (posterior[i] > posterior[best]) best = i;
    return best;
  }
  double mean = 0;
  for (std::size_t i = 0; i < posterior.size(); ++i)
    mean += static_cast<double>(i) * posterior[i];
  mean /= total;
  auto idx = static_cast<long long>(std::llround(mean));
  if (idx < 0) idx = 0;
  const auto hi = static_cast<long long>(posterior.size()) - 1;
  if (idx > hi) idx = hi;
  return static_cast<std::size_t>(idx);
}

double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_sum(const std::vector<double>& v) {
  return v.empty() ? 0.0 : pairwise_sum(v, 0, v.size());
}

constexpr std::uint64_t kBlockSize = 65536;

}  // namespace

SymbolDecoders derive_map_decoder(const JointSourcePMF& src,
                                  const TwoWayChannel& ch,
                                  const std::vector<std::size_t>& enc1,
                                  const std::vector<std::size_t>& enc2,
                                  DecoderRule rule) {
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t ny1 = ch.ny1(), ny2 = ch.ny2();
  if (enc1.size() != n1 || enc2.size() != n2)
    throw std::invalid_argument("derive_map_decoder: encoder size mismatch");
  for (std::size_t s = 0; s < n1; ++s)
    if (enc1[s] >= ch.nx1())
      throw std::invalid_argument("derive_map_decoder: enc1 out of range");
  for (std::size_t s = 0; s < n2; ++s)
    if (enc2[s] >= ch.nx2())
      throw std::invalid_argument("derive_map_decoder: enc2 out of range");

  SymbolDecoders dec;
  dec.g1.assign(n1 * ny1, 0);
  dec.reachable1.assign(n1 * ny1, false);
  dec.g2.assign(n2 * ny2, 0);
  dec.reachable2.assign(n2 * ny2, false);

  std::vector<double> post;
  for (std::size_t s1 = 0; s1 < n1; ++s1) {
    for (std::size_t y1 = 0; y1 < ny1; ++y1) {
      post.assign(n2, 0.0);
      for (std::size_t s2 = 0; s2 < n2; ++s2)
        post[s2] = src.at(s1, s2) * ch.marginal_y1(enc1[s1], enc2[s2], y1);
      bool reach = false;
      dec.g1[s1 * ny1 + y1] = decode_cell(post, rule, &reach);
      dec.reachable1[s1 * ny1 + y1] = reach;
    }
  }
  for (std::size_t s2 = 0; s2 < n2; ++s2) {
    for (std::size_t y2 = 0; y2 < ny2; ++y2) {
      post.assign(n1, 0.0);
      for (std::size_t s1 = 0; s1 < n1; ++s1)
        post[s1] = src.at(s1, s2) * ch.marginal_y2(enc1[s1], enc2[s2], y2);
      bool reach = false;
      dec.g2[s2 * ny2 + y2] = decode_cell(post, rule, &reach);
      dec.reachable2[s2 * ny2 + y2] = reach;
    }
  }
  return dec;
}

std::pair<double, double> exact_distortion(const JointSourcePMF& src,
                                           const TwoWayChannel& ch,
                                           const HybridScheme& sch,
                                           const DistortionMatrix& d1,
                                           const DistortionMatrix& d2) {
  if (sch.u1_size() != 1 || sch.u2_size() != 1)
    throw std::invalid_argument(
        "exact_distortion: scheme must be symbol-by-symbol (singleton U's)");
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t ny1 = ch.ny1(), ny2 = ch.ny2();
  double acc1 = 0, acc2 = 0;
  for (std::size_t s1 = 0; s1 < n1; ++s1) {
    for (std::size_t s2 = 0; s2 < n2; ++s2) {
      const double p = src.at(s1, s2);
      if (p == 0) continue;
      const std::size_t x1 = sch.f1[s1];
      const std::size_t x2 = sch.f2[s2];
      for (std::size_t y1 = 0; y1 < ny1; ++y1) {
        for (std::size_t y2 = 0; y2 < ny2; ++y2) {
          const double w = ch.at(x1, x2, y1, y2);
          if (w == 0) continue;
          const std::size_t s2h = sch.g1_at(0, 0, s1, y1, n1, ny1);
          const std::size_t s1h = sch.g2_at(0, 0, s2, y2, n2, ny2);
          acc1 += p * w * d1.at(s1, s1h);
          acc2 += p * w * d2.at(s2, s2h);
        }
      }
    }
  }
  return {acc1, acc2};
}

SimResult monte_carlo(const JointSourcePMF& src, const TwoWayChannel& ch,
                      const HybridScheme& sch, const DistortionMatrix& d1,
                      const DistortionMatrix& d2, std::uint64_t samples,
                      std::uint64_t seed, std::size_t threads,
                      std::vector<std::uint64_t>* tally) {
  if (samples == 0)
    throw std::invalid_argument("monte_carlo: samples must be >= 1");
  const std::size_t n1 = src.n1(), n2 = src.n2();
  const std::size_t nx2 = ch.nx2(), ny1 = ch.ny1(), ny2 = ch.ny2();
  const std::size_t nu1 = sch.u1_size(), nu2 = sch.u2_size();

  std::vector<double> joint_flat(n1 * n2);
  for (std::size_t s1 = 0; s1 < n1; ++s1)
    for (std::size_t s2 = 0; s2 < n2; ++s2)
      joint_flat[s1 * n2 + s2] = src.at(s1, s2);

  const ProbVec m1 = src.marginal1();
  const ProbVec m2 = src.marginal2();
  std::vector<std::vector<double>> row1(n1), row2(n2);
  for (std::size_t s = 0; s < n1; ++s) {
    if (m1[s] == 0) continue;
    auto r = sch.pu1_s1.row(s);
    row1[s].assign(r.begin(), r.end());
  }
  for (std::size_t s = 0; s < n2; ++s) {
    if (m2[s] == 0) continue;
    auto r = sch.pu2_s2.row(s);
    row2[s].assign(r.begin(), r.end());
  }

  std::vector<std::vector<double>> slice(ch.nx1() * nx2);
  for (std::size_t x1 = 0; x1 < ch.nx1(); ++x1) {
    for (std::size_t x2 = 0; x2 < nx2; ++x2) {
      auto& sl = slice[x1 * nx2 + x2];
      sl.resize(ny1 * ny2);
      for (std::size_t y1 = 0; y1 < ny1; ++y1)
        for (std::size_t y2 = 0; y2 < ny2; ++y2)
          sl[y1 * ny2 + y2] = ch.at(x1, x2, y1, y2);
    }
  }

  const std::uint64_t nblocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<double> bsum1(nblocks, 0), bsum2(nblocks, 0);
  std::vector<double> bsq1(nblocks, 0), bsq2(nblocks, 0);
  const std::size_t tally_size = n1 * n2 * ny1 * ny2;
  std::vector<std::vector<std::uint64_t>> btally;
  if (tally) btally.assign(nblocks, std::vector<std::uint64_t>(tally_size, 0));

  parallel_for(static_cast<std::size_t>(nblocks), threads, [&](std::size_t b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
    const std::uint64_t hi = std::min(samples, lo + kBlockSize);
    double s1acc = 0, s2acc = 0, q1acc = 0, q2acc = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      CounterRng rng(seed, i);
      const std::size_t sidx = rng.next_category(joint_flat);
      const std::size_t s1 = sidx / n2, s2 = sidx % n2;
      const std::size_t u1 = rng.next_category(row1[s1]);
      const std::size_t u2 = rng.next_category(row2[s2]);
      const std::size_t x1 = sch.f1[u1 * n1 + s1];
      const std::size_t x2 = sch.f2[u2 * n2 + s2];
      const std::size_t yidx = rng.next_category(slice[x1 * nx2 + x2]);
      const std::size_t y1 = yidx / ny2, y2 = yidx % ny2;
      const std::size_t s2h = sch.g1_at(u2, u1, s1, y1, n1, ny1);
      const std::size_t s1h = sch.g2_at(u1, u2, s2, y2, n2, ny2);
      const double v1 = d1.at(s1, s1h);
      const double v2 = d2.at(s2, s2h);
      s1acc += v1;
      s2acc += v2;
      q1acc += v1 * v1;
      q2acc += v2 * v2;
      if (tally) ++btally[b][(sidx * ny1 + y1) * ny2 + y2];
    }
    bsum1[b] = s1acc;
    bsum2[b] = s2acc;
    bsq1[b] = q1acc;
    bsq2[b] = q2acc;
  });

  SimResult res;
  res.samples = samples;
  res.seed = seed;
  const double n = static_cast<double>(samples);
  res.d1_hat = pairwise_sum(bsum1) / n;
  res.d2_hat = pairwise_sum(bsum2) / n;
  if (samples > 1) {
    const double var1 =
        std::max(0.0, (pairwise_sum(bsq1) - n * res.d1_hat * res.d1_hat) /
                          (n - 1));
    const double var2 =
        std::max(0.0, (pairwise_sum(bsq2) - n * res.d2_hat * res.d2_hat) /
                          (n - 1));
    res.stderr1 = std::sqrt(var1 / n);
    res.stderr2 = std::sqrt(var2 / n);
  }
  if (tally) {
    tally->assign(tally_size, 0);
    for (const auto& bt : btally)
      for (std::size_t k = 0; k < tally_size; ++k) (*tally)[k] += bt[k];
  }
  if (nu1 == 1 && nu2 == 1) {
    auto [e1, e2] = exact_distortion(src, ch, sch, d1, d2);
    res.has_exact = true;
    res.exact_d1 = e1;
    res.exact_d2 = e2;
    res.within_five_sigma =
        std::abs(res.d1_hat - e1) <= 5 * res.stderr1 + 1e-12 &&
        std::abs(res.d2_hat - e2) <= 5 * res.stderr2 + 1e-12;
  }
  return res;
}

}  // namespace twjscc
