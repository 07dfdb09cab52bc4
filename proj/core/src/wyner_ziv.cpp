#include "twjscc/wyner_ziv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "twjscc/info.hpp"
#include "twjscc/parallel.hpp"
#include "twjscc/rng.hpp"

namespace twjscc {

namespace {

constexpr double kFeasSlack = 1e-9;
constexpr double kBetaHi = 80.0;
constexpr int kBetaSteps = 60;
constexpr int kInnerSteps = 400;
constexpr double kInnerTol = 1e-10;
constexpr double kLogFloor = 1e-300;

struct Oriented {
  std::size_t n;    // compressed source alphabet
  std::size_t npr;  // side information alphabet
  std::vector<double> ps;       // P(s)
  std::vector<double> psp;      // P(s')
  std::vector<double> joint;    // P(s, s'), row-major
  std::vector<double> side_given_src;  // P(s'|s), zero row when P(s)=0
};

Oriented orient(const JointSourcePMF& joint, SourceSelect which) {
  JointSourcePMF j =
      which == SourceSelect::kFirst ? joint : joint.transposed();
  Oriented o;
  o.n = j.n1();
  o.npr = j.n2();
  o.joint.resize(o.n * o.npr);
  o.ps.assign(o.n, 0.0);
  o.psp.assign(o.npr, 0.0);
  for (std::size_t s = 0; s < o.n; ++s) {
    for (std::size_t sp = 0; sp < o.npr; ++sp) {
      double v = j.at(s, sp);
      o.joint[s * o.npr + sp] = v;
      o.ps[s] += v;
      o.psp[sp] += v;
    }
  }
  o.side_given_src.assign(o.n * o.npr, 0.0);
  for (std::size_t s = 0; s < o.n; ++s) {
    if (o.ps[s] <= 0.0) continue;
    for (std::size_t sp = 0; sp < o.npr; ++sp) {
      o.side_given_src[s * o.npr + sp] = o.joint[s * o.npr + sp] / o.ps[s];
    }
  }
  return o;
}

// Rows of `cond` over W indexed by source symbol, flat [s * nw + w].
WZChannelValue evaluate(const Oriented& o, const DistortionMatrix& d,
                        std::span<const double> cond, std::size_t nw) {
  WZChannelValue out;
  const std::size_t nhat = d.n_rec();

  // I(S;W|S') = H(W|S') - H(W|S); both from the joint (s, s', w) law.
  double h_wsp = 0, h_sp = 0, h_ws = 0, h_s = 0;
  std::vector<double> pw_sp(o.npr * nw, 0.0);
  for (std::size_t s = 0; s < o.n; ++s) {
    for (std::size_t sp = 0; sp < o.npr; ++sp) {
      double pj = o.joint[s * o.npr + sp];
      if (pj <= 0.0) continue;
      for (std::size_t w = 0; w < nw; ++w) {
        pw_sp[sp * nw + w] += pj * cond[s * nw + w];
      }
    }
  }
  auto neg_plogp = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  for (double v : pw_sp) h_wsp += neg_plogp(v);
  for (double v : o.psp) h_sp += neg_plogp(v);
  for (std::size_t s = 0; s < o.n; ++s) {
    for (std::size_t w = 0; w < nw; ++w) {
      h_ws += neg_plogp(o.ps[s] * cond[s * nw + w]);
    }
    h_s += neg_plogp(o.ps[s]);
  }
  out.rate = std::max((h_wsp - h_sp) - (h_ws - h_s), 0.0);

  // Decoder: per (s', w) the reconstruction minimizing the cell cost.
  out.decoder.assign(o.npr * nw, 0);
  double dist = 0;
  for (std::size_t sp = 0; sp < o.npr; ++sp) {
    for (std::size_t w = 0; w < nw; ++w) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < nhat; ++j) {
        double cost = 0;
        for (std::size_t s = 0; s < o.n; ++s) {
          cost += o.joint[s * o.npr + sp] * cond[s * nw + w] * d.at(s, j);
        }
        if (cost < best) {
          best = cost;
          best_j = j;
        }
      }
      out.decoder[sp * nw + w] = best_j;
      dist += best;
    }
  }
  out.distortion = dist;
  return out;
}

CondPMF cond_from_flat(std::size_t n, std::size_t nw,
                       std::span<const double> cond) {
  CondPMF c(n, nw);
  for (std::size_t s = 0; s < n; ++s) {
    c.set_row(s, cond.subspan(s * nw, nw));
  }
  return c;
}

struct Candidate {
  double rate;
  double distortion;
  std::vector<double> cond;
  std::vector<std::size_t> decoder;
};

// One restart: Lagrangian bisection on beta, alternating optimization of the
// test channel at each beta, best feasible iterate kept.
std::optional<Candidate> run_restart(const Oriented& o,
                                     const DistortionMatrix& d,
                                     double target_d, std::uint64_t seed,
                                     std::uint64_t restart_idx,
                                     double beta_hi) {
  const std::size_t n = o.n, npr = o.npr, nw = o.n + 1;
  std::vector<double> cond0(n * nw);
  if (restart_idx == 0) {
    // Identity-leaning start: from a generic point the multiplicative update
    // can collapse every row onto one w before the decoder learns to read W
    // (a zeroed w never revives), so one restart begins where W is already
    // informative.
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t w = 0; w < nw; ++w) {
        cond0[s * nw + w] = w == s ? 0.95 : 0.05 / static_cast<double>(nw - 1);
      }
    }
  } else {
    CounterRng rng(seed, restart_idx);
    for (std::size_t s = 0; s < n; ++s) {
      double total = 0;
      for (std::size_t w = 0; w < nw; ++w) {
        double e = -std::log(rng.next_unit_open());
        cond0[s * nw + w] = e;
        total += e;
      }
      for (std::size_t w = 0; w < nw; ++w) cond0[s * nw + w] /= total;
    }
  }

  std::optional<Candidate> best;
  std::vector<double> cond, next(n * nw), ed(n * nw), q(npr * nw),
      lg(n * nw);
  double lo = 0.0, hi = beta_hi;
  for (int bi = 0; bi < kBetaSteps; ++bi) {
    double beta = 0.5 * (lo + hi);
    cond = cond0;
    for (int it = 0; it < kInnerSteps; ++it) {
      WZChannelValue val = evaluate(o, d, cond, nw);
      // Expected distortion seen by (s, w) under the current decoder.
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t w = 0; w < nw; ++w) {
          double acc = 0;
          for (std::size_t sp = 0; sp < npr; ++sp) {
            acc += o.side_given_src[s * npr + sp] *
                   d.at(s, val.decoder[sp * nw + w]);
          }
          ed[s * nw + w] = acc;
        }
      }
      // q(w|s') implied by the current channel.
      std::fill(q.begin(), q.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t sp = 0; sp < npr; ++sp) {
          double pj = o.joint[s * o.npr + sp];
          if (pj <= 0.0) continue;
          for (std::size_t w = 0; w < nw; ++w) {
            q[sp * nw + w] += pj * cond[s * nw + w];
          }
        }
      }
      for (std::size_t sp = 0; sp < npr; ++sp) {
        if (o.psp[sp] <= 0.0) continue;
        for (std::size_t w = 0; w < nw; ++w) q[sp * nw + w] /= o.psp[sp];
      }
      // Exponential-family update of each channel row.
      double delta = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (o.ps[s] <= 0.0) continue;
        double row_max = -std::numeric_limits<double>::infinity();
        for (std::size_t w = 0; w < nw; ++w) {
          double acc = 0;
          for (std::size_t sp = 0; sp < npr; ++sp) {
            double psg = o.side_given_src[s * npr + sp];
            if (psg > 0.0) {
              acc += psg * std::log2(std::max(q[sp * nw + w], kLogFloor));
            }
          }
          lg[s * nw + w] = acc - beta * ed[s * nw + w];
          row_max = std::max(row_max, lg[s * nw + w]);
        }
        double total = 0;
        for (std::size_t w = 0; w < nw; ++w) {
          next[s * nw + w] = std::exp2(lg[s * nw + w] - row_max);
          total += next[s * nw + w];
        }
        for (std::size_t w = 0; w < nw; ++w) {
          next[s * nw + w] /= total;
          delta = std::max(delta,
                           std::abs(next[s * nw + w] - cond[s * nw + w]));
          cond[s * nw + w] = next[s * nw + w];
        }
      }
      if (delta < kInnerTol) break;
    }
    WZChannelValue val = evaluate(o, d, cond, nw);
    if (val.distortion <= target_d + kFeasSlack) {
      if (!best || val.rate < best->rate) {
        best = Candidate{val.rate, val.distortion, cond, val.decoder};
      }
      hi = beta;
    } else {
      lo = beta;
    }
  }
  return best;
}

}  // namespace

WZChannelValue wz_evaluate_channel(const JointSourcePMF& joint,
                                   const DistortionMatrix& d,
                                   const CondPMF& test_channel,
                                   SourceSelect which) {
  Oriented o = orient(joint, which);
  if (test_channel.n_given() != o.n || d.n_src() != o.n) {
    throw std::invalid_argument("wz_evaluate_channel: shape mismatch");
  }
  const std::size_t nw = test_channel.n_out();
  std::vector<double> cond(o.n * nw);
  for (std::size_t s = 0; s < o.n; ++s) {
    auto row = test_channel.row(s);
    std::copy(row.begin(), row.end(), cond.begin() + s * nw);
  }
  return evaluate(o, d, cond, nw);
}

WZResult wz_rd(const JointSourcePMF& joint, const DistortionMatrix& d,
               double target_d, int restarts, std::uint64_t seed,
               SourceSelect which, std::size_t threads) {
  if (restarts < 1) throw std::invalid_argument("wz_rd: restarts >= 1");
  Oriented o = orient(joint, which);
  if (d.n_src() != o.n) throw std::invalid_argument("wz_rd: shape mismatch");
  if (target_d < 0.0) throw std::domain_error("wz_rd: negative distortion");
  const std::size_t nw = o.n + 1;

  // Saturation: a constant W with the side-information-optimal constant
  // decoder reaches the zero-rate level exactly.
  double guess_level = conditional_rd_max_distortion(joint, d, which);
  if (target_d >= guess_level) {
    WZScheme scheme{CondPMF::constant_output(o.n, nw, 0), {}};
    scheme.decoder.assign(o.npr * nw, 0);
    double dist = 0;
    for (std::size_t sp = 0; sp < o.npr; ++sp) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < d.n_rec(); ++j) {
        double cost = 0;
        for (std::size_t s = 0; s < o.n; ++s) {
          cost += o.joint[s * o.npr + sp] * d.at(s, j);
        }
        if (cost < best) {
          best = cost;
          best_j = j;
        }
      }
      for (std::size_t w = 0; w < nw; ++w) scheme.decoder[sp * nw + w] = best_j;
      dist += best;
    }
    return {0.0, dist, std::move(scheme), true};
  }

  // The bisection ceiling scales with the distortion resolution the joint
  // allows: collapse resistance needs beta * (distortion spread) to compete
  // with the log-probability attraction, and the spread is at most the
  // zero-rate level.
  const double beta_hi = std::max(kBetaHi, 40.0 / std::max(guess_level, 1e-6));
  std::vector<std::optional<Candidate>> results(
      static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), threads,
               [&](std::size_t r) {
                 results[r] = run_restart(o, d, target_d, seed, r, beta_hi);
               });

  const Candidate* winner = nullptr;
  for (const auto& r : results) {
    if (r && (!winner || r->rate < winner->rate)) winner = &*r;
  }
  if (!winner) {
    throw std::domain_error("wz_rd: no feasible channel at target distortion");
  }
  WZScheme scheme{cond_from_flat(o.n, nw, winner->cond), winner->decoder};
  return {winner->rate, winner->distortion, std::move(scheme), true};
}

double wz_bruteforce_oracle(const JointSourcePMF& joint,
                            const DistortionMatrix& d, double target_d,
                            std::size_t grid_resolution, SourceSelect which) {
  if (grid_resolution < 1) {
    throw std::invalid_argument("wz_bruteforce_oracle: resolution >= 1");
  }
  Oriented o = orient(joint, which);
  if (d.n_src() != o.n) {
    throw std::invalid_argument("wz_bruteforce_oracle: shape mismatch");
  }
  const std::size_t nw = o.n + 1;

  // All compositions of grid_resolution into nw parts = quantized rows.
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> parts(nw, 0);
  auto emit = [&] {
    std::vector<double> r(nw);
    for (std::size_t w = 0; w < nw; ++w) {
      r[w] = static_cast<double>(parts[w]) /
             static_cast<double>(grid_resolution);
    }
    rows.push_back(std::move(r));
  };
  auto gen = [&](auto&& self, std::size_t remaining, std::size_t pos) -> void {
    if (pos + 1 == nw) {
      parts[pos] = remaining;
      emit();
      return;
    }
    for (std::size_t k = 0; k <= remaining; ++k) {
      parts[pos] = k;
      self(self, remaining - k, pos + 1);
    }
  };
  gen(gen, grid_resolution, 0);

  double total = 1;
  for (std::size_t s = 0; s < o.n; ++s) {
    total *= static_cast<double>(rows.size());
    if (total > 1e7) {
      throw std::invalid_argument(
          "wz_bruteforce_oracle: channel grid exceeds 1e7 points; coarsen "
          "the resolution");
    }
  }

  // Lower convex hull (Andrew chain) of (D, R) points; time sharing between
  // two grid channels achieves any chord, so the envelope is achievable.
  auto lower_hull = [](std::vector<std::pair<double, double>>& pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> h;
    for (const auto& p : pts) {
      while (h.size() >= 2) {
        const auto& a = h[h.size() - 2];
        const auto& b = h[h.size() - 1];
        const double cross = (b.first - a.first) * (p.second - a.second) -
                             (b.second - a.second) * (p.first - a.first);
        if (cross <= 0) {
          h.pop_back();
        } else {
          break;
        }
      }
      if (!h.empty() && h.back().first == p.first) {
        if (p.second < h.back().second) h.back() = p;
        continue;
      }
      h.push_back(p);
    }
    pts = std::move(h);
  };

  std::vector<std::pair<double, double>> points;
  std::vector<std::size_t> idx(o.n, 0);
  std::vector<double> cond(o.n * nw);
  while (true) {
    for (std::size_t s = 0; s < o.n; ++s) {
      const auto& r = rows[idx[s]];
      std::copy(r.begin(), r.end(), cond.begin() + s * nw);
    }
    WZChannelValue val = evaluate(o, d, cond, nw);
    points.emplace_back(val.distortion, std::max(val.rate, 0.0));
    if (points.size() > 200000) lower_hull(points);
    std::size_t k = 0;
    while (k < o.n && ++idx[k] == rows.size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == o.n) break;
  }
  lower_hull(points);
  if (points.empty() || target_d < points.front().first - 1e-12) {
    throw std::domain_error(
        "wz_bruteforce_oracle: no feasible channel on the grid");
  }
  // Envelope minimum over distortions <= target: running min over hull
  // vertices in range plus the interpolated crossing value.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= target_d + 1e-12) {
      best = std::min(best, points[i].second);
    } else {
      if (i > 0) {
        const auto& a = points[i - 1];
        const auto& b = points[i];
        const double t = (target_d - a.first) / (b.first - a.first);
        if (t > 0) best = std::min(best, a.second + t * (b.second - a.second));
      }
      break;
    }
  }
  return std::max(best, 0.0);
}

}  // namespace twjscc
