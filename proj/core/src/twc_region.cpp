#include "twjscc/twc_region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twjscc/info.hpp"
#include "twjscc/rng.hpp"
#include "twjscc/tensor.hpp"

namespace twjscc {

namespace {

constexpr std::size_t kLambdaPoints = 33;
constexpr int kClimbIters = 240;

// Joint law over (x1, x2, y1, y2) from an input law over (x1, x2).
Pmf channel_joint(const TwoWayChannel& ch, std::span<const double> input) {
  Pmf p({ch.nx1(), ch.nx2(), ch.ny1(), ch.ny2()});
  std::size_t flat = 0;
  for (std::size_t x1 = 0; x1 < ch.nx1(); ++x1) {
    for (std::size_t x2 = 0; x2 < ch.nx2(); ++x2) {
      double w = input[x1 * ch.nx2() + x2];
      for (std::size_t y1 = 0; y1 < ch.ny1(); ++y1) {
        for (std::size_t y2 = 0; y2 < ch.ny2(); ++y2) {
          p[flat++] = w * ch.at(x1, x2, y1, y2);
        }
      }
    }
  }
  return p;
}

RatePair rates_of(const Pmf& p) {
  // Axes: 0 = X1, 1 = X2, 2 = Y1, 3 = Y2.
  return {conditional_mutual_information(p, {0}, {3}, {1}),
          conditional_mutual_information(p, {1}, {2}, {0})};
}

// Rate points of every product law from the per-input simplex grids.
std::vector<Point2> product_grid_points(const TwoWayChannel& ch,
                                        std::size_t grid_resolution) {
  auto grid1 = simplex_grid(ch.nx1(), grid_resolution);
  auto grid2 = simplex_grid(ch.nx2(), grid_resolution);
  std::vector<Point2> pts;
  pts.reserve(grid1.size() * grid2.size());
  std::vector<double> input(ch.nx1() * ch.nx2());
  for (const auto& p1 : grid1) {
    for (const auto& p2 : grid2) {
      for (std::size_t x1 = 0; x1 < ch.nx1(); ++x1) {
        for (std::size_t x2 = 0; x2 < ch.nx2(); ++x2) {
          input[x1 * ch.nx2() + x2] = p1[x1] * p2[x2];
        }
      }
      RatePair r = rates_of(channel_joint(ch, input));
      pts.push_back({r.r1, r.r2});
    }
  }
  return pts;
}

}  // namespace

std::vector<std::vector<double>> simplex_grid(std::size_t dim,
                                              std::size_t resolution) {
  if (dim < 1 || resolution < 2) {
    throw std::invalid_argument("simplex_grid: dim >= 1, resolution >= 2");
  }
  const std::size_t steps = resolution - 1;
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> parts(dim, 0);
  auto rec = [&](auto&& self, std::size_t remaining, std::size_t pos) -> void {
    if (pos + 1 == dim) {
      parts[pos] = remaining;
      std::vector<double> v(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] = static_cast<double>(parts[i]) / static_cast<double>(steps);
      }
      out.push_back(std::move(v));
      return;
    }
    for (std::size_t k = 0; k <= remaining; ++k) {
      parts[pos] = k;
      self(self, remaining - k, pos + 1);
    }
  };
  rec(rec, steps, 0);
  return out;
}

RatePair inner_rate_point(const TwoWayChannel& ch, const ProbVec& p1,
                          const ProbVec& p2) {
  if (p1.size() != ch.nx1() || p2.size() != ch.nx2()) {
    throw std::invalid_argument("inner_rate_point: input shape mismatch");
  }
  std::vector<double> input(ch.nx1() * ch.nx2());
  for (std::size_t x1 = 0; x1 < ch.nx1(); ++x1) {
    for (std::size_t x2 = 0; x2 < ch.nx2(); ++x2) {
      input[x1 * ch.nx2() + x2] = p1[x1] * p2[x2];
    }
  }
  return joint_rate_point(ch, input);
}

RatePair joint_rate_point(const TwoWayChannel& ch,
                          std::span<const double> input_joint) {
  if (input_joint.size() != ch.nx1() * ch.nx2()) {
    throw std::invalid_argument("joint_rate_point: input shape mismatch");
  }
  return rates_of(channel_joint(ch, input_joint));
}

RegionBoundary inner_region(const TwoWayChannel& ch,
                            std::size_t grid_resolution) {
  return make_rate_region(product_grid_points(ch, grid_resolution));
}

RegionBoundary outer_region(const TwoWayChannel& ch,
                            std::size_t grid_resolution, int restarts,
                            std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("outer_region: restarts >= 1");
  const std::size_t cells = ch.nx1() * ch.nx2();
  // Product laws are joint laws too; sampling them guarantees the outer hull
  // covers every inner grid point instead of relying on grid alignment.
  std::vector<Point2> pts = product_grid_points(ch, grid_resolution);

  if (cells <= 4) {
    for (const auto& input : simplex_grid(cells, grid_resolution)) {
      RatePair r = rates_of(channel_joint(ch, input));
      pts.push_back({r.r1, r.r2});
    }
  }

  // Weighted-sum hill climbing over the joint input simplex; multiplicative
  // log-space perturbations with a decaying step keep iterates interior.
  for (std::size_t li = 0; li < kLambdaPoints; ++li) {
    double lambda =
        static_cast<double>(li) / static_cast<double>(kLambdaPoints - 1);
    for (int r = 0; r < restarts; ++r) {
      CounterRng rng(seed, li * static_cast<std::size_t>(restarts) +
                               static_cast<std::size_t>(r));
      std::vector<double> q(cells);
      double total = 0;
      for (double& v : q) {
        v = -std::log(rng.next_unit_open());
        total += v;
      }
      for (double& v : q) v /= total;

      auto objective = [&](const std::vector<double>& in) {
        RatePair rp = rates_of(channel_joint(ch, in));
        return lambda * rp.r1 + (1.0 - lambda) * rp.r2;
      };
      double best = objective(q);
      double step = 0.5;
      std::vector<double> trial(cells);
      for (int it = 0; it < kClimbIters; ++it) {
        double t_total = 0;
        for (std::size_t i = 0; i < cells; ++i) {
          trial[i] = q[i] * std::exp(step * (2.0 * rng.next_unit() - 1.0));
          t_total += trial[i];
        }
        for (double& v : trial) v /= t_total;
        double cand = objective(trial);
        if (cand > best) {
          best = cand;
          q = trial;
        } else {
          step *= 0.97;
        }
      }
      RatePair rp = rates_of(channel_joint(ch, q));
      pts.push_back({rp.r1, rp.r2});
    }
  }
  return make_rate_region(std::move(pts));
}

CoincidenceReport regions_coincide(const TwoWayChannel& ch, double tol,
                                   std::size_t grid_resolution, int restarts,
                                   std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("regions_coincide: tol > 0");
  RegionBoundary inner = inner_region(ch, grid_resolution);
  RegionBoundary outer = outer_region(ch, grid_resolution, restarts, seed);
  double gap = hausdorff_gap(inner.hull, outer.hull);
  return {gap <= tol, gap};
}

}  // namespace twjscc
