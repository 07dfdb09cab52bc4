#include "twjscc/rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twjscc {

namespace {

constexpr double kSlopeLo = -50.0;
constexpr int kBisectSteps = 60;

void check_shapes(std::size_t n_src, const DistortionMatrix& d) {
  if (d.n_src() != n_src) {
    throw std::invalid_argument("rd: distortion rows != source alphabet");
  }
}

// Zero-rate endpoint: best constant reconstruction.
RDPoint zero_rate_point(const ProbVec& source, const DistortionMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d.n_rec(); ++j) {
    double e = 0;
    for (std::size_t s = 0; s < source.size(); ++s) {
      e += source[s] * d.at(s, j);
    }
    best = std::min(best, e);
  }
  return {best, 0.0, 0.0};
}

double min_distortion(const ProbVec& source, const DistortionMatrix& d) {
  double total = 0;
  for (std::size_t s = 0; s < source.size(); ++s) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d.n_rec(); ++j) m = std::min(m, d.at(s, j));
    total += source[s] * m;
  }
  return total;
}

// Shared supporting-line bisection: `point_at(slope)` must return an envelope
// point of a convex nonincreasing curve.  Returns the curve value at
// target_d and the slope whose supporting line attained it.
template <typename F>
RDPoint bisect_to_distortion(double target_d, F&& point_at) {
  double best = 0.0;  // slope-0 line contributes rate 0
  double best_slope = 0.0;
  auto consider = [&](const RDPoint& pt) {
    double v = pt.rate + pt.slope * (target_d - pt.distortion);
    if (v > best) {
      best = v;
      best_slope = pt.slope;
    }
  };
  double lo = kSlopeLo, hi = 0.0;
  for (int i = 0; i < kBisectSteps; ++i) {
    double mid = 0.5 * (lo + hi);
    RDPoint pt = point_at(mid);
    consider(pt);
    if (pt.distortion > target_d) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  consider(point_at(kSlopeLo));
  return {target_d, std::max(best, 0.0), best_slope};
}

}  // namespace

namespace {

struct BASolution {
  RDPoint point;
  std::vector<double> channel;  // rows P(s_hat | s), n_src x n_rec
};

BASolution ba_solve(const ProbVec& source, const DistortionMatrix& d,
                    double slope, double tol, int max_iter);

}  // namespace

RDPoint ba_rd(const ProbVec& source, const DistortionMatrix& d, double slope,
              double tol, int max_iter) {
  check_shapes(source.size(), d);
  if (slope > 0.0) throw std::invalid_argument("ba_rd: slope must be <= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("ba_rd: tol must be > 0");
  if (slope == 0.0) return zero_rate_point(source, d);
  return ba_solve(source, d, slope, tol, max_iter).point;
}

namespace {

BASolution ba_solve(const ProbVec& source, const DistortionMatrix& d,
                    double slope, double tol, int max_iter) {

  const std::size_t n = source.size();
  const std::size_t m = d.n_rec();
  std::vector<double> a(n * m);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      a[s * m + j] = std::exp2(slope * d.at(s, j));
    }
  }

  std::vector<double> q(m, 1.0 / static_cast<double>(m));
  std::vector<double> denom(n), c(m);
  auto refresh_denom = [&] {
    for (std::size_t s = 0; s < n; ++s) {
      double acc = 0;
      for (std::size_t j = 0; j < m; ++j) acc += q[j] * a[s * m + j];
      denom[s] = acc;
    }
  };
  auto finish = [&]() -> BASolution {
    refresh_denom();
    double dist = 0.0, rate = 0.0;
    std::vector<double> qm(m, 0.0);
    std::vector<double> w(n * m, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        double v = denom[s] > 0 ? q[j] * a[s * m + j] / denom[s] : 0.0;
        w[s * m + j] = v;
        qm[j] += source[s] * v;
      }
    }
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        double v = w[s * m + j];
        if (v <= 0.0) continue;
        dist += source[s] * v * d.at(s, j);
        rate += source[s] * v * std::log2(v / qm[j]);
      }
    }
    return {{dist, std::max(rate, 0.0), slope}, std::move(w)};
  };

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    refresh_denom();
    for (std::size_t s = 0; s < n; ++s) {
      if (source[s] > 0.0 && denom[s] <= 0.0) {
        throw ConvergenceError("ba_rd: denominator underflow",
                               finish().point);
      }
    }
    double residual = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (source[s] > 0.0) acc += source[s] * a[s * m + j] / denom[s];
      }
      c[j] = acc;
      if (acc > 0.0) residual = std::max(residual, std::log2(acc));
    }
    double total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      q[j] *= c[j];
      total += q[j];
    }
    for (std::size_t j = 0; j < m; ++j) q[j] /= total;
    if (residual <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("ba_rd: no convergence after " +
                               std::to_string(max_iter) + " iterations",
                           finish().point);
  }
  return finish();
}

}  // namespace

RDSolution rd_solve_at_distortion(const ProbVec& source,
                                  const DistortionMatrix& d, double target_d) {
  check_shapes(source.size(), d);
  const std::size_t n = source.size();
  const std::size_t m = d.n_rec();
  if (target_d < min_distortion(source, d) - 1e-12) {
    throw std::domain_error("rd_solve_at_distortion: target below minimum");
  }
  RDPoint zero = zero_rate_point(source, d);
  if (target_d >= zero.distortion) {
    std::size_t best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double e = 0;
      for (std::size_t s = 0; s < n; ++s) e += source[s] * d.at(s, j);
      if (e < best) {
        best = e;
        best_j = j;
      }
    }
    return {zero, CondPMF::constant_output(n, m, best_j)};
  }
  // Keep the bracket end whose distortion stays <= target; its channel is a
  // feasible achiever whose rate tightens onto R(target) as the bracket
  // shrinks.
  double lo = -50.0, hi = 0.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    RDPoint pt = ba_rd(source, d, mid);
    if (pt.distortion > target_d) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  BASolution sol = ba_solve(source, d, lo, 1e-9, 10000);
  CondPMF channel(n, m);
  for (std::size_t s = 0; s < n; ++s) {
    channel.set_row(
        s, std::span<const double>(sol.channel.data() + s * m, m));
  }
  return {sol.point, std::move(channel)};
}

double rd_max_distortion(const ProbVec& source, const DistortionMatrix& d) {
  check_shapes(source.size(), d);
  return zero_rate_point(source, d).distortion;
}

double rd_at_distortion(const ProbVec& source, const DistortionMatrix& d,
                        double target_d) {
  check_shapes(source.size(), d);
  if (target_d < min_distortion(source, d) - 1e-12) {
    throw std::domain_error("rd_at_distortion: target below minimum");
  }
  if (target_d >= rd_max_distortion(source, d)) return 0.0;
  return bisect_to_distortion(target_d, [&](double slope) {
           return ba_rd(source, d, slope);
         })
      .rate;
}

namespace {

struct ConditionalParts {
  std::vector<double> weights;      // P(s') over positive-mass symbols
  std::vector<ProbVec> conditionals;  // P(S | s')
};

ConditionalParts split_conditionals(const JointSourcePMF& joint,
                                    SourceSelect which) {
  JointSourcePMF j =
      which == SourceSelect::kFirst ? joint : joint.transposed();
  ConditionalParts parts;
  ProbVec side = j.marginal2();
  for (std::size_t sp = 0; sp < j.n2(); ++sp) {
    if (side[sp] <= 0.0) continue;
    parts.weights.push_back(side[sp]);
    parts.conditionals.push_back(ProbVec(j.col_conditional(sp)));
  }
  return parts;
}

}  // namespace

double conditional_rd_max_distortion(const JointSourcePMF& joint,
                                     const DistortionMatrix& d,
                                     SourceSelect which) {
  ConditionalParts parts = split_conditionals(joint, which);
  check_shapes(parts.conditionals.front().size(), d);
  double total = 0;
  for (std::size_t k = 0; k < parts.weights.size(); ++k) {
    total +=
        parts.weights[k] * zero_rate_point(parts.conditionals[k], d).distortion;
  }
  return total;
}

double conditional_rd(const JointSourcePMF& joint, const DistortionMatrix& d,
                      double target_d, SourceSelect which) {
  ConditionalParts parts = split_conditionals(joint, which);
  check_shapes(parts.conditionals.front().size(), d);

  double d_min = 0, d_max = 0;
  for (std::size_t k = 0; k < parts.weights.size(); ++k) {
    d_min += parts.weights[k] * min_distortion(parts.conditionals[k], d);
    d_max +=
        parts.weights[k] * zero_rate_point(parts.conditionals[k], d).distortion;
  }
  if (target_d < d_min - 1e-12) {
    throw std::domain_error("conditional_rd: target below minimum");
  }
  if (target_d >= d_max) return 0.0;

  auto point_at = [&](double slope) -> RDPoint {
    double dist = 0, rate = 0;
    for (std::size_t k = 0; k < parts.weights.size(); ++k) {
      RDPoint pt = ba_rd(parts.conditionals[k], d, slope);
      dist += parts.weights[k] * pt.distortion;
      rate += parts.weights[k] * pt.rate;
    }
    return {dist, rate, slope};
  };
  return bisect_to_distortion(target_d, point_at).rate;
}

namespace {

template <typename F>
RDCurve sample_curve(std::span<const double> grid, double d_max, F&& rate_at) {
  if (grid.empty()) throw std::invalid_argument("rd_curve: empty grid");
  RDCurve curve;
  curve.points.reserve(grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double target : grid) {
    if (target < prev) throw std::invalid_argument("rd_curve: unsorted grid");
    if (target < 0.0 || target > d_max + 1e-12) {
      throw std::invalid_argument("rd_curve: grid point outside [0, D_max]");
    }
    prev = target;
    curve.points.push_back(rate_at(target));
  }
  return curve;
}

}  // namespace

RDCurve rd_curve(const ProbVec& source, const DistortionMatrix& d,
                 std::span<const double> grid) {
  check_shapes(source.size(), d);
  const double d_max = rd_max_distortion(source, d);
  return sample_curve(grid, d_max, [&](double target) -> RDPoint {
    if (target >= d_max) return {target, 0.0, 0.0};
    return bisect_to_distortion(
        target, [&](double slope) { return ba_rd(source, d, slope); });
  });
}

RDCurve conditional_rd_curve(const JointSourcePMF& joint,
                             const DistortionMatrix& d,
                             std::span<const double> grid,
                             SourceSelect which) {
  ConditionalParts parts = split_conditionals(joint, which);
  check_shapes(parts.conditionals.front().size(), d);
  double d_max = conditional_rd_max_distortion(joint, d, which);
  auto point_at = [&](double slope) -> RDPoint {
    double dist = 0, rate = 0;
    for (std::size_t k = 0; k < parts.weights.size(); ++k) {
      RDPoint pt = ba_rd(parts.conditionals[k], d, slope);
      dist += parts.weights[k] * pt.distortion;
      rate += parts.weights[k] * pt.rate;
    }
    return {dist, rate, slope};
  };
  return sample_curve(grid, d_max, [&](double target) -> RDPoint {
    if (target >= d_max) return {target, 0.0, 0.0};
    return bisect_to_distortion(target, point_at);
  });
}

double rd_inverse(const RDCurve& curve, double rate) {
  const auto& pts = curve.points;
  if (pts.empty()) throw std::invalid_argument("rd_inverse: empty curve");
  if (rate >= pts.front().rate) return pts.front().distortion;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1].rate <= rate) {
      double span = pts[i].rate - pts[i + 1].rate;
      double t = span > 0 ? (pts[i].rate - rate) / span : 1.0;
      return pts[i].distortion +
             t * (pts[i + 1].distortion - pts[i].distortion);
    }
  }
  return pts.back().distortion;
}

}  // namespace twjscc
