#include "twjscc/info.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace twjscc {

namespace {

constexpr double kClampTol = 1e-9;

double clamp_nonneg(double x, const char* what) {
  if (x >= 0.0) return x;
  if (x >= -kClampTol) return 0.0;
  throw std::logic_error(std::string(what) + " came out " +
                         std::to_string(x) + " (< -1e-9)");
}

std::span<const std::size_t> as_span(std::initializer_list<std::size_t> l) {
  return std::span<const std::size_t>(l.begin(), l.size());
}

std::vector<std::size_t> concat(std::span<const std::size_t> a,
                                std::span<const std::size_t> b) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double entropy_bits(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return clamp_nonneg(h, "entropy");
}

double entropy_of(const Pmf& p, std::span<const std::size_t> axes) {
  if (axes.empty()) return 0.0;
  Pmf m = p.marginal(axes);
  return entropy_bits(m.mass());
}

double entropy_of(const Pmf& p, std::initializer_list<std::size_t> axes) {
  return entropy_of(p, as_span(axes));
}

double conditional_entropy(const Pmf& p, std::span<const std::size_t> a,
                           std::span<const std::size_t> b) {
  auto ab = concat(a, b);
  return clamp_nonneg(entropy_of(p, ab) - entropy_of(p, b),
                      "conditional entropy");
}

double conditional_entropy(const Pmf& p, std::initializer_list<std::size_t> a,
                           std::initializer_list<std::size_t> b) {
  return conditional_entropy(p, as_span(a), as_span(b));
}

double conditional_mutual_information(const Pmf& p,
                                      std::span<const std::size_t> a,
                                      std::span<const std::size_t> b,
                                      std::span<const std::size_t> c) {
  auto ac = concat(a, c);
  auto bc = concat(b, c);
  auto abc = concat(a, bc);
  double v = entropy_of(p, ac) + entropy_of(p, bc) - entropy_of(p, c) -
             entropy_of(p, abc);
  return clamp_nonneg(v, "conditional mutual information");
}

double conditional_mutual_information(const Pmf& p,
                                      std::initializer_list<std::size_t> a,
                                      std::initializer_list<std::size_t> b,
                                      std::initializer_list<std::size_t> c) {
  return conditional_mutual_information(p, as_span(a), as_span(b), as_span(c));
}

double mutual_information(const Pmf& p, std::span<const std::size_t> a,
                          std::span<const std::size_t> b) {
  return conditional_mutual_information(p, a, b, {});
}

double mutual_information(const Pmf& p, std::initializer_list<std::size_t> a,
                          std::initializer_list<std::size_t> b) {
  return mutual_information(p, as_span(a), as_span(b));
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

}  // namespace twjscc
