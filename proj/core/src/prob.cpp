#include "twjscc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace twjscc {

namespace {

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and nonnegative");
    }
  }
}

void normalize_total(std::vector<double>& v, const char* what) {
  double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTol) {
    throw std::invalid_argument(std::string(what) + ": mass sums to " +
                                std::to_string(total) + ", expected 1");
  }
  for (double& x : v) x /= total;
}

}  // namespace

void Alphabet::check() const {
  if (size_ < 1) throw std::invalid_argument("Alphabet: size must be >= 1");
  if (!labels_.empty()) {
    if (labels_.size() != size_) {
      throw std::invalid_argument("Alphabet: label count != size");
    }
    std::set<std::string> uniq(labels_.begin(), labels_.end());
    if (uniq.size() != labels_.size()) {
      throw std::invalid_argument("Alphabet: labels must be unique");
    }
  }
}

ProbVec::ProbVec(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw std::invalid_argument("ProbVec: empty mass");
  check_nonnegative(mass_, "ProbVec");
  normalize_total(mass_, "ProbVec");
}

ProbVec ProbVec::uniform(std::size_t n) {
  return ProbVec(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVec ProbVec::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> m(n, 0.0);
  m.at(at) = 1.0;
  return ProbVec(std::move(m));
}

JointSourcePMF::JointSourcePMF(std::size_t n1, std::size_t n2,
                               std::vector<double> mass,
                               bool allow_degenerate_marginals)
    : n1_(n1), n2_(n2), mass_(std::move(mass)) {
  if (n1_ < 1 || n2_ < 1 || mass_.size() != n1_ * n2_) {
    throw std::invalid_argument("JointSourcePMF: shape mismatch");
  }
  check_nonnegative(mass_, "JointSourcePMF");
  normalize_total(mass_, "JointSourcePMF");
  if (!allow_degenerate_marginals) {
    for (std::size_t s1 = 0; s1 < n1_; ++s1) {
      double m = 0;
      for (std::size_t s2 = 0; s2 < n2_; ++s2) m += at(s1, s2);
      if (m <= 0.0) {
        throw std::invalid_argument(
            "JointSourcePMF: marginal of S1 has a zero entry (pass "
            "allow_degenerate_marginals to accept)");
      }
    }
    for (std::size_t s2 = 0; s2 < n2_; ++s2) {
      double m = 0;
      for (std::size_t s1 = 0; s1 < n1_; ++s1) m += at(s1, s2);
      if (m <= 0.0) {
        throw std::invalid_argument(
            "JointSourcePMF: marginal of S2 has a zero entry (pass "
            "allow_degenerate_marginals to accept)");
      }
    }
  }
}

ProbVec JointSourcePMF::marginal1() const {
  std::vector<double> m(n1_, 0.0);
  for (std::size_t s1 = 0; s1 < n1_; ++s1)
    for (std::size_t s2 = 0; s2 < n2_; ++s2) m[s1] += at(s1, s2);
  return ProbVec(std::move(m));
}

ProbVec JointSourcePMF::marginal2() const {
  std::vector<double> m(n2_, 0.0);
  for (std::size_t s1 = 0; s1 < n1_; ++s1)
    for (std::size_t s2 = 0; s2 < n2_; ++s2) m[s2] += at(s1, s2);
  return ProbVec(std::move(m));
}

std::vector<double> JointSourcePMF::row_conditional(std::size_t s1) const {
  double m = 0;
  for (std::size_t s2 = 0; s2 < n2_; ++s2) m += at(s1, s2);
  if (m <= 0.0) {
    throw std::logic_error("JointSourcePMF: conditional on zero-mass row");
  }
  std::vector<double> out(n2_);
  for (std::size_t s2 = 0; s2 < n2_; ++s2) out[s2] = at(s1, s2) / m;
  return out;
}

std::vector<double> JointSourcePMF::col_conditional(std::size_t s2) const {
  double m = 0;
  for (std::size_t s1 = 0; s1 < n1_; ++s1) m += at(s1, s2);
  if (m <= 0.0) {
    throw std::logic_error("JointSourcePMF: conditional on zero-mass column");
  }
  std::vector<double> out(n1_);
  for (std::size_t s1 = 0; s1 < n1_; ++s1) out[s1] = at(s1, s2) / m;
  return out;
}

JointSourcePMF JointSourcePMF::transposed() const {
  std::vector<double> t(n1_ * n2_);
  for (std::size_t s1 = 0; s1 < n1_; ++s1)
    for (std::size_t s2 = 0; s2 < n2_; ++s2) t[s2 * n1_ + s1] = at(s1, s2);
  return JointSourcePMF(n2_, n1_, std::move(t), true);
}

CondPMF::CondPMF(std::size_t n_given, std::size_t n_out)
    : n_given_(n_given),
      n_out_(n_out),
      data_(n_given * n_out, 0.0),
      defined_(n_given, 0) {
  if (n_given_ < 1 || n_out_ < 1) {
    throw std::invalid_argument("CondPMF: empty alphabet");
  }
}

CondPMF::CondPMF(std::size_t n_given, std::size_t n_out,
                 std::vector<double> rows)
    : CondPMF(n_given, n_out) {
  if (rows.size() != n_given * n_out) {
    throw std::invalid_argument("CondPMF: shape mismatch");
  }
  for (std::size_t g = 0; g < n_given_; ++g) {
    set_row(g, std::span<const double>(rows.data() + g * n_out_, n_out_));
  }
}

void CondPMF::set_row(std::size_t g, std::span<const double> row) {
  if (row.size() != n_out_) throw std::invalid_argument("CondPMF: row size");
  std::vector<double> r(row.begin(), row.end());
  check_nonnegative(r, "CondPMF row");
  normalize_total(r, "CondPMF row");
  std::copy(r.begin(), r.end(), data_.begin() + g * n_out_);
  defined_[g] = 1;
}

void CondPMF::mark_undefined(std::size_t g) {
  std::fill(data_.begin() + g * n_out_, data_.begin() + (g + 1) * n_out_, 0.0);
  defined_.at(g) = 0;
}

std::span<const double> CondPMF::row(std::size_t g) const {
  if (g >= n_given_) throw std::out_of_range("CondPMF: row index");
  if (!defined_[g]) {
    throw std::logic_error(
        "CondPMF: read of an undefined (zero-mass conditioning) row");
  }
  return std::span<const double>(data_.data() + g * n_out_, n_out_);
}

CondPMF CondPMF::identity(std::size_t n) {
  CondPMF c(n, n);
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    row.assign(n, 0.0);
    row[i] = 1.0;
    c.set_row(i, row);
  }
  return c;
}

CondPMF CondPMF::constant_output(std::size_t n_given, std::size_t n_out,
                                 std::size_t out) {
  CondPMF c(n_given, n_out);
  std::vector<double> row(n_out, 0.0);
  row.at(out) = 1.0;
  for (std::size_t g = 0; g < n_given; ++g) c.set_row(g, row);
  return c;
}

CondPMF CondPMF::rows_equal(std::size_t n_given, const ProbVec& p) {
  CondPMF c(n_given, p.size());
  for (std::size_t g = 0; g < n_given; ++g) c.set_row(g, p.mass());
  return c;
}

TwoWayChannel::TwoWayChannel(std::size_t nx1, std::size_t nx2, std::size_t ny1,
                             std::size_t ny2, std::vector<double> trans)
    : nx1_(nx1), nx2_(nx2), ny1_(ny1), ny2_(ny2), trans_(std::move(trans)) {
  if (nx1_ < 1 || nx2_ < 1 || ny1_ < 1 || ny2_ < 1 ||
      trans_.size() != nx1_ * nx2_ * ny1_ * ny2_) {
    throw std::invalid_argument("TwoWayChannel: shape mismatch");
  }
  check_nonnegative(trans_, "TwoWayChannel");
  const std::size_t slice = ny1_ * ny2_;
  for (std::size_t x1 = 0; x1 < nx1_; ++x1) {
    for (std::size_t x2 = 0; x2 < nx2_; ++x2) {
      double* base = trans_.data() + (x1 * nx2_ + x2) * slice;
      double total = std::accumulate(base, base + slice, 0.0);
      if (std::abs(total - 1.0) > kMassTol) {
        throw std::invalid_argument(
            "TwoWayChannel: slice (" + std::to_string(x1) + "," +
            std::to_string(x2) + ") sums to " + std::to_string(total));
      }
      for (std::size_t k = 0; k < slice; ++k) base[k] /= total;
    }
  }
}

double TwoWayChannel::marginal_y2(std::size_t x1, std::size_t x2,
                                  std::size_t y2) const {
  double m = 0;
  for (std::size_t y1 = 0; y1 < ny1_; ++y1) m += at(x1, x2, y1, y2);
  return m;
}

double TwoWayChannel::marginal_y1(std::size_t x1, std::size_t x2,
                                  std::size_t y1) const {
  double m = 0;
  for (std::size_t y2 = 0; y2 < ny2_; ++y2) m += at(x1, x2, y1, y2);
  return m;
}

DistortionMatrix::DistortionMatrix(std::size_t n_src, std::size_t n_rec,
                                   std::vector<double> d,
                                   bool require_zero_per_row)
    : n_src_(n_src), n_rec_(n_rec), d_(std::move(d)) {
  if (n_src_ < 1 || n_rec_ < 1 || d_.size() != n_src_ * n_rec_) {
    throw std::invalid_argument("DistortionMatrix: shape mismatch");
  }
  check_nonnegative(d_, "DistortionMatrix");
  if (require_zero_per_row) {
    for (std::size_t s = 0; s < n_src_; ++s) {
      bool has_zero = false;
      for (std::size_t r = 0; r < n_rec_; ++r) {
        if (at(s, r) == 0.0) has_zero = true;
      }
      if (!has_zero) {
        throw std::invalid_argument(
            "DistortionMatrix: row " + std::to_string(s) +
            " has no zero entry (pass require_zero_per_row=false to accept)");
      }
    }
  }
}

double DistortionMatrix::max_value() const {
  return *std::max_element(d_.begin(), d_.end());
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  std::vector<double> d(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  return DistortionMatrix(n, n, std::move(d));
}

bool DistortionMatrix::is_hamming() const {
  if (n_src_ != n_rec_) return false;
  for (std::size_t s = 0; s < n_src_; ++s) {
    for (std::size_t r = 0; r < n_rec_; ++r) {
      if (at(s, r) != (s == r ? 0.0 : 1.0)) return false;
    }
  }
  return true;
}

}  // namespace twjscc
