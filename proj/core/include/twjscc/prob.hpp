#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twjscc {

// Tolerance for user-supplied masses: inputs whose total deviates from 1 by
// more than this are rejected; anything closer is renormalized exactly.
inline constexpr double kMassTol = 1e-12;

/// Finite symbol alphabet, optionally with display labels.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size) : size_(size) { check(); }
  Alphabet(std::size_t size, std::vector<std::string> labels)
      : size_(size), labels_(std::move(labels)) {
    check();
  }

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

 private:
  void check() const;

  std::size_t size_;
  std::vector<std::string> labels_;
};

/// Probability vector over a finite alphabet. Entries are validated
/// (nonnegative, total within kMassTol of 1) and then renormalized.
class ProbVec {
 public:
  explicit ProbVec(std::vector<double> mass);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  const std::vector<double>& mass() const { return mass_; }

  static ProbVec uniform(std::size_t n);
  static ProbVec point_mass(std::size_t n, std::size_t at);

 private:
  std::vector<double> mass_;
};

/// Joint pmf of the two correlated sources, stored row-major as
/// mass[s1 * n2 + s2].
class JointSourcePMF {
 public:
  JointSourcePMF(std::size_t n1, std::size_t n2, std::vector<double> mass,
                 bool allow_degenerate_marginals = false);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  double at(std::size_t s1, std::size_t s2) const {
    return mass_[s1 * n2_ + s2];
  }
  const std::vector<double>& mass() const { return mass_; }

  ProbVec marginal1() const;
  ProbVec marginal2() const;
  /// P(S2 | S1 = s1); throws if the row has zero mass.
  std::vector<double> row_conditional(std::size_t s1) const;
  /// P(S1 | S2 = s2); throws if the column has zero mass.
  std::vector<double> col_conditional(std::size_t s2) const;
  /// Joint with the two source roles swapped.
  JointSourcePMF transposed() const;

 private:
  std::size_t n1_, n2_;
  std::vector<double> mass_;
};

/// Conditional pmf: one ProbVec row per conditioning symbol. Rows whose
/// conditioning symbol carries zero mass can be marked undefined; reading
/// an undefined row throws instead of propagating NaNs.
class CondPMF {
 public:
  CondPMF(std::size_t n_given, std::size_t n_out);
  CondPMF(std::size_t n_given, std::size_t n_out, std::vector<double> rows);

  std::size_t n_given() const { return n_given_; }
  std::size_t n_out() const { return n_out_; }

  void set_row(std::size_t g, std::span<const double> row);
  void mark_undefined(std::size_t g);
  bool row_defined(std::size_t g) const { return defined_[g]; }

  /// Row view; throws std::logic_error on an undefined row.
  std::span<const double> row(std::size_t g) const;
  double at(std::size_t g, std::size_t o) const { return row(g)[o]; }

  static CondPMF identity(std::size_t n);
  static CondPMF constant_output(std::size_t n_given, std::size_t n_out,
                                 std::size_t out);
  /// Every row equal to `p`.
  static CondPMF rows_equal(std::size_t n_given, const ProbVec& p);

 private:
  std::size_t n_given_, n_out_;
  std::vector<double> data_;
  std::vector<char> defined_;
};

/// Memoryless two-way channel transition law P(y1, y2 | x1, x2); every
/// (x1, x2) slice is a joint pmf on Y1 x Y2.
class TwoWayChannel {
 public:
  TwoWayChannel(std::size_t nx1, std::size_t nx2, std::size_t ny1,
                std::size_t ny2, std::vector<double> trans);

  std::size_t nx1() const { return nx1_; }
  std::size_t nx2() const { return nx2_; }
  std::size_t ny1() const { return ny1_; }
  std::size_t ny2() const { return ny2_; }

  double at(std::size_t x1, std::size_t x2, std::size_t y1,
            std::size_t y2) const {
    return trans_[((x1 * nx2_ + x2) * ny1_ + y1) * ny2_ + y2];
  }
  const std::vector<double>& trans() const { return trans_; }

  /// P(y2 | x1, x2), marginalized over y1.
  double marginal_y2(std::size_t x1, std::size_t x2, std::size_t y2) const;
  /// P(y1 | x1, x2), marginalized over y2.
  double marginal_y1(std::size_t x1, std::size_t x2, std::size_t y1) const;

 private:
  std::size_t nx1_, nx2_, ny1_, ny2_;
  std::vector<double> trans_;
};

/// Per-symbol distortion table d(s, shat) >= 0. Unless relaxed, every source
/// row must contain a zero so that D = 0 is meaningful.
class DistortionMatrix {
 public:
  DistortionMatrix(std::size_t n_src, std::size_t n_rec,
                   std::vector<double> d, bool require_zero_per_row = true);

  std::size_t n_src() const { return n_src_; }
  std::size_t n_rec() const { return n_rec_; }
  double at(std::size_t s, std::size_t shat) const {
    return d_[s * n_rec_ + shat];
  }
  double max_value() const;

  static DistortionMatrix hamming(std::size_t n);
  bool is_hamming() const;

 private:
  std::size_t n_src_, n_rec_;
  std::vector<double> d_;
};

}  // namespace twjscc
