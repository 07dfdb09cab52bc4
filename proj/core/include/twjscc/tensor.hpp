#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace twjscc {

// Dense joint pmf over an ordered tuple of finite variables.  Axis k has
// extent dims()[k]; storage is row-major (last axis fastest).  Mass is kept
// exactly as supplied; helpers that need normalization do it explicitly.
class Pmf {
 public:
  explicit Pmf(std::vector<std::size_t> dims);
  Pmf(std::vector<std::size_t> dims, std::vector<double> mass);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return mass_.size(); }

  double& operator[](std::size_t flat) { return mass_[flat]; }
  double operator[](std::size_t flat) const { return mass_[flat]; }
  std::span<const double> mass() const { return mass_; }

  double at(std::span<const std::size_t> idx) const {
    return mass_[flatten(idx)];
  }
  double& at(std::span<const std::size_t> idx) { return mass_[flatten(idx)]; }

  std::size_t flatten(std::span<const std::size_t> idx) const;
  void unflatten(std::size_t flat, std::span<std::size_t> idx) const;

  double total() const;

  // Sums out every axis not in `keep`; result axes follow the order given in
  // `keep` (which must be distinct, not necessarily sorted).
  Pmf marginal(std::span<const std::size_t> keep) const;
  Pmf marginal(std::initializer_list<std::size_t> keep) const {
    return marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> mass_;

  void init_strides();
};

}  // namespace twjscc
