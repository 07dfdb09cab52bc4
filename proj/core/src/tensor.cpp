#include "twjscc/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace twjscc {

Pmf::Pmf(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  init_strides();
  std::size_t n = 1;
  for (std::size_t d : dims_) {
    if (d < 1) throw std::invalid_argument("Pmf: zero-extent axis");
    n *= d;
  }
  mass_.assign(n, 0.0);
}

Pmf::Pmf(std::vector<std::size_t> dims, std::vector<double> mass)
    : Pmf(std::move(dims)) {
  if (mass.size() != mass_.size()) {
    throw std::invalid_argument("Pmf: mass size does not match dims");
  }
  mass_ = std::move(mass);
}

void Pmf::init_strides() {
  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * dims_[k];
  }
}

std::size_t Pmf::flatten(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("Pmf: rank");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (idx[k] >= dims_[k]) throw std::out_of_range("Pmf: index");
    flat += idx[k] * strides_[k];
  }
  return flat;
}

void Pmf::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
}

double Pmf::total() const {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

Pmf Pmf::marginal(std::span<const std::size_t> keep) const {
  for (std::size_t k : keep) {
    if (k >= dims_.size()) throw std::out_of_range("Pmf: marginal axis");
  }
  std::vector<std::size_t> out_dims(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) out_dims[j] = dims_[keep[j]];
  Pmf out(std::move(out_dims));

  std::vector<std::size_t> idx(dims_.size());
  std::vector<std::size_t> oidx(keep.size());
  for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
    if (mass_[flat] == 0.0) continue;
    unflatten(flat, idx);
    for (std::size_t j = 0; j < keep.size(); ++j) oidx[j] = idx[keep[j]];
    out.at(oidx) += mass_[flat];
  }
  return out;
}

}  // namespace twjscc
