#pragma once

#include <initializer_list>
#include <span>

#include "twjscc/tensor.hpp"

namespace twjscc {

// All measures are in bits.  Terms with zero mass contribute zero.  Tiny
// negative results from float cancellation (>= -1e-9) are clamped to 0;
// anything more negative indicates a caller bug and throws.

double entropy_bits(std::span<const double> pmf);

// H of the joint marginal of `p` over the given axes.
double entropy_of(const Pmf& p, std::span<const std::size_t> axes);
double entropy_of(const Pmf& p, std::initializer_list<std::size_t> axes);

// H(A | B) = H(A,B) - H(B).
double conditional_entropy(const Pmf& p, std::span<const std::size_t> a,
                           std::span<const std::size_t> b);
double conditional_entropy(const Pmf& p, std::initializer_list<std::size_t> a,
                           std::initializer_list<std::size_t> b);

// I(A ; B | C) = H(A,C) + H(B,C) - H(C) - H(A,B,C); C may be empty.
double conditional_mutual_information(const Pmf& p,
                                      std::span<const std::size_t> a,
                                      std::span<const std::size_t> b,
                                      std::span<const std::size_t> c);
double conditional_mutual_information(const Pmf& p,
                                      std::initializer_list<std::size_t> a,
                                      std::initializer_list<std::size_t> b,
                                      std::initializer_list<std::size_t> c);

double mutual_information(const Pmf& p, std::span<const std::size_t> a,
                          std::span<const std::size_t> b);
double mutual_information(const Pmf& p, std::initializer_list<std::size_t> a,
                          std::initializer_list<std::size_t> b);

// Binary entropy function h(p) in bits; h(0) = h(1) = 0.
double binary_entropy(double p);

}  // namespace twjscc
