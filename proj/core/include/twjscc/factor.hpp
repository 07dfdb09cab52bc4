#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twjscc/tensor.hpp"

namespace twjscc {

// A directed factorization over named finite variables.  Each variable is
// introduced once and must be covered by exactly one factor (a prior, a
// conditional row set, or a deterministic map) before joints are requested.
// joint() folds the factors together in insertion order, summing out any
// variable that no later factor and no requested axis still references, so
// intermediate tables stay near the size of the final answer.
class FactorSystem {
 public:
  using VarId = std::size_t;

  VarId add_variable(std::string name, std::size_t size);
  std::size_t var_size(VarId v) const { return sizes_.at(v); }
  std::size_t variable_count() const { return sizes_.size(); }
  VarId find(std::string_view name) const;

  // Joint prior over `vars`; `table` is row-major in `vars` order and must
  // sum to 1.  Marks every listed variable as covered.
  void add_prior(std::vector<VarId> vars, std::vector<double> table);

  // P(out | given): `table` is row-major over [given..., out]; each row over
  // `out` must sum to 1.  Rows whose conditioning tuple has zero mass in the
  // final join may hold anything; a uniform stub keeps the product a pmf.
  void add_conditional(VarId out, std::vector<VarId> given,
                       std::vector<double> table);

  // out = map[flat(given)], a point-mass conditional.
  void add_deterministic(VarId out, std::vector<VarId> given,
                         std::vector<std::size_t> map);

  // Joint pmf over `request` (axes in that order); every variable must be
  // covered.  The result sums to 1 within 1e-9 or the call throws.
  Pmf joint(std::span<const VarId> request) const;
  Pmf joint(std::initializer_list<VarId> request) const;

 private:
  struct Factor {
    std::vector<VarId> vars;
    Pmf table;
  };

  std::vector<std::string> names_;
  std::vector<std::size_t> sizes_;
  std::vector<bool> covered_;
  std::vector<Factor> factors_;

  void require_vars(std::span<const VarId> vars) const;
  void mark_covered(VarId v);
  std::vector<std::size_t> dims_of(std::span<const VarId> vars) const;
};

}  // namespace twjscc
