#include "twjscc/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace twjscc {

namespace {

bool contains(std::span<const FactorSystem::VarId> vars,
              FactorSystem::VarId v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

}  // namespace

FactorSystem::VarId FactorSystem::add_variable(std::string name,
                                               std::size_t size) {
  if (size < 1) throw std::invalid_argument("FactorSystem: variable size");
  for (const auto& n : names_) {
    if (n == name) throw std::invalid_argument("FactorSystem: duplicate name");
  }
  names_.push_back(std::move(name));
  sizes_.push_back(size);
  covered_.push_back(false);
  return sizes_.size() - 1;
}

FactorSystem::VarId FactorSystem::find(std::string_view name) const {
  for (VarId v = 0; v < names_.size(); ++v) {
    if (names_[v] == name) return v;
  }
  throw std::out_of_range("FactorSystem: unknown variable");
}

void FactorSystem::require_vars(std::span<const VarId> vars) const {
  for (VarId v : vars) {
    if (v >= sizes_.size()) throw std::out_of_range("FactorSystem: var id");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (vars[i] == vars[j]) {
        throw std::invalid_argument("FactorSystem: repeated variable");
      }
    }
  }
}

void FactorSystem::mark_covered(VarId v) {
  if (covered_[v]) {
    throw std::logic_error("FactorSystem: variable covered twice");
  }
  covered_[v] = true;
}

std::vector<std::size_t> FactorSystem::dims_of(
    std::span<const VarId> vars) const {
  std::vector<std::size_t> d(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) d[i] = sizes_[vars[i]];
  return d;
}

void FactorSystem::add_prior(std::vector<VarId> vars,
                             std::vector<double> table) {
  require_vars(vars);
  Pmf t(dims_of(vars), std::move(table));
  if (std::abs(t.total() - 1.0) > 1e-9) {
    throw std::invalid_argument("FactorSystem: prior does not sum to 1");
  }
  for (VarId v : vars) mark_covered(v);
  factors_.push_back({std::move(vars), std::move(t)});
}

void FactorSystem::add_conditional(VarId out, std::vector<VarId> given,
                                   std::vector<double> table) {
  require_vars(given);
  if (contains(given, out)) {
    throw std::invalid_argument("FactorSystem: output conditions on itself");
  }
  std::vector<VarId> vars = given;
  vars.push_back(out);
  require_vars(vars);
  Pmf t(dims_of(vars), std::move(table));
  const std::size_t n_out = sizes_[out];
  const std::size_t n_rows = t.size() / n_out;
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0;
    for (std::size_t o = 0; o < n_out; ++o) s += t[r * n_out + o];
    if (std::abs(s - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "FactorSystem: conditional row does not sum to 1");
    }
  }
  mark_covered(out);
  factors_.push_back({std::move(vars), std::move(t)});
}

void FactorSystem::add_deterministic(VarId out, std::vector<VarId> given,
                                     std::vector<std::size_t> map) {
  require_vars(given);
  std::size_t n_rows = 1;
  for (VarId g : given) n_rows *= sizes_[g];
  if (map.size() != n_rows) {
    throw std::invalid_argument("FactorSystem: deterministic map size");
  }
  const std::size_t n_out = sizes_[out];
  std::vector<double> table(n_rows * n_out, 0.0);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (map[r] >= n_out) {
      throw std::out_of_range("FactorSystem: deterministic map value");
    }
    table[r * n_out + map[r]] = 1.0;
  }
  add_conditional(out, std::move(given), std::move(table));
}

Pmf FactorSystem::joint(std::span<const VarId> request) const {
  require_vars(request);
  for (VarId v = 0; v < covered_.size(); ++v) {
    if (!covered_[v]) {
      throw std::logic_error("FactorSystem: variable '" + names_[v] +
                             "' has no factor");
    }
  }

  // How many factors still reference each variable; a variable can be summed
  // out once this hits zero (unless requested).
  std::vector<std::size_t> uses(sizes_.size(), 0);
  for (const Factor& f : factors_) {
    for (VarId v : f.vars) ++uses[v];
  }

  std::vector<VarId> acc_vars;
  Pmf acc(std::vector<std::size_t>{}, std::vector<double>{1.0});

  std::vector<std::size_t> idx, aidx, fidx;
  for (const Factor& f : factors_) {
    std::vector<VarId> merged = acc_vars;
    for (VarId v : f.vars) {
      if (!contains(merged, v)) merged.push_back(v);
    }
    Pmf next(dims_of(merged));
    idx.assign(merged.size(), 0);
    aidx.assign(acc_vars.size(), 0);
    fidx.assign(f.vars.size(), 0);
    // Positions of acc/factor axes inside the merged tuple.
    std::vector<std::size_t> apos(acc_vars.size()), fpos(f.vars.size());
    for (std::size_t i = 0; i < acc_vars.size(); ++i) {
      apos[i] = static_cast<std::size_t>(
          std::find(merged.begin(), merged.end(), acc_vars[i]) -
          merged.begin());
    }
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
      fpos[i] = static_cast<std::size_t>(
          std::find(merged.begin(), merged.end(), f.vars[i]) - merged.begin());
    }
    for (std::size_t flat = 0; flat < next.size(); ++flat) {
      next.unflatten(flat, idx);
      for (std::size_t i = 0; i < apos.size(); ++i) aidx[i] = idx[apos[i]];
      for (std::size_t i = 0; i < fpos.size(); ++i) fidx[i] = idx[fpos[i]];
      next[flat] = acc.at(aidx) * f.table.at(fidx);
    }
    for (VarId v : f.vars) --uses[v];

    // Sum out variables no later factor touches and the caller did not ask
    // for; keeps the working table small.
    std::vector<std::size_t> keep;
    std::vector<VarId> kept_vars;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      VarId v = merged[i];
      if (uses[v] > 0 || contains(request, v)) {
        keep.push_back(i);
        kept_vars.push_back(v);
      }
    }
    if (keep.size() != merged.size()) {
      acc = next.marginal(keep);
      acc_vars = std::move(kept_vars);
    } else {
      acc = std::move(next);
      acc_vars = std::move(merged);
    }
  }

  // Reorder remaining axes to the requested order.
  std::vector<std::size_t> order(request.size());
  for (std::size_t i = 0; i < request.size(); ++i) {
    auto it = std::find(acc_vars.begin(), acc_vars.end(), request[i]);
    if (it == acc_vars.end()) {
      throw std::logic_error("FactorSystem: requested variable was lost");
    }
    order[i] = static_cast<std::size_t>(it - acc_vars.begin());
  }
  Pmf out = acc.marginal(order);
  if (std::abs(out.total() - 1.0) > 1e-9) {
    throw std::logic_error("FactorSystem: join mass " +
                           std::to_string(out.total()) + ", expected 1");
  }
  return out;
}

Pmf FactorSystem::joint(std::initializer_list<VarId> request) const {
  return joint(std::span<const VarId>(request.begin(), request.size()));
}

}  // namespace twjscc
