#pragma once

// Conditional probability tables and the probabilistic objective.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/error.hpp"

namespace vbsmpe {

/// Flat position of `config` restricted to `vars` in a table whose last
/// listed variable varies fastest and whose first varies slowest.
inline std::size_t flat_index(std::span<const VariableId> vars,
                              std::span<const std::size_t> radices,
                              const Configuration& config) {
  const std::size_t card = vars.size();
  if (card == 0) return 0;
  auto value_at = [&](std::size_t j) -> std::size_t {
    const VariableId v = vars[j];
    if (v >= config.size() || config[v] >= radices[j]) {
      raise(ErrorCode::index, "configuration value out of range for variable " + std::to_string(v));
    }
    return config[v];
  };
  std::size_t position = value_at(card - 1);
  std::size_t size = radices[card - 1];
  for (std::size_t j = card - 1; j-- > 0;) {
    position += size * value_at(j);
    size *= radices[j];
  }
  return position;
}

inline std::size_t table_size(std::span<const std::size_t> radices) {
  std::size_t n = 1;
  for (auto r : radices) n *= r;
  return n;
}

/// p(child | parents). `variables` lists the child first, then the parents;
/// `radices[j]` is the frame size of `variables[j]`.
struct CptUniverse {
  std::vector<VariableId> variables;
  std::vector<std::size_t> radices;
  std::vector<double> valuations;

  std::size_t card() const { return variables.size(); }
};

inline double find_valuation(const Configuration& config, const CptUniverse& u) {
  const std::size_t idx = flat_index(u.variables, u.radices, config);
  if (idx >= u.valuations.size()) {
    raise(ErrorCode::index, "valuation index " + std::to_string(idx) + " past table end");
  }
  return u.valuations[idx];
}

/// Natural log of the product of CPT lookups; -inf when any factor is zero.
inline double log_prob_product(const Configuration& config, std::span<const CptUniverse> cpts) {
  double log_total = 0.0;
  for (const auto& u : cpts) {
    const double p = find_valuation(config, u);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    log_total += std::log(p);
  }
  return log_total;
}

/// Sum over the child's values is the slowest axis, so column entries for a
/// fixed parent assignment are `stride` apart.
inline std::vector<double> cpt_column_sums(const CptUniverse& u) {
  if (u.radices.empty()) return {};
  const std::size_t stride = table_size(u.radices) / u.radices.front();
  std::vector<double> sums(stride, 0.0);
  for (std::size_t i = 0; i < u.valuations.size(); ++i) sums[i % stride] += u.valuations[i];
  return sums;
}

}  // namespace vbsmpe
